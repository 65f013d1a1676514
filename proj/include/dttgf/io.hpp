#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "dttgf/error.hpp"
#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"

namespace dttgf {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Parses the EUC_2D subset of TSPLIB. Coordinates outside the unit square
/// are normalized into it; the map back is kept on the instance.
inline TspInstance parse_tsplib(std::string_view text) {
  std::string name = "instance";
  std::size_t dimension = 0;
  bool have_dimension = false;
  bool in_coords = false;
  std::vector<std::pair<long, Point>> rows;
  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    const auto line = detail::trim(lines[ln]);
    if (line.empty()) continue;
    if (in_coords) {
      if (detail::upper(line) == "EOF") break;
      const auto tok = detail::split_ws(line);
      long id = 0;
      Point p;
      if (tok.size() != 3 || !detail::parse_number(tok[0], id) ||
          !detail::parse_number(tok[1], p.x) || !detail::parse_number(tok[2], p.y)) {
        detail::parse_fail(line_no, "malformed coordinate line '" + std::string(line) + "'");
      }
      rows.emplace_back(id, p);
      continue;
    }
    const std::string up = detail::upper(line);
    if (up == "EOF") break;
    if (up == "NODE_COORD_SECTION") {
      in_coords = true;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      detail::parse_fail(line_no, "expected 'KEY : value', got '" + std::string(line) + "'");
    }
    const std::string key = detail::upper(detail::trim(line.substr(0, colon)));
    const auto value = detail::trim(line.substr(colon + 1));
    if (key == "NAME") {
      name = std::string(value);
    } else if (key == "TYPE") {
      if (detail::upper(value) != "TSP") {
        fail(ErrorKind::unsupported_format, "unsupported TYPE: " + std::string(value));
      }
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (detail::upper(value) != "EUC_2D") {
        fail(ErrorKind::unsupported_format, "unsupported EDGE_WEIGHT_TYPE: " + std::string(value));
      }
    } else if (key == "DIMENSION") {
      if (!detail::parse_number(value, dimension)) detail::parse_fail(line_no, "bad DIMENSION");
      have_dimension = true;
    }
    // COMMENT and other header keys are ignored.
  }
  if (!have_dimension) fail(ErrorKind::parse, "missing DIMENSION");
  if (rows.size() != dimension) {
    fail(ErrorKind::parse, "DIMENSION " + std::to_string(dimension) + " but " +
                               std::to_string(rows.size()) + " coordinate lines");
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Point> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(r.second);
  const Normalization norm = normalize_points(pts);
  return TspInstance(std::move(pts), name, norm);
}

/// Writes coordinates in the instance's original frame, so parsing the
/// output reproduces the same normalized points.
inline std::string write_tsplib(const TspInstance& inst) {
  std::ostringstream os;
  os << "NAME : " << inst.name() << "\n"
     << "TYPE : TSP\n"
     << "DIMENSION : " << inst.size() << "\n"
     << "EDGE_WEIGHT_TYPE : EUC_2D\n"
     << "NODE_COORD_SECTION\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Point p = inst.normalization().to_original(inst.points()[i]);
    os << (i + 1) << ' ' << detail::format_double(p.x) << ' ' << detail::format_double(p.y) << '\n';
  }
  os << "EOF\n";
  return os.str();
}

/// One 0-based node index per line.
inline std::string write_tour(const Tour& t) {
  std::string out;
  for (const NodeId v : t.order) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

inline Tour parse_tour(std::string_view text, std::size_t n) {
  Tour t;
  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = detail::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    NodeId v = 0;
    if (!detail::parse_number(line, v)) detail::parse_fail(ln + 1, "expected a node index");
    t.order.push_back(v);
  }
  validate_tour(t, n);
  return t;
}

/// "i j p" lines, i < j, sorted, p > 0 only.
inline std::string write_heatmap(const Heatmap& P) {
  std::string out;
  for (const auto& e : P.entries()) {
    out += std::to_string(e.i);
    out += ' ';
    out += std::to_string(e.j);
    out += ' ';
    out += detail::format_double(e.p);
    out += '\n';
  }
  return out;
}

inline Heatmap parse_heatmap(std::string_view text, std::size_t n) {
  Heatmap P(n);
  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = detail::trim(lines[ln]);
    if (line.empty()) continue;
    const auto tok = detail::split_ws(line);
    NodeId i = 0, j = 0;
    double p = 0.0;
    if (tok.size() != 3 || !detail::parse_number(tok[0], i) || !detail::parse_number(tok[1], j) ||
        !detail::parse_number(tok[2], p)) {
      detail::parse_fail(ln + 1, "expected 'i j p'");
    }
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n ||
        i == j || !(p > 0.0 && p <= 1.0)) {
      detail::parse_fail(ln + 1, "heatmap entry out of range");
    }
    P.set(i, j, p);
  }
  return P;
}

/// {"name": ..., "points": [[x, y], ...]}
inline TspInstance parse_instance_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::parse, std::string("instance json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    fail(ErrorKind::parse, "instance json needs a 'points' array");
  }
  std::vector<Point> pts;
  for (const auto& row : j["points"]) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      fail(ErrorKind::parse, "instance json: each point must be [x, y]");
    }
    pts.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  const std::string name = j.value("name", std::string("instance"));
  const Normalization norm = normalize_points(pts);
  return TspInstance(std::move(pts), name, norm);
}

inline std::string write_instance_json(const TspInstance& inst) {
  nlohmann::json j;
  j["name"] = inst.name();
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : inst.points()) {
    const Point q = inst.normalization().to_original(p);
    pts.push_back({q.x, q.y});
  }
  return j.dump() + "\n";
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::parse, "cannot write " + path.string());
  out << content;
}

/// Loads TSPLIB or JSON, chosen by extension (.json) or leading '{'.
inline TspInstance load_instance(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto body = detail::trim(text);
  if (path.extension() == ".json" || (!body.empty() && body.front() == '{')) {
    return parse_instance_json(text);
  }
  return parse_tsplib(text);
}

inline void save_instance(const std::filesystem::path& path, const TspInstance& inst) {
  write_file(path, path.extension() == ".json" ? write_instance_json(inst) : write_tsplib(inst));
}

}  // namespace dttgf
