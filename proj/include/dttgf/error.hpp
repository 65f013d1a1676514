#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dttgf {

enum class ErrorKind {
  size,
  duplicate_node,
  degenerate_triangle,
  malformed_tour,
  domain,
  dimension,
  parse,
  unsupported_format,
  config,
  invariant,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::size: return "size";
    case ErrorKind::duplicate_node: return "duplicate-node";
    case ErrorKind::degenerate_triangle: return "degenerate-triangle";
    case ErrorKind::malformed_tour: return "malformed-tour";
    case ErrorKind::domain: return "domain";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::parse: return "parse";
    case ErrorKind::unsupported_format: return "unsupported-format";
    case ErrorKind::config: return "config";
    case ErrorKind::invariant: return "invariant";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the triangulator; carries every index that shares a coordinate
/// with an earlier index.
class DuplicateNodeError : public Error {
 public:
  explicit DuplicateNodeError(std::vector<std::size_t> indices)
      : Error(ErrorKind::duplicate_node, format(indices)),
        indices_(std::move(indices)) {}

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  static std::string format(const std::vector<std::size_t>& indices) {
    std::string msg = "duplicate points at indices:";
    for (auto i : indices) msg += " " + std::to_string(i);
    return msg;
  }

  std::vector<std::size_t> indices_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

// Map of error kinds onto CLI exit codes: 2 config, 3 input, 4 internal.
inline int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::invariant: return 4;
    default: return 3;
  }
}

}  // namespace dttgf
