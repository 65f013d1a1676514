// dttgf command line: gen, solve, eval, bench.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dttgf/dttgf.hpp"

namespace fs = std::filesystem;
using namespace dttgf;

namespace {

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  return parse_config(read_file(path));
}

// A reference is either a tour file or a plain number.
double reference_length(const std::string& ref, const TspInstance& inst) {
  double v = 0.0;
  if (detail::parse_number(std::string_view(detail::trim(ref)), v)) return v;
  return tour_length(parse_tour(read_file(ref), inst.size()), inst) * inst.normalization().scale;
}

std::optional<double> bench_reference(const fs::path& inst_path, const TspInstance& inst) {
  fs::path p = inst_path;
  p.replace_extension(".ref");
  if (fs::exists(p)) {
    double v = 0.0;
    const std::string text = read_file(p);
    if (!detail::parse_number(detail::trim(text), v)) fail(ErrorKind::parse, "bad reference in " + p.string());
    return v;
  }
  p.replace_extension(".tour");
  if (fs::exists(p)) {
    return tour_length(parse_tour(read_file(p), inst.size()), inst) * inst.normalization().scale;
  }
  return std::nullopt;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& out, const std::string& name) {
  TspInstance inst = gen_uniform(n, seed);
  if (!name.empty()) inst = TspInstance(inst.points(), name, inst.normalization());
  save_instance(out, inst);
  return 0;
}

struct SolveArgs {
  std::string in, config, out_tour, report, dump_prefix;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

int cmd_solve(const SolveArgs& a) {
  const TspInstance inst = load_instance(a.in);
  PipelineConfig cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  cfg.keep_heatmaps = !a.dump_prefix.empty();
  const RunReport rep = run(inst, cfg);

  if (!a.out_tour.empty()) write_file(a.out_tour, write_tour(rep.tour));
  if (!a.report.empty()) write_file(a.report, to_json(rep).dump(2) + "\n");
  if (cfg.keep_heatmaps) {
    write_file(a.dump_prefix + ".merged.heatmap", write_heatmap(*rep.heatmap_merged));
    write_file(a.dump_prefix + ".filtered.heatmap", write_heatmap(*rep.heatmap_filtered));
    write_file(a.dump_prefix + ".warmed.heatmap", write_heatmap(*rep.heatmap_warmed));
  }
  std::cout << rep.instance << " n=" << rep.n << " length=" << fmt(rep.length)
            << " rescaled=" << fmt(rep.length_rescaled) << " time_ms=" << fmt(rep.times.total)
            << "\n";
  return 0;
}

int cmd_eval(const std::string& tour_path, const std::string& inst_path, const std::string& ref) {
  const TspInstance inst = load_instance(inst_path);
  const Tour t = parse_tour(read_file(tour_path), inst.size());
  const double len = tour_length(t, inst);
  const double rescaled = len * inst.normalization().scale;
  std::cout << "length=" << fmt(len) << " rescaled=" << fmt(rescaled);
  if (!ref.empty()) {
    std::cout << " drop=" << fmt(drop_percent(rescaled, reference_length(ref, inst))) << "%";
  }
  std::cout << "\n";
  return 0;
}

int cmd_bench(const std::string& suite, const std::string& config) {
  const PipelineConfig cfg = load_config(config);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(suite)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".tsp" || ext == ".json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::cout << "instance,n,length,drop,t_dt,t_sampling,t_solving,t_merging,t_warmup,t_search,t_total\n";
  for (const auto& f : files) {
    const TspInstance inst = load_instance(f);
    const RunReport r = run(inst, cfg);
    const auto ref = bench_reference(f, inst);
    std::cout << f.stem().string() << ',' << r.n << ',' << fmt(r.length_rescaled) << ','
              << (ref ? fmt(drop_percent(r.length_rescaled, *ref)) : std::string("")) << ','
              << fmt(r.times.triangulation) << ',' << fmt(r.times.sampling) << ','
              << fmt(r.times.solving) << ',' << fmt(r.times.merging) << ','
              << fmt(r.times.warmup) << ',' << fmt(r.times.search) << ',' << fmt(r.times.total)
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delaunay-guided divide-and-conquer TSP solver"};
  app.require_subcommand(1);

  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_name;
  auto* gen = app.add_subcommand("gen", "write a uniform random instance");
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path (.tsp or .json)")->required();
  gen->add_option("--name", gen_name, "instance name");

  SolveArgs sa;
  std::uint64_t solve_seed = 0;
  std::size_t solve_threads = 1;
  auto* solve = app.add_subcommand("solve", "run the pipeline on one instance");
  solve->add_option("--in", sa.in, "instance (TSPLIB or JSON)")->required();
  solve->add_option("--config", sa.config, "key=value config file");
  solve->add_option("--out-tour", sa.out_tour, "tour output, one 0-based index per line");
  solve->add_option("--report", sa.report, "JSON run report");
  solve->add_option("--dump-heatmap", sa.dump_prefix,
                    "prefix for merged/filtered/warmed heatmap dumps");
  auto* seed_opt = solve->add_option("--seed", solve_seed, "overrides the config seed");
  auto* threads_opt = solve->add_option("--threads", solve_threads, "overrides the config threads");

  std::string ev_tour, ev_inst, ev_ref;
  auto* eval = app.add_subcommand("eval", "measure a tour");
  eval->add_option("--tour", ev_tour)->required();
  eval->add_option("--instance", ev_inst)->required();
  eval->add_option("--reference", ev_ref, "reference tour file or length");

  std::string b_suite, b_config;
  auto* bench = app.add_subcommand("bench", "run every instance in a directory, CSV to stdout");
  bench->add_option("--suite", b_suite)->required();
  bench->add_option("--config", b_config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code_for(ErrorKind::config);
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_seed, gen_out, gen_name);
    if (*solve) {
      if (*seed_opt) sa.seed = solve_seed;
      if (*threads_opt) sa.threads = solve_threads;
      return cmd_solve(sa);
    }
    if (*eval) return cmd_eval(ev_tour, ev_inst, ev_ref);
    if (*bench) return cmd_bench(b_suite, b_config);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error (input): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
