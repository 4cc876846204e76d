#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxflow/io.hpp"
#include "maxflow/oracle.hpp"
#include "maxflow/solver.hpp"
#include "maxflow/surface.hpp"

using namespace maxflow;

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  size_t k = xs.size();
  return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

Problem load_problem(const std::string& path, ParseInfo* info = nullptr) {
  const bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + path);
  return binary ? read_problem_binary(in) : parse_dimacs(in, info);
}

BuildMode parse_mode(const std::string& mode) {
  if (mode == "absolute") return BuildMode::absolute;
  if (mode == "relative") return BuildMode::relative;
  return BuildMode::auto_select;
}

bool debug_invariants_enabled(bool flag) {
  if (flag) return true;
  const char* env = std::getenv("MAXFLOW_DEBUG_INVARIANTS");
  return env != nullptr && std::string(env) == "1";
}

struct SolveOutcome {
  int64_t flow = 0;
  StatsReport report;
  CutAssignment cut;
};

// One build+solve per repeat; reported times are medians, flow and
// counters come from the last run (they are identical across runs).
SolveOutcome run_engine(const Problem& problem, const std::string& algo,
                        BuildMode mode, int repeat, bool debug) {
  SolveOutcome out;
  std::vector<double> build_times, solve_times;
  for (int i = 0; i < repeat; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    BuildResult r = build(problem, mode);
    build_times.push_back(ms_since(t0));

    if (algo == "oracle") {
      auto t1 = std::chrono::steady_clock::now();
      out.flow = oracle_max_flow(problem);
      solve_times.push_back(ms_since(t1));
      out.report.solve.flow = out.flow;
      out.cut.side.assign(problem.n, 1);  // oracle reports no tree sides
      out.cut.flow = out.flow;
    } else {
      SolveOptions options{algo == "fcbk" ? Algo::fcbk : Algo::cbk, debug};
      BkSolver solver(r.store, options);
      out.flow = solver.solve();
      solve_times.push_back(solver.stats().solve_ms);
      out.report.solve = solver.stats();
      out.cut = extract_cut(r.store);
    }
    out.report.n = r.store.n;
    out.report.m_i = r.store.m_i;
    out.report.m_i_plus = r.m_i_plus;
    out.report.memory_bytes = memory_bytes(r.store);
    out.report.initial_flow = r.initial_flow;
    out.report.mode = r.store.mode == RefMode::absolute ? "absolute" : "relative";
  }
  out.report.algo = algo;
  out.report.build_ms = median(build_times);
  out.report.solve_ms = median(solve_times);
  return out;
}

struct SurfaceDims {
  uint32_t x = 0, y = 0, z = 0, k = 1;
};

SurfaceDims parse_dims(const std::string& text) {
  SurfaceDims d;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(text);
  std::string main = text, ktail;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    main = text.substr(0, pos);
    ktail = text.substr(pos + 1);
  }
  std::istringstream m(main);
  if (!(m >> d.x >> sep1 >> d.y >> sep2 >> d.z) || sep1 != 'x' || sep2 != 'x')
    throw std::runtime_error("dims must look like 6x6x6 or 6x6x6:2");
  if (!ktail.empty()) d.k = static_cast<uint32_t>(std::stoul(ktail));
  return d;
}

int run_check(const std::string& seed_range, const std::vector<std::string>& files,
              bool debug) {
  std::vector<Problem> problems;
  std::vector<std::string> labels;
  if (!seed_range.empty()) {
    auto dots = seed_range.find("..");
    if (dots == std::string::npos)
      throw std::runtime_error("--seeds wants a range like 0..99");
    uint64_t from = std::stoull(seed_range.substr(0, dots));
    uint64_t to = std::stoull(seed_range.substr(dots + 2));
    for (uint64_t s = from; s <= to; ++s) {
      problems.push_back(gen_differential_instance(s));
      labels.push_back("seed " + std::to_string(s));
    }
  }
  for (const std::string& f : files) {
    problems.push_back(load_problem(f));
    labels.push_back(f);
  }
  if (problems.empty()) throw std::runtime_error("check needs --seeds or input files");

  uint64_t failures = 0;
  for (size_t i = 0; i < problems.size(); ++i) {
    const Problem& p = problems[i];
    int64_t expected = oracle_max_flow(p);
    BuildResult rc = build(p);
    int64_t cbk = solve_cbk(rc.store, nullptr, debug);
    BuildResult rf = build(p);
    int64_t fcbk = solve_fcbk(rf.store, nullptr, debug);
    int64_t cut_value = oracle_cut_value(p, extract_cut(rc.store));
    bool ok = cbk == expected && fcbk == expected && cut_value == expected;
    if (!ok) {
      ++failures;
      std::cerr << "MISMATCH " << labels[i] << ": oracle=" << expected << " cbk=" << cbk
                << " fcbk=" << fcbk << " cut=" << cut_value << '\n';
    }
  }
  std::cout << problems.size() - failures << "/" << problems.size() << " agree\n";
  return failures == 0 ? 0 : 1;
}

int run_bench(const std::vector<std::string>& files, int repeat,
              const std::string& json_path) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  bool any_failed = false;
  for (const std::string& f : files) {
    try {
      Problem p = load_problem(f);
      for (const char* algo : {"cbk", "fcbk"}) {
        SolveOutcome out = run_engine(p, algo, BuildMode::auto_select, repeat, false);
        nlohmann::ordered_json row{{"input", f},
                                   {"algo", algo},
                                   {"n", out.report.n},
                                   {"m_i_plus", out.report.m_i_plus},
                                   {"m_i", out.report.m_i},
                                   {"build_ms", out.report.build_ms},
                                   {"solve_ms", out.report.solve_ms},
                                   {"total_ms", out.report.build_ms + out.report.solve_ms},
                                   {"flow", out.flow},
                                   {"memory_bytes", out.report.memory_bytes},
                                   {"augmentations", out.report.solve.augmentations},
                                   {"orphans_processed", out.report.solve.orphans_processed},
                                   {"growth_edge_scans", out.report.solve.growth_edge_scans},
                                   {"findroot_traversals_total",
                                    out.report.solve.findroot_traversals_total}};
        rows.push_back(row);
        std::ostringstream line;
        line << f << " [" << algo << "]";
        std::cout << line.str() << "  n=" << out.report.n
                  << " m_i+=" << out.report.m_i_plus << " m_i=" << out.report.m_i
                  << " build=" << out.report.build_ms << "ms solve=" << out.report.solve_ms
                  << "ms total=" << out.report.build_ms + out.report.solve_ms
                  << "ms flow=" << out.flow << '\n';
      }
    } catch (const std::exception& e) {
      any_failed = true;
      std::cerr << f << ": " << e.what() << '\n';
    }
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << rows.dump(2) << '\n';
  }
  return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum s-t cut / maximum s-t flow toolkit"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one problem and print the flow");
  std::string solve_input, solve_algo = "fcbk", solve_mode = "auto";
  std::string cut_path, stats_path, surface_dims_text, surface_out;
  int solve_repeat = 1;
  bool solve_debug = false;
  solve->add_option("input", solve_input, "DIMACS file, or .bin container")->required();
  solve->add_option("--algo", solve_algo, "cbk, fcbk, or oracle")
      ->check(CLI::IsMember({"cbk", "fcbk", "oracle"}));
  solve->add_option("--mode", solve_mode, "auto, absolute, or relative")
      ->check(CLI::IsMember({"auto", "absolute", "relative"}));
  solve->add_option("--repeat", solve_repeat, "runs; times reported as medians")
      ->check(CLI::PositiveNumber);
  solve->add_option("--cut", cut_path, "write the per-vertex cut sides here");
  solve->add_option("--stats", stats_path, "write the stats JSON here");
  solve->add_option("--surface-dims", surface_dims_text,
                    "interpret the cut as a surface problem, e.g. 12x12x10 or 1x1x6:2");
  solve->add_option("--surface-out", surface_out, "write the extracted height map here");
  solve->add_flag("--debug-invariants", solve_debug,
                  "validate solver invariants (also MAXFLOW_DEBUG_INVARIANTS=1)");

  // check
  auto* check = app.add_subcommand("check", "differential check: cbk vs fcbk vs oracle");
  std::string check_seeds;
  std::vector<std::string> check_files;
  bool check_debug = false;
  check->add_option("--seeds", check_seeds, "seed range like 0..99");
  check->add_option("inputs", check_files, "problem files to check");
  check->add_flag("--debug-invariants", check_debug);

  // gen-random
  auto* gen = app.add_subcommand("gen-random", "write a seeded random instance");
  uint64_t gr_seed = 0, gr_n = 10, gr_m = 20;
  uint32_t gr_cap = 10;
  double gr_density = 0.5;
  std::string gr_out, gr_format = "dimacs";
  gen->add_option("--seed", gr_seed);
  gen->add_option("--n", gr_n)->check(CLI::PositiveNumber);
  gen->add_option("--m", gr_m);
  gen->add_option("--cap-max", gr_cap);
  gen->add_option("--density", gr_density, "terminal density in [0,1]");
  gen->add_option("--format", gr_format)->check(CLI::IsMember({"dimacs", "bin"}));
  gen->add_option("--out", gr_out, "output path (default stdout, dimacs only)");

  // gen-surface
  auto* gs = app.add_subcommand(
      "gen-surface", "build a surface-detection problem from volumes or synthetically");
  std::string gs_dims_text, gs_out, gs_truth_out;
  std::vector<std::string> gs_volumes, gs_sidecars;
  uint64_t gs_seed = 0;
  uint32_t gs_delta = 1, gs_delta_truth = 1, gs_dmin = 1, gs_dmax = 1;
  bool gs_synth = false;
  gs->add_option("--volume", gs_volumes, "raw voxel file(s); repeat for multi-surface");
  gs->add_option("--sidecar", gs_sidecars, "JSON sidecar(s) with dims and element width");
  gs->add_flag("--synth", gs_synth, "generate a synthetic volume with planted truth");
  gs->add_option("--seed", gs_seed);
  gs->add_option("--dims", gs_dims_text, "synthetic dims, e.g. 6x6x6");
  gs->add_option("--delta", gs_delta, "smoothness bound between neighboring columns");
  gs->add_option("--delta-truth", gs_delta_truth, "Lipschitz bound of the plant");
  gs->add_option("--dmin", gs_dmin, "minimum inter-surface margin");
  gs->add_option("--dmax", gs_dmax, "maximum inter-surface margin");
  gs->add_option("--out", gs_out, "problem output (.bin container)")->required();
  gs->add_option("--truth-out", gs_truth_out, "write the planted height map here");

  // bench
  auto* bench = app.add_subcommand("bench", "per-input build/solve medians and counters");
  std::vector<std::string> bench_files;
  int bench_repeat = 5;
  std::string bench_json;
  bench->add_option("inputs", bench_files, "problem files")->required();
  bench->add_option("--repeat", bench_repeat, "samples per input; medians reported")
      ->check(CLI::PositiveNumber);
  bench->add_option("--json", bench_json, "machine-readable report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      Problem p = load_problem(solve_input);
      SolveOutcome out = run_engine(p, solve_algo, parse_mode(solve_mode), solve_repeat,
                                    debug_invariants_enabled(solve_debug));
      std::cout << out.flow << '\n';
      if (!cut_path.empty()) {
        std::ofstream cut_file(cut_path);
        write_cut(out.cut, cut_file);
      }
      if (!stats_path.empty()) {
        std::ofstream stats_file(stats_path);
        write_stats_json(out.report, stats_file);
      }
      if (!surface_out.empty()) {
        if (surface_dims_text.empty())
          throw std::runtime_error("--surface-out needs --surface-dims");
        if (solve_algo == "oracle")
          throw std::runtime_error("surface extraction needs a tree-building engine");
        SurfaceDims d = parse_dims(surface_dims_text);
        HeightMap map = extract_surface(out.cut, d.x, d.y, d.z, d.k);
        std::ofstream hm(surface_out);
        write_heightmap(map, hm);
      }
      return 0;
    }
    if (check->parsed())
      return run_check(check_seeds, check_files, debug_invariants_enabled(check_debug));
    if (gen->parsed()) {
      Problem p = gen_random(gr_seed, gr_n, gr_m, gr_cap, gr_density);
      if (gr_format == "bin") {
        if (gr_out.empty()) throw std::runtime_error("binary output needs --out");
        std::ofstream out(gr_out, std::ios::binary);
        write_problem_binary(p, out);
      } else if (gr_out.empty()) {
        write_dimacs(p, std::cout);
      } else {
        std::ofstream out(gr_out);
        write_dimacs(p, out);
      }
      return 0;
    }
    if (gs->parsed()) {
      std::vector<CostVolume> volumes;
      HeightMap truth;
      bool have_truth = false;
      if (gs_synth) {
        SurfaceDims d = parse_dims(gs_dims_text);
        auto [vol, planted] = synth_volume(gs_seed, d.x, d.y, d.z, gs_delta_truth);
        volumes.push_back(std::move(vol));
        truth = std::move(planted);
        have_truth = true;
      } else {
        if (gs_volumes.empty() || gs_volumes.size() != gs_sidecars.size())
          throw std::runtime_error("need matching --volume and --sidecar lists");
        for (size_t i = 0; i < gs_volumes.size(); ++i) {
          std::ifstream sidecar(gs_sidecars[i]);
          if (!sidecar) throw std::runtime_error("cannot open " + gs_sidecars[i]);
          nlohmann::json meta = nlohmann::json::parse(sidecar);
          auto dims = meta.at("dims");
          std::ifstream raw(gs_volumes[i], std::ios::binary);
          if (!raw) throw std::runtime_error("cannot open " + gs_volumes[i]);
          volumes.push_back(read_volume_raw(raw, dims.at(0), dims.at(1), dims.at(2),
                                            meta.value("element_bytes", 4u)));
        }
      }
      Problem p = volumes.size() == 1
                      ? build_single_surface(volumes[0], gs_delta)
                      : build_multi_surface(volumes, gs_delta, gs_dmin, gs_dmax);
      std::ofstream out(gs_out, std::ios::binary);
      write_problem_binary(p, out);
      if (have_truth && !gs_truth_out.empty()) {
        std::ofstream truth_file(gs_truth_out);
        write_heightmap(truth, truth_file);
      }
      std::cerr << "wrote " << gs_out << " with " << p.n << " vertices and "
                << p.edges.size() << " edge pairs\n";
      return 0;
    }
    if (bench->parsed()) return run_bench(bench_files, bench_repeat, bench_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
