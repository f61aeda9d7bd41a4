#pragma once

// Command-line front end. Data goes to `out`, diagnostics to `err`.
// Exit codes: 0 success, 1 verification or comparison failure, 2 usage,
// parse or file errors.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmatch/bench.hpp"
#include "bmatch/compare.hpp"
#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"
#include "bmatch/io.hpp"
#include "bmatch/oracle.hpp"
#include "bmatch/solver.hpp"

namespace bmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Maximum-weight bipartite b-matching solver", "bmatch"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string result_path;
  double eps = 1e-9;

  auto* solve = app.add_subcommand("solve", "Solve an instance file; prints result JSON");
  bool greedy_init = false;
  bool check_invariants = false;
  solve->add_option("file", instance_path, "Instance file")->required();
  solve->add_option("--eps", eps, "Absolute equality tolerance")
      ->check(CLI::NonNegativeNumber);
  solve->add_flag("--greedy-init", greedy_init,
                  "Seed Phase I with a greedy equality-edge matching");
  solve->add_flag("--check-invariants", check_invariants,
                  "Check dual feasibility, equality edges and copy-group "
                  "observations at every step");

  auto* verify = app.add_subcommand("verify", "Check a result against an instance");
  verify->add_option("instance", instance_path, "Instance file")->required();
  verify->add_option("result", result_path, "Result JSON file")->required();
  verify->add_option("--eps", eps, "Weight tolerance")->check(CLI::NonNegativeNumber);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum of a small instance");
  OracleLimits limits;
  oracle->add_option("file", instance_path, "Instance file")->required();
  oracle->add_option("--max-states", limits.max_states, "Enumeration budget")
      ->check(CLI::PositiveNumber);
  oracle->add_flag("--simple-edges", limits.simple_edges,
                   "Allow each pair at most once");

  auto* gen = app.add_subcommand("gen", "Generate a random feasible instance");
  std::size_t gen_s = 1, gen_t = 1;
  Capacity gen_cap = 3;
  double wmin = -9.0, wmax = 9.0;
  bool integer_weights = false;
  std::uint64_t seed = 0;
  gen->add_option("--s", gen_s, "Left vertex count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--t", gen_t, "Right vertex count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--cap-max", gen_cap, "Largest drawn capacity")->check(CLI::PositiveNumber);
  gen->add_option("--wmin", wmin, "Lowest weight");
  gen->add_option("--wmax", wmax, "Highest weight");
  gen->add_flag("--int", integer_weights, "Integer weights");
  gen->add_option("--seed", seed, "Random seed");

  auto* compare = app.add_subcommand("compare", "Compare solver and oracle on random instances");
  CompareOptions copts;
  std::string corpus_dir;
  std::vector<std::string> include_files;
  compare->add_option("--count", copts.count, "Number of random instances");
  compare->add_option("--max-s", copts.max_s, "Largest left size")->check(CLI::PositiveNumber);
  compare->add_option("--max-t", copts.max_t, "Largest right size")->check(CLI::PositiveNumber);
  compare->add_option("--cap-max", copts.cap_max, "Largest drawn capacity")
      ->check(CLI::PositiveNumber);
  compare->add_option("--seed", copts.seed, "Seed of the first instance");
  compare->add_flag("--all-negative", copts.all_negative, "Weights in [-9, -1]");
  compare->add_option("--corpus", corpus_dir, "Directory for counterexample files");
  compare->add_option("--include", include_files,
                      "Instance file evaluated before the random stream (repeatable)");
  compare->add_option("--max-states", copts.limits.max_states, "Oracle budget")
      ->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "Runtime scaling on generated instances");
  std::vector<std::size_t> sizes{128, 256, 512};
  std::size_t reps = 3;
  bench->add_option("--sizes", sizes, "Comma separated sizes n = s + t")->delimiter(',');
  bench->add_option("--reps", reps, "Timed repetitions per size");
  bench->add_option("--seed", seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve) {
      SolverConfig cfg;
      cfg.eps = eps;
      cfg.check_invariants = check_invariants;
      if (greedy_init) {
        cfg.initial_matching = SolverConfig::InitialMatching::GreedyEquality;
      }
      const auto inst = parse_instance(read_file(instance_path));
      const auto result = solve_b_matching(inst, cfg);
      out << render_result(result.matching, result.report);
      return kExitOk;
    }
    if (*verify) {
      const auto inst = parse_instance(read_file(instance_path));
      const auto bm = parse_result(read_file(result_path));
      const auto report = verify_b_matching(inst, bm, eps);
      if (report) {
        out << "pass\n";
        return kExitOk;
      }
      out << "fail: " << report.violation << "\n";
      return kExitFailure;
    }
    if (*oracle) {
      const auto inst = parse_instance(read_file(instance_path));
      const auto result = brute_force_b_matching(inst, limits);
      out << render_result(result.matching, SolveReport{});
      return kExitOk;
    }
    if (*gen) {
      out << render_instance(generate_instance(gen_s, gen_t, gen_cap, wmin, wmax,
                                               integer_weights, seed));
      return kExitOk;
    }
    if (*compare) {
      if (!corpus_dir.empty()) copts.corpus_dir = corpus_dir;
      for (const auto& path : include_files) {
        copts.extra.push_back({std::filesystem::path(path).stem().string(),
                               parse_instance(read_file(path))});
      }
      const auto summary = run_compare(copts, out);
      if (copts.corpus_dir && summary.disagree > 0) {
        err << summary.disagree << " counterexample(s) written to "
            << copts.corpus_dir->string() << "\n";
      }
      return summary.violations == 0 ? kExitOk : kExitFailure;
    }
    if (*bench) {
      const auto rows = run_scaling(sizes, reps, seed);
      out << render_scaling(rows, fit_exponent(rows));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bmatch::cli
