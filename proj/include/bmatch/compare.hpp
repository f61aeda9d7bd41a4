#pragma once

// Solver-versus-oracle comparison over a seeded stream of small random
// instances. Disagreements are written out as instance and result files so
// each one can be re-checked with `verify` and `oracle`.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"
#include "bmatch/io.hpp"
#include "bmatch/oracle.hpp"
#include "bmatch/solver.hpp"

namespace bmatch {

struct NamedInstance {
  std::string label;
  BMatchInstance instance;
};

struct CompareOptions {
  std::size_t count = 100;
  std::size_t max_s = 4;
  std::size_t max_t = 4;
  Capacity cap_max = 3;
  std::uint64_t seed = 0;
  bool all_negative = false;
  // Disagreements are written here when set.
  std::optional<std::filesystem::path> corpus_dir;
  // Fixed instances evaluated before the random stream.
  std::vector<NamedInstance> extra;
  double eps = 1e-9;
  OracleLimits limits;
};

struct CompareLine {
  std::string label;
  double solver_weight = 0.0;
  std::optional<double> oracle_weight;
  bool agree = false;
  // Set when the solver output is not a valid b-matching or beats the oracle.
  std::string violation;
};

struct CompareSummary {
  std::size_t instances = 0;
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  std::vector<CompareLine> lines;

  double agreement_rate() const {
    const std::size_t judged = agree + disagree;
    return judged == 0 ? 1.0 : static_cast<double>(agree) / judged;
  }
};

// The k-th instance of a compare run seeded with `seed`.
inline NamedInstance compare_instance(const CompareOptions& opts, std::size_t k) {
  const std::uint64_t inst_seed = opts.seed + k;
  std::mt19937_64 rng(inst_seed ^ 0xA5A5A5A55A5A5A5AULL);
  std::uniform_int_distribution<std::size_t> sdist(1, opts.max_s);
  std::uniform_int_distribution<std::size_t> tdist(1, opts.max_t);
  const std::size_t s = sdist(rng);
  const std::size_t t = tdist(rng);
  const double lo = -9.0;
  const double hi = opts.all_negative ? -1.0 : 9.0;
  return {std::to_string(inst_seed),
          generate_instance(s, t, opts.cap_max, lo, hi, true, inst_seed)};
}

inline std::string render_compare_line(const CompareLine& line) {
  std::string out = line.label + " " + format_number(line.solver_weight) + " ";
  if (line.oracle_weight) {
    out += format_number(*line.oracle_weight) + (line.agree ? " yes" : " no");
  } else {
    out += "- skipped";
  }
  if (!line.violation.empty()) out += " VIOLATION: " + line.violation;
  return out + "\n";
}

inline std::string render_compare_summary(const CompareSummary& sum) {
  char rate[32];
  std::snprintf(rate, sizeof(rate), "%.4f", sum.agreement_rate());
  return "summary instances=" + std::to_string(sum.instances) +
         " agree=" + std::to_string(sum.agree) +
         " disagree=" + std::to_string(sum.disagree) +
         " skipped=" + std::to_string(sum.skipped) +
         " violations=" + std::to_string(sum.violations) +
         " agreement_rate=" + rate + "\n";
}

inline CompareLine compare_one(const NamedInstance& named,
                               const CompareOptions& opts) {
  CompareLine line;
  line.label = named.label;
  const auto solved = solve_b_matching(named.instance, SolverConfig{opts.eps});
  line.solver_weight = solved.matching.total_weight;
  if (const auto v = verify_b_matching(named.instance, solved.matching, opts.eps);
      !v) {
    line.violation = v.violation;
  }
  try {
    line.oracle_weight =
        brute_force_b_matching(named.instance, opts.limits).weight;
  } catch (const TooLarge&) {
    return line;
  }
  line.agree = std::abs(line.solver_weight - *line.oracle_weight) <= opts.eps;
  if (line.violation.empty() && line.solver_weight > *line.oracle_weight + opts.eps) {
    line.violation = "solver weight exceeds the oracle optimum";
  }
  if (!line.agree && opts.corpus_dir) {
    const auto base = *opts.corpus_dir / ("cx_" + named.label);
    write_file(base.string() + ".txt",
               "# compare counterexample " + named.label + ": solver " +
                   format_number(line.solver_weight) + ", oracle " +
                   format_number(*line.oracle_weight) + "\n" +
                   render_instance(named.instance));
    write_file(base.string() + ".result.json",
               render_result(solved.matching, solved.report));
  }
  return line;
}

// Streams one line per instance, then the summary line.
inline CompareSummary run_compare(const CompareOptions& opts, std::ostream& out) {
  if (opts.max_s < 1 || opts.max_t < 1) throw BadRange("max sizes must be >= 1");
  if (opts.cap_max < 1) throw BadRange("cap_max must be >= 1");
  if (opts.corpus_dir) std::filesystem::create_directories(*opts.corpus_dir);

  CompareSummary sum;
  auto record = [&](const NamedInstance& named) {
    CompareLine line = compare_one(named, opts);
    ++sum.instances;
    if (!line.oracle_weight) {
      ++sum.skipped;
    } else if (line.agree) {
      ++sum.agree;
    } else {
      ++sum.disagree;
    }
    if (!line.violation.empty()) ++sum.violations;
    out << render_compare_line(line);
    sum.lines.push_back(std::move(line));
  };
  for (const auto& named : opts.extra) record(named);
  for (std::size_t k = 0; k < opts.count; ++k) record(compare_instance(opts, k));
  out << render_compare_summary(sum);
  return sum;
}

}  // namespace bmatch
