#pragma once

// Exhaustive ground truth for small instances. Nothing here shares code with
// the Hungarian search.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"

namespace bmatch {

struct OracleLimits {
  // Budget on (row option x column-degree state) evaluations.
  std::uint64_t max_states = 10'000'000;
  // Restrict every pair to multiplicity at most 1.
  bool simple_edges = false;
};

struct OracleResult {
  double weight = 0.0;
  BMatching matching;
  std::uint64_t states = 0;
};

namespace detail {

struct RowOption {
  std::vector<Capacity> mult;
  double weight = 0.0;
};

// Every multiplicity vector for one row, in lexicographic order, whose sum
// lies in [1, alpha].
inline std::vector<RowOption> row_options(const BMatchInstance& inst,
                                          std::size_t i, bool simple,
                                          std::uint64_t budget) {
  std::vector<RowOption> out;
  std::vector<Capacity> cap(inst.t);
  for (std::size_t j = 0; j < inst.t; ++j) {
    cap[j] = std::min(inst.alpha[i], inst.beta[j]);
    if (simple) cap[j] = std::min<Capacity>(cap[j], 1);
  }
  std::vector<Capacity> cur(inst.t, 0);
  Capacity sum = 0;
  // Odometer with the last column fastest gives lexicographic order.
  for (;;) {
    if (sum >= 1 && sum <= inst.alpha[i]) {
      RowOption opt{cur, 0.0};
      for (std::size_t j = 0; j < inst.t; ++j) {
        opt.weight += static_cast<double>(cur[j]) * inst.weights(i, j);
      }
      out.push_back(std::move(opt));
      if (out.size() > budget) throw TooLarge("row option count exceeds budget");
    }
    std::size_t j = inst.t;
    while (j > 0) {
      --j;
      if (cur[j] < cap[j] && sum < inst.alpha[i]) {
        ++cur[j];
        ++sum;
        break;
      }
      sum -= cur[j];
      cur[j] = 0;
      if (j == 0) return out;
    }
  }
}

class MultiplicityDp {
 public:
  MultiplicityDp(const BMatchInstance& inst, const OracleLimits& limits)
      : inst_(inst), limits_(limits), memo_(inst.s) {
    radix_.resize(inst.t);
    std::uint64_t stride = 1;
    for (std::size_t j = 0; j < inst.t; ++j) {
      radix_[j] = stride;
      const auto base = static_cast<std::uint64_t>(inst.beta[j]) + 1;
      if (stride > std::numeric_limits<std::uint64_t>::max() / base) {
        throw TooLarge("column state space does not fit in 64 bits");
      }
      stride *= base;
    }
    for (std::size_t i = 0; i < inst.s; ++i) {
      options_.push_back(row_options(inst, i, limits.simple_edges,
                                     limits.max_states));
    }
  }

  double best_from(std::size_t row, std::uint64_t state) {
    if (row == inst_.s) {
      for (std::size_t j = 0; j < inst_.t; ++j) {
        if (degree(state, j) < 1) return kInfeasible;
      }
      return 0.0;
    }
    if (auto it = memo_[row].find(state); it != memo_[row].end()) {
      return it->second;
    }
    double best = kInfeasible;
    for (const RowOption& opt : options_[row]) {
      const auto next = advance(state, opt);
      if (!next) continue;
      const double rest = best_from(row + 1, *next);
      if (rest == kInfeasible) continue;
      best = std::max(best, opt.weight + rest);
    }
    memo_[row].emplace(state, best);
    return best;
  }

  // Lexicographically smallest optimal multiplicity matrix.
  std::vector<std::vector<Capacity>> reconstruct() {
    std::vector<std::vector<Capacity>> rows;
    std::uint64_t state = 0;
    for (std::size_t row = 0; row < inst_.s; ++row) {
      const double target = best_from(row, state);
      for (const RowOption& opt : options_[row]) {
        const auto next = advance(state, opt);
        if (!next) continue;
        const double rest = best_from(row + 1, *next);
        if (rest != kInfeasible && opt.weight + rest == target) {
          rows.push_back(opt.mult);
          state = *next;
          break;
        }
      }
    }
    return rows;
  }

  std::uint64_t work() const noexcept { return work_; }

  static constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

 private:
  Capacity degree(std::uint64_t state, std::size_t j) const {
    return static_cast<Capacity>(
        (state / radix_[j]) % (static_cast<std::uint64_t>(inst_.beta[j]) + 1));
  }

  std::optional<std::uint64_t> advance(std::uint64_t state,
                                       const RowOption& opt) {
    if (++work_ > limits_.max_states) {
      throw TooLarge("enumeration exceeds " +
                     std::to_string(limits_.max_states) + " states");
    }
    for (std::size_t j = 0; j < inst_.t; ++j) {
      if (opt.mult[j] == 0) continue;
      if (degree(state, j) + opt.mult[j] > inst_.beta[j]) return std::nullopt;
      state += static_cast<std::uint64_t>(opt.mult[j]) * radix_[j];
    }
    return state;
  }

  const BMatchInstance& inst_;
  OracleLimits limits_;
  std::vector<std::uint64_t> radix_;
  std::vector<std::vector<RowOption>> options_;
  std::vector<std::unordered_map<std::uint64_t, double>> memo_;
  std::uint64_t work_ = 0;
};

}  // namespace detail

// Maximum-weight b-matching by exhaustive search over per-pair
// multiplicities, processed row by row with the column degrees as memo key.
// Ties go to the lexicographically smallest multiplicity matrix.
inline OracleResult brute_force_b_matching(const BMatchInstance& inst,
                                           const OracleLimits& limits = {}) {
  if (limits.max_states < 1) throw BadRange("max_states must be at least 1");
  const auto report = validate_instance(inst);
  if (report.code == ValidationCode::Infeasible) {
    throw InfeasibleInstance(report.message());
  }
  if (!report.ok()) throw InvalidInstance(report.message());

  detail::MultiplicityDp dp(inst, limits);
  const double best = dp.best_from(0, 0);
  if (best == detail::MultiplicityDp::kInfeasible) {
    throw InfeasibleInstance("no multiplicity assignment meets the degree bounds");
  }
  const auto rows = dp.reconstruct();

  OracleResult out;
  for (std::size_t i = 0; i < inst.s; ++i) {
    for (std::size_t j = 0; j < inst.t; ++j) {
      if (rows[i][j] > 0) out.matching.edges.push_back({i, j, rows[i][j]});
    }
  }
  for (const auto& e : out.matching.edges) {
    out.matching.total_weight +=
        static_cast<double>(e.multiplicity) * inst.weights(e.i, e.j);
  }
  out.weight = out.matching.total_weight;
  out.states = dp.work();
  return out;
}

inline constexpr std::size_t kMaxAssignmentOracleSize = 8;

// Maximum of sum W[i][sigma(i)] over all permutations sigma.
inline double brute_force_assignment(const Matrix& w) {
  if (w.rows() != w.cols()) throw BadRange("assignment matrix must be square");
  const std::size_t n = w.rows();
  if (n > kMaxAssignmentOracleSize) {
    throw TooLarge("permutation oracle is limited to n <= 8");
  }
  if (n == 0) return 0.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += w(i, perm[i]);
    best = std::max(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace bmatch
