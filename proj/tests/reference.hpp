#pragma once

// Test-only reference computations. They deliberately share nothing with the
// library's solver or oracle code paths.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "bmatch/core.hpp"

namespace bmatch::testing {

inline double permutation_max(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += w[i][perm[i]];
    best = std::max(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::vector<std::vector<double>> to_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows[i].assign(m.row(i).begin(), m.row(i).end());
  }
  return rows;
}

// Plain odometer over every pair multiplicity in [0, min(alpha_i, beta_j)];
// returns the best weight among degree-feasible assignments.
inline std::optional<double> naive_b_matching_max(const BMatchInstance& inst,
                                                  bool simple = false) {
  const std::size_t pairs = inst.s * inst.t;
  std::vector<Capacity> cap(pairs), cur(pairs, 0);
  for (std::size_t i = 0; i < inst.s; ++i) {
    for (std::size_t j = 0; j < inst.t; ++j) {
      cap[i * inst.t + j] = std::min(inst.alpha[i], inst.beta[j]);
      if (simple) cap[i * inst.t + j] = std::min<Capacity>(cap[i * inst.t + j], 1);
    }
  }
  std::optional<double> best;
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < inst.s && ok; ++i) {
      Capacity d = 0;
      for (std::size_t j = 0; j < inst.t; ++j) d += cur[i * inst.t + j];
      ok = d >= 1 && d <= inst.alpha[i];
    }
    for (std::size_t j = 0; j < inst.t && ok; ++j) {
      Capacity d = 0;
      for (std::size_t i = 0; i < inst.s; ++i) d += cur[i * inst.t + j];
      ok = d >= 1 && d <= inst.beta[j];
    }
    if (ok) {
      double w = 0.0;
      for (std::size_t i = 0; i < inst.s; ++i) {
        for (std::size_t j = 0; j < inst.t; ++j) {
          w += static_cast<double>(cur[i * inst.t + j]) * inst.weights(i, j);
        }
      }
      if (!best || w > *best) best = w;
    }
    std::size_t k = 0;
    while (k < pairs && cur[k] == cap[k]) cur[k++] = 0;
    if (k == pairs) return best;
    ++cur[k];
  }
}

inline BMatchInstance make_instance(std::vector<Capacity> alpha,
                                    std::vector<Capacity> beta,
                                    const std::vector<std::vector<double>>& w) {
  BMatchInstance inst;
  inst.s = alpha.size();
  inst.t = beta.size();
  inst.alpha = std::move(alpha);
  inst.beta = std::move(beta);
  inst.weights = Matrix::from_rows(w);
  return inst;
}

// Expanded graph without the feasibility check. The search primitives work on
// any weight matrix, so their fixtures may be rectangular with unit capacities.
inline ExpandedGraph raw_graph(std::vector<Capacity> alpha, std::vector<Capacity> beta,
                               const std::vector<std::vector<double>>& w) {
  return ExpandedGraph(make_instance(std::move(alpha), std::move(beta), w));
}

// Random small instance for property loops.
inline BMatchInstance random_small(std::mt19937_64& rng, std::size_t max_s,
                                   std::size_t max_t, Capacity cap_max,
                                   int wlo = -9, int whi = 9) {
  std::uniform_int_distribution<std::size_t> sd(1, max_s), td(1, max_t);
  const std::size_t s = sd(rng), t = td(rng);
  return generate_instance(s, t, cap_max, wlo, whi, true, rng());
}

}  // namespace bmatch::testing
