#pragma once

// Runtime scaling of the b-matching solver on generated instances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"
#include "bmatch/solver.hpp"

namespace bmatch {

struct ScalingRow {
  std::size_t n = 0;
  std::size_t repetitions = 0;
  double median_seconds = 0.0;
  std::vector<double> per_rep_seconds;
};

inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

// Instance `rep` of size n in the benchmark stream; rep 0 is the warm-up.
inline BMatchInstance scaling_instance(std::size_t n, std::size_t rep,
                                       std::uint64_t seed) {
  const std::uint64_t mixed =
      seed * 0x9E3779B97F4A7C15ULL + (static_cast<std::uint64_t>(n) << 20) + rep;
  return generate_instance(n / 2, n / 2, 3, -99, 99, true, mixed);
}

// For each n, times solve_b_matching on `reps` instances with s = t = n/2,
// capacities in [1, 3] and integer weights in [-99, 99]. One extra warm-up
// solve per size is discarded.
inline std::vector<ScalingRow> run_scaling(const std::vector<std::size_t>& sizes,
                                           std::size_t reps, std::uint64_t seed) {
  if (reps < 3) throw BadRange("need at least 3 repetitions");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 16) throw BadRange("sizes must be at least 16");
    if (k > 0 && sizes[k] <= sizes[k - 1]) {
      throw BadRange("sizes must be strictly ascending");
    }
  }
  using Clock = std::chrono::steady_clock;
  std::vector<ScalingRow> rows;
  for (std::size_t n : sizes) {
    std::vector<BMatchInstance> batch;
    for (std::size_t rep = 0; rep <= reps; ++rep) {
      batch.push_back(scaling_instance(n, rep, seed));
    }
    ScalingRow row;
    row.n = n;
    row.repetitions = reps;
    for (std::size_t rep = 0; rep <= reps; ++rep) {
      const auto start = Clock::now();
      const auto result = solve_b_matching(batch[rep]);
      const auto stop = Clock::now();
      if (result.matching.edges.empty()) throw Error("empty benchmark result");
      if (rep == 0) continue;
      row.per_rep_seconds.push_back(
          std::chrono::duration<double>(stop - start).count());
    }
    row.median_seconds = median(row.per_rep_seconds);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Least-squares slope of log(median seconds) against log(n).
inline double fit_exponent(const std::vector<ScalingRow>& rows) {
  if (rows.size() < 2) throw DegenerateFit("need at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& row : rows) {
    if (!(row.median_seconds > 0.0)) {
      throw DegenerateFit("median time is zero at n = " + std::to_string(row.n));
    }
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.median_seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(rows.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) throw DegenerateFit("all sizes are equal");
  return (k * sxy - sx * sy) / denom;
}

inline std::string render_scaling(const std::vector<ScalingRow>& rows,
                                  double slope) {
  std::string out = "n\treps\tmedian_s\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + "\t" + std::to_string(row.repetitions) +
           "\t" + format_number(row.median_seconds) + "\n";
  }
  out += "slope " + format_number(slope) + "\n";
  return out;
}

}  // namespace bmatch
