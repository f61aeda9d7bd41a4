#pragma once

// Domain types for bipartite b-matching: problem instances, the capacity
// expansion into a plain bipartite graph, matchings on that graph, and the
// collapsed owner-pair result.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bmatch/errors.hpp"

namespace bmatch {

using Capacity = std::int64_t;

enum class Side { Left, Right };

constexpr Side opposite(Side side) noexcept {
  return side == Side::Left ? Side::Right : Side::Left;
}

constexpr const char* to_string(Side side) noexcept {
  return side == Side::Left ? "left" : "right";
}

// Dense row-major matrix of edge weights.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw BadRange("ragged matrix rows");
      }
      std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  bool operator==(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    // Bitwise comparison so that -0.0 and NaN payloads round-trip strictly.
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (std::memcmp(&data_[k], &other.data_[k], sizeof(double)) != 0) {
        return false;
      }
    }
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct BMatchInstance {
  std::size_t s = 0;
  std::size_t t = 0;
  std::vector<Capacity> alpha;
  std::vector<Capacity> beta;
  Matrix weights;

  bool operator==(const BMatchInstance&) const = default;
};

enum class ValidationCode {
  Ok,
  NonPositiveCapacity,
  ShapeMismatch,
  NonFiniteWeight,
  Infeasible,
};

constexpr const char* to_string(ValidationCode code) noexcept {
  switch (code) {
    case ValidationCode::Ok: return "ok";
    case ValidationCode::NonPositiveCapacity: return "non-positive capacity";
    case ValidationCode::ShapeMismatch: return "shape mismatch";
    case ValidationCode::NonFiniteWeight: return "non-finite weight";
    case ValidationCode::Infeasible: return "infeasible";
  }
  return "unknown";
}

struct ValidationReport {
  ValidationCode code = ValidationCode::Ok;
  std::string detail;
  // Side whose vertex count exceeds the other side's total capacity; only
  // meaningful for Infeasible.
  Side overflow = Side::Left;

  bool ok() const noexcept { return code == ValidationCode::Ok; }
  std::string message() const {
    return detail.empty() ? to_string(code)
                          : std::string(to_string(code)) + ": " + detail;
  }
};

// Rules are checked in order: shape, capacities, weights, feasibility.
inline ValidationReport validate_instance(const BMatchInstance& inst) {
  auto fail = [](ValidationCode code, std::string detail) {
    return ValidationReport{code, std::move(detail), Side::Left};
  };
  if (inst.s == 0 || inst.t == 0) {
    return fail(ValidationCode::ShapeMismatch, "s and t must be at least 1");
  }
  if (inst.alpha.size() != inst.s) {
    return fail(ValidationCode::ShapeMismatch,
                "expected " + std::to_string(inst.s) + " left capacities, got " +
                    std::to_string(inst.alpha.size()));
  }
  if (inst.beta.size() != inst.t) {
    return fail(ValidationCode::ShapeMismatch,
                "expected " + std::to_string(inst.t) +
                    " right capacities, got " + std::to_string(inst.beta.size()));
  }
  if (inst.weights.rows() != inst.s || inst.weights.cols() != inst.t) {
    return fail(ValidationCode::ShapeMismatch,
                "weight matrix is " + std::to_string(inst.weights.rows()) + "x" +
                    std::to_string(inst.weights.cols()) + ", expected " +
                    std::to_string(inst.s) + "x" + std::to_string(inst.t));
  }
  for (std::size_t i = 0; i < inst.s; ++i) {
    if (inst.alpha[i] < 1) {
      return fail(ValidationCode::NonPositiveCapacity,
                  "alpha[" + std::to_string(i) + "] = " +
                      std::to_string(inst.alpha[i]));
    }
  }
  for (std::size_t j = 0; j < inst.t; ++j) {
    if (inst.beta[j] < 1) {
      return fail(ValidationCode::NonPositiveCapacity,
                  "beta[" + std::to_string(j) + "] = " +
                      std::to_string(inst.beta[j]));
    }
  }
  for (std::size_t i = 0; i < inst.s; ++i) {
    for (std::size_t j = 0; j < inst.t; ++j) {
      if (!std::isfinite(inst.weights(i, j))) {
        return fail(ValidationCode::NonFiniteWeight,
                    "W[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
    }
  }
  const Capacity sum_alpha =
      std::accumulate(inst.alpha.begin(), inst.alpha.end(), Capacity{0});
  const Capacity sum_beta =
      std::accumulate(inst.beta.begin(), inst.beta.end(), Capacity{0});
  if (static_cast<Capacity>(inst.s) > sum_beta) {
    return ValidationReport{ValidationCode::Infeasible,
                            "s = " + std::to_string(inst.s) +
                                " exceeds total right capacity " +
                                std::to_string(sum_beta),
                            Side::Left};
  }
  if (static_cast<Capacity>(inst.t) > sum_alpha) {
    return ValidationReport{ValidationCode::Infeasible,
                            "t = " + std::to_string(inst.t) +
                                " exceeds total left capacity " +
                                std::to_string(sum_alpha),
                            Side::Right};
  }
  return {};
}

inline void require_valid(const BMatchInstance& inst) {
  if (const auto report = validate_instance(inst); !report.ok()) {
    throw InvalidInstance(report.message());
  }
}

// Contiguous block of expanded vertices owned by one original vertex. The
// first index is the original, the rest are its copies.
struct Block {
  std::size_t first = 0;
  std::size_t size = 0;

  std::size_t end() const noexcept { return first + size; }
  bool contains(std::size_t v) const noexcept {
    return v >= first && v < first + size;
  }
};

// The capacity expansion: every left vertex i becomes alpha[i] vertices and
// every right vertex j becomes beta[j] vertices; copies inherit the weights
// of their owner.
class ExpandedGraph {
 public:
  ExpandedGraph() = default;

  explicit ExpandedGraph(const BMatchInstance& inst) : weights_(inst.weights) {
    build_blocks(inst.alpha, left_groups_, left_owner_);
    build_blocks(inst.beta, right_groups_, right_owner_);
  }

  std::size_t p() const noexcept { return left_owner_.size(); }
  std::size_t q() const noexcept { return right_owner_.size(); }
  std::size_t size(Side side) const noexcept {
    return side == Side::Left ? p() : q();
  }

  std::size_t s() const noexcept { return left_groups_.size(); }
  std::size_t t() const noexcept { return right_groups_.size(); }
  std::size_t originals(Side side) const noexcept {
    return side == Side::Left ? s() : t();
  }

  std::size_t left_owner(std::size_t x) const { return left_owner_[x]; }
  std::size_t right_owner(std::size_t y) const { return right_owner_[y]; }
  std::size_t owner(Side side, std::size_t v) const {
    return side == Side::Left ? left_owner_[v] : right_owner_[v];
  }

  const std::vector<std::size_t>& left_owners() const noexcept {
    return left_owner_;
  }
  const std::vector<std::size_t>& right_owners() const noexcept {
    return right_owner_;
  }

  const std::vector<Block>& left_groups() const noexcept { return left_groups_; }
  const std::vector<Block>& right_groups() const noexcept {
    return right_groups_;
  }
  const std::vector<Block>& groups(Side side) const noexcept {
    return side == Side::Left ? left_groups_ : right_groups_;
  }

  bool is_original(Side side, std::size_t v) const {
    return groups(side)[owner(side, v)].first == v;
  }

  double weight(std::size_t x, std::size_t y) const {
    return weights_(left_owner_[x], right_owner_[y]);
  }

  const Matrix& original_weights() const noexcept { return weights_; }

 private:
  static void build_blocks(const std::vector<Capacity>& caps,
                           std::vector<Block>& groups,
                           std::vector<std::size_t>& owner) {
    groups.clear();
    owner.clear();
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const auto size = static_cast<std::size_t>(caps[i]);
      groups.push_back({owner.size(), size});
      owner.insert(owner.end(), size, i);
    }
  }

  Matrix weights_;
  std::vector<Block> left_groups_;
  std::vector<Block> right_groups_;
  std::vector<std::size_t> left_owner_;
  std::vector<std::size_t> right_owner_;
};

inline ExpandedGraph expand(const BMatchInstance& inst) {
  require_valid(inst);
  return ExpandedGraph(inst);
}

inline constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

// One-to-one matching on the expanded graph, kept as two partner maps.
class MatchingState {
 public:
  MatchingState() = default;
  MatchingState(std::size_t p, std::size_t q)
      : partner_left_(p, kFree), partner_right_(q, kFree) {}
  explicit MatchingState(const ExpandedGraph& g) : MatchingState(g.p(), g.q()) {}

  std::size_t p() const noexcept { return partner_left_.size(); }
  std::size_t q() const noexcept { return partner_right_.size(); }

  std::size_t partner_left(std::size_t x) const { return partner_left_[x]; }
  std::size_t partner_right(std::size_t y) const { return partner_right_[y]; }
  std::size_t partner(Side side, std::size_t v) const {
    return side == Side::Left ? partner_left_[v] : partner_right_[v];
  }

  bool is_free(Side side, std::size_t v) const { return partner(side, v) == kFree; }

  // Matches x with y, dropping whatever either was matched to before.
  void match(std::size_t x, std::size_t y) {
    if (partner_left_[x] != kFree) partner_right_[partner_left_[x]] = kFree;
    if (partner_right_[y] != kFree) partner_left_[partner_right_[y]] = kFree;
    partner_left_[x] = y;
    partner_right_[y] = x;
  }

  void unmatch_left(std::size_t x) {
    if (partner_left_[x] == kFree) return;
    partner_right_[partner_left_[x]] = kFree;
    partner_left_[x] = kFree;
  }

  // Raw partner assignment without the mutual bookkeeping; used by tests that
  // need a deliberately broken state.
  void set_partner(Side side, std::size_t v, std::size_t other) {
    (side == Side::Left ? partner_left_ : partner_right_)[v] = other;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(std::count_if(
        partner_left_.begin(), partner_left_.end(),
        [](std::size_t y) { return y != kFree; }));
  }

  bool consistent() const {
    for (std::size_t x = 0; x < p(); ++x) {
      const std::size_t y = partner_left_[x];
      if (y != kFree && (y >= q() || partner_right_[y] != x)) return false;
    }
    for (std::size_t y = 0; y < q(); ++y) {
      const std::size_t x = partner_right_[y];
      if (x != kFree && (x >= p() || partner_left_[x] != y)) return false;
    }
    return true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < p(); ++x) {
      if (partner_left_[x] != kFree) out.emplace_back(x, partner_left_[x]);
    }
    return out;
  }

  bool operator==(const MatchingState&) const = default;

 private:
  std::vector<std::size_t> partner_left_;
  std::vector<std::size_t> partner_right_;
};

struct BMatchEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  Capacity multiplicity = 1;

  auto operator<=>(const BMatchEdge&) const = default;
};

// Degree-constrained edge multiset over the original vertices.
struct BMatching {
  std::vector<BMatchEdge> edges;
  double total_weight = 0.0;

  bool operator==(const BMatching&) const = default;
};

// Projects a matching on G' onto owner pairs. Edges come out sorted by (i, j).
inline BMatching collapse(const ExpandedGraph& g, const MatchingState& m) {
  if (m.p() != g.p() || m.q() != g.q()) {
    throw InconsistentMatching("matching sized for a different graph");
  }
  if (!m.consistent()) {
    throw InconsistentMatching("partner maps disagree");
  }
  std::map<std::pair<std::size_t, std::size_t>, Capacity> counts;
  double total = 0.0;
  for (std::size_t x = 0; x < g.p(); ++x) {
    const std::size_t y = m.partner_left(x);
    if (y == kFree) continue;
    ++counts[{g.left_owner(x), g.right_owner(y)}];
    total += g.weight(x, y);
  }
  BMatching out;
  out.edges.reserve(counts.size());
  for (const auto& [key, mult] : counts) {
    out.edges.push_back({key.first, key.second, mult});
  }
  out.total_weight = total;
  return out;
}

struct VerifyReport {
  bool ok = true;
  std::string violation;

  explicit operator bool() const noexcept { return ok; }
};

// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Checks a b-matching against the instance. Violations are report content.
inline VerifyReport verify_b_matching(const BMatchInstance& inst,
                                      const BMatching& bm, double eps) {
  auto fail = [](std::string why) { return VerifyReport{false, std::move(why)}; };
  std::vector<Capacity> deg_left(inst.s, 0);
  std::vector<Capacity> deg_right(inst.t, 0);
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  double recomputed = 0.0;
  for (const auto& e : bm.edges) {
    const std::string where =
        "edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
    if (e.i >= inst.s || e.j >= inst.t) {
      return fail(where + " is out of range");
    }
    if (e.multiplicity < 1) {
      return fail(where + " has multiplicity " + std::to_string(e.multiplicity));
    }
    const Capacity cap = std::min(inst.alpha[e.i], inst.beta[e.j]);
    if (e.multiplicity > cap) {
      return fail(where + " multiplicity " + std::to_string(e.multiplicity) +
                  " exceeds min capacity " + std::to_string(cap));
    }
    seen.emplace_back(e.i, e.j);
    deg_left[e.i] += e.multiplicity;
    deg_right[e.j] += e.multiplicity;
    recomputed += static_cast<double>(e.multiplicity) * inst.weights(e.i, e.j);
  }
  std::sort(seen.begin(), seen.end());
  if (auto dup = std::adjacent_find(seen.begin(), seen.end()); dup != seen.end()) {
    return fail("edge (" + std::to_string(dup->first) + "," +
                std::to_string(dup->second) + ") listed twice");
  }
  for (std::size_t i = 0; i < inst.s; ++i) {
    if (deg_left[i] < 1) {
      return fail("left vertex " + std::to_string(i) + " has degree 0 < 1");
    }
    if (deg_left[i] > inst.alpha[i]) {
      return fail("left vertex " + std::to_string(i) + " has degree " +
                  std::to_string(deg_left[i]) + " > " +
                  std::to_string(inst.alpha[i]));
    }
  }
  for (std::size_t j = 0; j < inst.t; ++j) {
    if (deg_right[j] < 1) {
      return fail("right vertex " + std::to_string(j) + " has degree 0 < 1");
    }
    if (deg_right[j] > inst.beta[j]) {
      return fail("right vertex " + std::to_string(j) + " has degree " +
                  std::to_string(deg_right[j]) + " > " +
                  std::to_string(inst.beta[j]));
    }
  }
  if (!(std::abs(recomputed - bm.total_weight) <= eps)) {
    return fail("weight mismatch: stated " + format_number(bm.total_weight) +
                ", recomputed " + format_number(recomputed));
  }
  return {};
}

struct SolverConfig {
  enum class InitialMatching { Empty, GreedyEquality };

  double eps = 1e-9;
  InitialMatching initial_matching = InitialMatching::Empty;
  // Run the (quadratic) feasibility, slack and observation checks at every
  // mutation and loop boundary; throws InvariantViolation on failure.
  bool check_invariants = false;
};

// Random feasible instance. Capacities are uniform in [1, cap_max] and then
// raised round-robin until each side can absorb the other.
inline BMatchInstance generate_instance(std::size_t s, std::size_t t,
                                        Capacity cap_max, double weight_lo,
                                        double weight_hi, bool integer_weights,
                                        std::uint64_t seed) {
  if (s < 1 || t < 1) throw BadRange("s and t must be at least 1");
  if (cap_max < 1) throw BadRange("cap_max must be at least 1");
  if (!(weight_lo <= weight_hi) || !std::isfinite(weight_lo) ||
      !std::isfinite(weight_hi)) {
    throw BadRange("need finite weight_lo <= weight_hi");
  }
  std::int64_t int_lo = 0;
  std::int64_t int_hi = 0;
  if (integer_weights) {
    int_lo = static_cast<std::int64_t>(std::ceil(weight_lo));
    int_hi = static_cast<std::int64_t>(std::floor(weight_hi));
    if (int_lo > int_hi) throw BadRange("no integer in weight range");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Capacity> cap_dist(1, cap_max);
  BMatchInstance inst;
  inst.s = s;
  inst.t = t;
  inst.alpha.resize(s);
  inst.beta.resize(t);
  for (auto& a : inst.alpha) a = cap_dist(rng);
  for (auto& b : inst.beta) b = cap_dist(rng);

  auto repair = [](std::vector<Capacity>& caps, std::size_t need) {
    Capacity sum = std::accumulate(caps.begin(), caps.end(), Capacity{0});
    for (std::size_t k = 0; sum < static_cast<Capacity>(need); ++k, ++sum) {
      ++caps[k % caps.size()];
    }
  };
  repair(inst.beta, s);
  repair(inst.alpha, t);

  inst.weights = Matrix(s, t);
  if (integer_weights) {
    std::uniform_int_distribution<std::int64_t> wdist(int_lo, int_hi);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < t; ++j) {
        inst.weights(i, j) = static_cast<double>(wdist(rng));
      }
    }
  } else {
    std::uniform_real_distribution<double> wdist(weight_lo, weight_hi);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < t; ++j) {
        inst.weights(i, j) = weight_lo == weight_hi ? weight_lo : wdist(rng);
      }
    }
  }
  return inst;
}

}  // namespace bmatch
