#pragma once

// Two-phase b-matching solver on the expanded graph. Phase I covers every
// left original, Phase II every right original. Each search scans a reduced
// frontier: the opposite originals, the matched copies, and one free
// representative per copy group. Free copies of a group share labels and
// weights, so one representative stands for all of them.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"
#include "bmatch/hungarian.hpp"

namespace bmatch {

inline constexpr const char* kSolverVersion = "bmatch-1.0.0";

struct Frontier {
  // Side the frontier vertices live on.
  Side side = Side::Right;
  std::vector<std::size_t> originals;
  std::vector<std::size_t> matched_copies;
  std::vector<std::size_t> representatives;

  // Sorted union of the three sets.
  std::vector<std::size_t> vertices() const {
    std::vector<std::size_t> all;
    all.reserve(originals.size() + matched_copies.size() +
                representatives.size());
    all.insert(all.end(), originals.begin(), originals.end());
    all.insert(all.end(), matched_copies.begin(), matched_copies.end());
    all.insert(all.end(), representatives.begin(), representatives.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

// Frontier for searches rooted on root_side. Representatives are the lowest
// free copy of each group.
inline Frontier build_frontier(const ExpandedGraph& g, const MatchingState& m,
                               Side root_side) {
  Frontier f;
  f.side = opposite(root_side);
  for (const Block& block : g.groups(f.side)) {
    f.originals.push_back(block.first);
    bool have_rep = false;
    for (std::size_t v = block.first + 1; v < block.end(); ++v) {
      if (!m.is_free(f.side, v)) {
        f.matched_copies.push_back(v);
      } else if (!have_rep) {
        f.representatives.push_back(v);
        have_rep = true;
      }
    }
  }
  return f;
}

struct ObservationReport {
  bool ok = true;
  std::string violation;

  explicit operator bool() const noexcept { return ok; }
};

// Free copies of each group must carry equal labels, and every vertex on the
// other side must see equal slack to all of them.
inline ObservationReport check_observations(const ExpandedGraph& g,
                                            const MatchingState& m,
                                            const Labeling& l, double eps) {
  for (Side side : {Side::Left, Side::Right}) {
    const Side other = opposite(side);
    for (std::size_t owner = 0; owner < g.groups(side).size(); ++owner) {
      const Block& block = g.groups(side)[owner];
      std::optional<std::size_t> first_free;
      for (std::size_t v = block.first + 1; v < block.end(); ++v) {
        if (!m.is_free(side, v)) continue;
        if (!first_free) {
          first_free = v;
          continue;
        }
        const std::size_t ref = *first_free;
        if (std::abs(l.at(side, v) - l.at(side, ref)) > eps) {
          return {false, std::string("free ") + to_string(side) + " copies " +
                             std::to_string(ref) + " and " + std::to_string(v) +
                             " have labels " + format_number(l.at(side, ref)) +
                             " and " + format_number(l.at(side, v))};
        }
        for (std::size_t r = 0; r < g.size(other); ++r) {
          const double a = reduced_cost(g, l, other, r, ref);
          const double b = reduced_cost(g, l, other, r, v);
          if (std::abs(a - b) > eps) {
            return {false, std::string("free ") + to_string(side) +
                               " copies " + std::to_string(ref) + " and " +
                               std::to_string(v) + " see different slack from " +
                               to_string(other) + " vertex " + std::to_string(r)};
          }
        }
      }
    }
  }
  return {};
}

struct PhaseStats {
  std::size_t augmentations = 0;
  // Searches that covered their root by taking an edge away from a copy
  // instead of reaching a free vertex.
  std::size_t releases = 0;
  std::size_t dual_updates = 0;
};

namespace detail {

inline void check_boundary(const ExpandedGraph& g, const MatchingState& m,
                           const Labeling& l) {
  throw_if(find_infeasible_edge(g, l));
  throw_if(find_non_equality_match(g, m, l));
  if (const auto obs = check_observations(g, m, l, l.eps); !obs) {
    throw InvariantViolation(obs.violation);
  }
}

// Fallback for a search whose tree swallowed the whole frontier. Some tree
// vertex u is matched to a copy z on the root side; dropping (u, z) and
// flipping the path root..u covers the root and leaves z free. The weight
// changes by l(root) - l(z), so the copy with the smallest label goes.
inline bool release_copy(const ExpandedGraph& g, MatchingState& m, Labeling& l,
                         const SearchState& st) {
  const Side fs = st.frontier_side();
  std::optional<std::size_t> best_u;
  for (std::size_t u : st.tree_T) {
    const std::size_t z = m.partner(fs, u);
    if (z == kFree || g.is_original(st.side, z)) continue;
    if (!best_u) {
      best_u = u;
      continue;
    }
    const double lz = l.at(st.side, z);
    const double lbest = l.at(st.side, m.partner(fs, *best_u));
    if (lz < lbest || (lz == lbest && u < *best_u)) best_u = u;
  }
  if (!best_u) return false;

  const std::size_t z = m.partner(fs, *best_u);
  if (fs == Side::Left) {
    m.unmatch_left(*best_u);
  } else {
    m.unmatch_left(z);
  }
  augment(m, st, *best_u);

  // z rejoins the free copies of its group; give it their common label. Its
  // weights equal theirs, so feasibility carries over.
  const Block& block = g.groups(st.side)[g.owner(st.side, z)];
  for (std::size_t v = block.first + 1; v < block.end(); ++v) {
    if (v != z && m.is_free(st.side, v)) {
      l.at(st.side, z) = l.at(st.side, v);
      break;
    }
  }
  return true;
}

}  // namespace detail

// Matches every original vertex on `target` that is still free, growing trees
// rooted there. Matched vertices stay matched.
inline PhaseStats modified_hungarian(const ExpandedGraph& g, Side target,
                                     MatchingState& m, Labeling& l,
                                     const SolverConfig& cfg) {
  PhaseStats stats;
  SearchCounters counters;
  for (const Block& block : g.groups(target)) {
    const std::size_t root = block.first;
    if (!m.is_free(target, root)) continue;

    const Frontier frontier = build_frontier(g, m, target);
    SearchState st =
        make_search_state(g, target, root, frontier.vertices(), cfg.eps);
    init_slack(st, l, g);
    const auto outcome =
        grow_and_augment(g, m, l, st, counters, cfg.check_invariants);
    if (outcome == SearchOutcome::Exhausted) {
      if (!detail::release_copy(g, m, l, st)) {
        throw ExhaustedFrontier(std::string("no augmenting path from ") +
                                to_string(target) + " vertex " +
                                std::to_string(root));
      }
      ++stats.releases;
    }
    ++stats.augmentations;
    if (cfg.check_invariants) detail::check_boundary(g, m, l);
  }
  stats.dual_updates = counters.dual_updates;
  return stats;
}

// Matches each left original, in index order, to the lowest free frontier
// vertex on an equality edge.
inline std::size_t greedy_equality_matching(const ExpandedGraph& g,
                                            MatchingState& m,
                                            const Labeling& l) {
  std::size_t matched = 0;
  for (const Block& block : g.left_groups()) {
    const std::size_t x = block.first;
    if (!m.is_free(Side::Left, x)) continue;
    for (std::size_t y : build_frontier(g, m, Side::Left).vertices()) {
      if (m.is_free(Side::Right, y) && l.is_equality_edge(g, x, y)) {
        m.match(x, y);
        ++matched;
        break;
      }
    }
  }
  return matched;
}

struct SolveReport {
  double total_weight = 0.0;
  std::size_t phase1_augmentations = 0;
  std::size_t phase2_augmentations = 0;
  std::size_t phase2_releases = 0;
  std::size_t dual_updates = 0;
  double phase1_seconds = 0.0;
  double phase2_seconds = 0.0;
};

struct ExpandedSolution {
  MatchingState matching;
  Labeling labels;
  SolveReport report;
};

// Runs both phases on G' and returns the raw matching and final labels.
inline ExpandedSolution solve_expanded(const ExpandedGraph& g,
                                       const SolverConfig& cfg = {}) {
  using Clock = std::chrono::steady_clock;
  ExpandedSolution out;
  out.labels = initial_labeling(g, cfg.eps);
  out.matching = MatchingState(g);
  if (cfg.check_invariants) {
    detail::check_boundary(g, out.matching, out.labels);
  }

  const auto t0 = Clock::now();
  if (cfg.initial_matching == SolverConfig::InitialMatching::GreedyEquality) {
    out.report.phase1_augmentations +=
        greedy_equality_matching(g, out.matching, out.labels);
    if (cfg.check_invariants) {
      detail::check_boundary(g, out.matching, out.labels);
    }
  }
  const PhaseStats one =
      modified_hungarian(g, Side::Left, out.matching, out.labels, cfg);
  const auto t1 = Clock::now();
  const PhaseStats two =
      modified_hungarian(g, Side::Right, out.matching, out.labels, cfg);
  const auto t2 = Clock::now();

  out.report.phase1_augmentations += one.augmentations;
  out.report.phase2_augmentations = two.augmentations;
  out.report.phase2_releases = two.releases;
  out.report.dual_updates = one.dual_updates + two.dual_updates;
  out.report.phase1_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.report.phase2_seconds = std::chrono::duration<double>(t2 - t1).count();
  return out;
}

struct SolveResult {
  BMatching matching;
  SolveReport report;
};

inline SolveResult solve_b_matching(const BMatchInstance& inst,
                                    const SolverConfig& cfg = {}) {
  if (cfg.eps < 0.0) throw BadRange("eps must be nonnegative");
  const ExpandedGraph g = expand(inst);
  ExpandedSolution sol = solve_expanded(g, cfg);
  SolveResult out;
  out.matching = collapse(g, sol.matching);
  out.report = sol.report;
  out.report.total_weight = out.matching.total_weight;
  if (cfg.check_invariants) {
    if (const auto v = verify_b_matching(inst, out.matching, cfg.eps); !v) {
      throw InvariantViolation("result fails verification: " + v.violation);
    }
  }
  return out;
}

}  // namespace bmatch
