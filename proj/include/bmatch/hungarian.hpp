#pragma once

// Slack-array Hungarian machinery: feasible labelings, alternating-tree
// search state, dual updates, tree growth and augmentation. The search is
// side-agnostic so the same code grows trees rooted on either side of the
// expanded graph.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"

namespace bmatch {

// Dual values on the expanded vertices.
struct Labeling {
  std::vector<double> left;
  std::vector<double> right;
  double eps = 1e-9;

  double& at(Side side, std::size_t v) {
    return side == Side::Left ? left[v] : right[v];
  }
  double at(Side side, std::size_t v) const {
    return side == Side::Left ? left[v] : right[v];
  }

  double reduced_cost(const ExpandedGraph& g, std::size_t x,
                      std::size_t y) const {
    return left[x] + right[y] - g.weight(x, y);
  }

  bool is_equality_edge(const ExpandedGraph& g, std::size_t x,
                        std::size_t y) const {
    return std::abs(reduced_cost(g, x, y)) <= eps;
  }
};

// Right labels zero, left labels the row maximum of the owner.
inline Labeling initial_labeling(const ExpandedGraph& g, double eps = 1e-9) {
  Labeling l;
  l.eps = eps;
  l.right.assign(g.q(), 0.0);
  l.left.assign(g.p(), 0.0);
  for (std::size_t x = 0; x < g.p(); ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < g.q(); ++y) best = std::max(best, g.weight(x, y));
    l.left[x] = g.q() == 0 ? 0.0 : best;
  }
  return l;
}

// Reduced cost of the edge between root-side vertex r and frontier-side
// vertex f.
inline double reduced_cost(const ExpandedGraph& g, const Labeling& l,
                           Side root_side, std::size_t r, std::size_t f) {
  return root_side == Side::Left ? l.left[r] + l.right[f] - g.weight(r, f)
                                 : l.left[f] + l.right[r] - g.weight(f, r);
}

// One alternating-tree search. tree_S lives on the root's side, tree_T and the
// frontier on the opposite side. slack and slack_arg are indexed by frontier
// position; the frontier is kept sorted so position order is index order.
struct SearchState {
  Side side = Side::Left;
  std::size_t root = 0;
  std::vector<std::size_t> frontier;
  std::vector<double> slack;
  std::vector<std::size_t> slack_arg;
  std::vector<char> in_T;
  std::vector<std::size_t> tree_S;
  std::vector<std::size_t> tree_T;
  // frontier-side vertex -> position in frontier, kFree when absent
  std::vector<std::size_t> position;
  double alpha_l = 0.0;
  double eps = 1e-9;

  Side frontier_side() const noexcept { return opposite(side); }

  bool in_frontier(std::size_t v) const {
    return v < position.size() && position[v] != kFree;
  }
  bool contains_T(std::size_t v) const {
    return in_frontier(v) && in_T[position[v]] != 0;
  }
  bool contains_S(std::size_t v) const {
    return std::find(tree_S.begin(), tree_S.end(), v) != tree_S.end();
  }
};

// Sets up S = {root}, T = {} over the given frontier. Slacks are filled in by
// init_slack.
inline SearchState make_search_state(const ExpandedGraph& g, Side side,
                                     std::size_t root,
                                     std::vector<std::size_t> frontier,
                                     double eps) {
  SearchState st;
  st.side = side;
  st.root = root;
  st.eps = eps;
  std::sort(frontier.begin(), frontier.end());
  st.frontier = std::move(frontier);
  st.slack.assign(st.frontier.size(), 0.0);
  st.slack_arg.assign(st.frontier.size(), root);
  st.in_T.assign(st.frontier.size(), 0);
  st.position.assign(g.size(opposite(side)), kFree);
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    st.position[st.frontier[k]] = k;
  }
  st.tree_S = {root};
  return st;
}

inline void init_slack(SearchState& st, const Labeling& l,
                       const ExpandedGraph& g) {
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    st.slack[k] = reduced_cost(g, l, st.side, st.root, st.frontier[k]);
    st.slack_arg[k] = st.root;
  }
}

// Minimum slack over frontier vertices outside T.
inline double compute_alpha(const SearchState& st) {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    if (st.in_T[k]) continue;
    any = true;
    best = std::min(best, st.slack[k]);
  }
  if (!any) {
    throw ExhaustedFrontier("every frontier vertex is already in the tree");
  }
  return best;
}

// Shifts labels down on S and up on T by alpha and keeps the slack array in
// step.
inline void dual_update(Labeling& l, SearchState& st, double alpha) {
  for (std::size_t r : st.tree_S) l.at(st.side, r) -= alpha;
  for (std::size_t f : st.tree_T) l.at(st.frontier_side(), f) += alpha;
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    if (!st.in_T[k]) st.slack[k] -= alpha;
  }
  st.alpha_l = alpha;
}

// Lowest frontier position outside T whose slack is zero within eps.
inline std::optional<std::size_t> find_zero_slack(const SearchState& st) {
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    if (!st.in_T[k] && st.slack[k] <= st.eps) return k;
  }
  return std::nullopt;
}

inline bool frontier_exhausted(const SearchState& st) {
  return std::all_of(st.in_T.begin(), st.in_T.end(),
                     [](char c) { return c != 0; });
}

// Moves frontier vertex u into T and its partner z into S.
inline void extend_tree(SearchState& st, std::size_t u, std::size_t z,
                        const Labeling& l, const ExpandedGraph& g) {
  st.in_T[st.position[u]] = 1;
  st.tree_T.push_back(u);
  st.tree_S.push_back(z);
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    if (st.in_T[k]) continue;
    const double candidate = reduced_cost(g, l, st.side, z, st.frontier[k]);
    if (candidate < st.slack[k] ||
        (candidate == st.slack[k] && z < st.slack_arg[k])) {
      st.slack[k] = candidate;
      st.slack_arg[k] = z;
    }
  }
}

// Flips the alternating path that ends at frontier vertex `end` and runs back
// to the root through slack_arg and partner links.
inline void augment(MatchingState& m, const SearchState& st, std::size_t end) {
  std::size_t current = end;
  const std::size_t max_steps = st.tree_S.size() + 1;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (!st.in_frontier(current)) {
      throw BrokenTree("path left the frontier at vertex " +
                       std::to_string(current));
    }
    const std::size_t pred = st.slack_arg[st.position[current]];
    const std::size_t next = m.partner(st.side, pred);
    if (st.side == Side::Left) {
      m.match(pred, current);
    } else {
      m.match(current, pred);
    }
    if (pred == st.root) return;
    if (next == kFree || !st.contains_T(next)) {
      throw BrokenTree("tree vertex " + std::to_string(pred) +
                       " is not matched into T");
    }
    current = next;
  }
  throw BrokenTree("predecessor links do not reach the root");
}

// Invariant probes. Each returns a description of the first violation.

inline std::optional<std::string> find_infeasible_edge(const ExpandedGraph& g,
                                                       const Labeling& l) {
  for (std::size_t x = 0; x < g.p(); ++x) {
    for (std::size_t y = 0; y < g.q(); ++y) {
      if (l.reduced_cost(g, x, y) < -l.eps) {
        return "labels infeasible on (" + std::to_string(x) + "," +
               std::to_string(y) + "): reduced cost " +
               format_number(l.reduced_cost(g, x, y));
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> find_non_equality_match(
    const ExpandedGraph& g, const MatchingState& m, const Labeling& l) {
  for (const auto& [x, y] : m.pairs()) {
    if (!l.is_equality_edge(g, x, y)) {
      return "matched edge (" + std::to_string(x) + "," + std::to_string(y) +
             ") has reduced cost " + format_number(l.reduced_cost(g, x, y));
    }
  }
  return std::nullopt;
}

// Recomputes every slack outside T from tree_S and compares with the stored
// value and witness.
inline std::optional<std::string> find_stale_slack(const SearchState& st,
                                                   const Labeling& l,
                                                   const ExpandedGraph& g) {
  for (std::size_t k = 0; k < st.frontier.size(); ++k) {
    if (st.in_T[k]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r : st.tree_S) {
      best = std::min(best, reduced_cost(g, l, st.side, r, st.frontier[k]));
    }
    const std::size_t arg = st.slack_arg[k];
    if (std::abs(best - st.slack[k]) > st.eps) {
      return "slack of frontier vertex " + std::to_string(st.frontier[k]) +
             " is " + format_number(st.slack[k]) + ", recomputed " +
             format_number(best);
    }
    if (!st.contains_S(arg) ||
        std::abs(reduced_cost(g, l, st.side, arg, st.frontier[k]) - best) >
            st.eps) {
      return "slack witness of frontier vertex " +
             std::to_string(st.frontier[k]) + " does not attain the minimum";
    }
  }
  return std::nullopt;
}

inline void throw_if(const std::optional<std::string>& violation) {
  if (violation) throw InvariantViolation(*violation);
}

struct SearchCounters {
  std::size_t dual_updates = 0;
  std::size_t extensions = 0;
};

enum class SearchOutcome { Augmented, Exhausted };

// Grows the tree until a free frontier vertex is reached at zero slack, then
// augments. Returns Exhausted, with the tree left intact, if every frontier
// vertex joined T first.
inline SearchOutcome grow_and_augment(const ExpandedGraph& g, MatchingState& m,
                                      Labeling& l, SearchState& st,
                                      SearchCounters& counters,
                                      bool check_invariants) {
  const Side fs = st.frontier_side();
  for (;;) {
    auto k = find_zero_slack(st);
    if (!k) {
      if (frontier_exhausted(st)) return SearchOutcome::Exhausted;
      dual_update(l, st, compute_alpha(st));
      ++counters.dual_updates;
      if (check_invariants) {
        throw_if(find_infeasible_edge(g, l));
        throw_if(find_stale_slack(st, l, g));
      }
      k = find_zero_slack(st);
      if (!k) {
        throw InvariantViolation("dual update produced no zero-slack vertex");
      }
    }
    const std::size_t u = st.frontier[*k];
    const std::size_t z = m.partner(fs, u);
    if (z == kFree) {
      augment(m, st, u);
      return SearchOutcome::Augmented;
    }
    extend_tree(st, u, z, l, g);
    ++counters.extensions;
    if (check_invariants) throw_if(find_stale_slack(st, l, g));
  }
}

struct AssignmentResult {
  // assignment[i] is the column matched to row i.
  std::vector<std::size_t> assignment;
  double weight = 0.0;
  Labeling labels;
  std::size_t dual_updates = 0;
};

// Maximum-weight perfect matching on a square matrix.
inline AssignmentResult solve_assignment(const Matrix& w, double eps = 1e-9,
                                         bool check_invariants = false) {
  if (w.rows() != w.cols()) throw BadRange("assignment matrix must be square");
  const std::size_t n = w.rows();
  AssignmentResult out;
  out.labels.eps = eps;
  if (n == 0) return out;

  BMatchInstance inst{n, n, std::vector<Capacity>(n, 1),
                      std::vector<Capacity>(n, 1), w};
  const ExpandedGraph g = expand(inst);
  Labeling l = initial_labeling(g, eps);
  MatchingState m(g);
  std::vector<std::size_t> all_right(n);
  for (std::size_t y = 0; y < n; ++y) all_right[y] = y;

  SearchCounters counters;
  for (std::size_t x = 0; x < n; ++x) {
    SearchState st = make_search_state(g, Side::Left, x, all_right, eps);
    init_slack(st, l, g);
    if (grow_and_augment(g, m, l, st, counters, check_invariants) !=
        SearchOutcome::Augmented) {
      throw ExhaustedFrontier("no augmenting path from row " +
                              std::to_string(x));
    }
    if (check_invariants) {
      throw_if(find_infeasible_edge(g, l));
      throw_if(find_non_equality_match(g, m, l));
    }
  }

  out.assignment.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    out.assignment[x] = m.partner_left(x);
    out.weight += w(x, out.assignment[x]);
  }
  out.labels = std::move(l);
  out.dual_updates = counters.dual_updates;
  return out;
}

}  // namespace bmatch
