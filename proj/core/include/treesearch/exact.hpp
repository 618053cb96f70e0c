#pragma once

#include "treesearch/executor.hpp"

#include <map>

namespace treesearch {

/// Exact optimum with an explicit decision-tree policy: for every reachable
/// view (keyed by its sorted member list) the optimal query, smallest-id
/// tie-break. Replaying the policy attains `value` in the worst case.
struct OptResult {
  Rat value;
  std::map<std::vector<VertexId>, VertexId> policy;
  std::map<std::vector<VertexId>, Rat> view_value;

  /// View-keyed lookup policy; the OptResult must outlive the returned policy.
  AdaptivePolicy as_policy() const;
};

/// Exhaustive minimax game search with memoization on canonical views.
/// Refuses trees larger than `cap` vertices.
OptResult opt_oracle(const WeightedTree& t, int cap = 14);

/// Interval DP over a path, queryable per contiguous subinterval.
struct PathOptTable {
  std::vector<VertexId> order;  // vertices in path order
  std::vector<int> pos_of;      // vertex id -> position in `order` (-1 elsewhere)
  int length = 0;
  std::vector<Rat> value;       // (length+1) x (length+1), value[i][j] = opt of positions [i..j]
  std::vector<VertexId> choice;

  const Rat& opt(int i, int j) const;
  VertexId pick(int i, int j) const;
  /// Optimal query for a view that is a contiguous subinterval of the path.
  VertexId pick_view(const SubtreeView& view) const;
  Rat opt_view(const std::vector<VertexId>& members) const;
};

/// Builds the full interval table; requires every vertex degree <= 2.
PathOptTable path_opt_table(const WeightedTree& t);

/// Exact path optimum wrapped as an OptResult (value + per-view policy).
OptResult path_opt(const WeightedTree& t);

/// Exact optimum of the edge-query game: a query names an edge and learns
/// the side containing the target. Refuses instances with more edges than `cap`.
Rat edge_opt_oracle(const EdgeWeightedTree& t, int cap = 13);

/// Replays an OptResult policy against one target.
QueryTrace run_policy(const WeightedTree& t, const OptResult& opt, VertexId x);

}  // namespace treesearch
