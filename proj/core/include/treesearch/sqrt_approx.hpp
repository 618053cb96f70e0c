#pragma once

#include "treesearch/exact.hpp"
#include "treesearch/prefix_sequences.hpp"

#include <memory>

namespace treesearch {

/// A solver plugged into the recursion: produces an adaptive policy for a
/// given tree. The policy owns whatever state it needs.
struct InnerStrategy {
  AdaptivePolicy policy;
};

using InnerSolver = std::function<InnerStrategy(const WeightedTree&)>;

InnerSolver centroid_inner();
InnerSolver oracle_inner(int cap = 14);
/// Normalizes a copy, runs the box/slot sweep at (c, min(budget, max_l)),
/// composes the prefix sequences, and scans them adaptively.
InnerSolver qptas_inner(int c, int max_l = 12, DpOptions opt = {});

/// Subtree whose removal leaves components of at most alpha vertices:
/// the root together with every vertex whose subtree exceeds alpha.
struct SeparatingTree {
  std::vector<VertexId> members;  // ascending
  struct Component {
    VertexId attach;  // member the component hangs from
    VertexId root;    // topmost component vertex
    std::vector<VertexId> vertices;
  };
  std::vector<Component> components;
};

SeparatingTree separating_tree(const WeightedTree& t, const Rat& alpha);

/// Recursive divide strategy: a top search over the separating tree (driven
/// through its chain contraction), one bridging query, and per-component
/// recursion.
struct CompositeStrategy {
  int level_n = 0;
  long long threshold = 0;  // 2^ceil(sqrt(log2 n))
  bool base_case = false;

  InnerStrategy base;     // set when base_case
  WeightedTree base_tree; // the instance the base policy was built for

  std::vector<VertexId> vstar;
  WeightedTree star_tree;              // standalone copy of the separating tree
  std::vector<VertexId> star_of_t;     // level id -> star id or kNoVertex
  std::vector<VertexId> t_of_star;     // star id -> level id
  ChainContraction star_contraction;   // chains of star_tree collapsed
  std::vector<VertexId> star_of_contr; // contracted id -> star id (kNoVertex for chains)
  InnerStrategy top;                   // solves star_contraction.tree

  struct Child {
    VertexId attach;
    VertexId root;
    WeightedTree tree;
    std::vector<VertexId> t_of_local;
    std::vector<VertexId> local_of_t;
    std::unique_ptr<CompositeStrategy> strategy;
  };
  std::vector<Child> children;

  // Lazily built optimal-path tables, one per contracted chain node.
  std::vector<std::unique_ptr<PathOptTable>> chain_tables;

  int depth() const;
};

std::unique_ptr<CompositeStrategy> rec_solve(const WeightedTree& t, const InnerSolver& inner);

struct CompositeRunLevel {
  int n = 0;
  bool base = false;
  Rat top_cost;          // queries issued by the level's top (or base) search
  Rat bridge_cost;       // the bridging query (0 when it was already issued)
  Rat vstar_max_weight;  // max weight over the level's separating tree
};

struct CompositeRun {
  QueryTrace trace;  // over the outermost tree's ids
  std::vector<CompositeRunLevel> levels;
};

/// Executes the composite against one target. Builds missing chain tables on
/// the way; concurrent runs over one strategy object need external sync.
CompositeRun run_composite(const WeightedTree& t, CompositeStrategy& cs, VertexId x);

struct LevelStat {
  int n = 0;
  bool base = false;
  int contracted_star_size = 0;
  long long size_limit = 0;  // 4 * ceil(n / alpha)
};

/// Per-level structural numbers down the recursion (preorder).
std::vector<LevelStat> level_stats(const CompositeStrategy& cs);

/// max over every inner invocation (top searches and base cases) of the
/// policy's worst-case cost divided by the exact optimum of its instance.
/// Requires every inner instance within the oracle cap.
Rat measured_inner_ratio(const CompositeStrategy& cs, int oracle_cap = 14);

}  // namespace treesearch
