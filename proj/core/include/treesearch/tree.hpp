#pragma once

#include "treesearch/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace treesearch {

using VertexId = int;
constexpr VertexId kNoVertex = -1;

/// Thrown when an input file or value cannot be parsed. Carries a line number
/// when one is known.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation refuses an input by a size/parameter guard.
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Rooted tree with exact rational node weights. Vertex ids are dense
/// integers 0..n-1 and stay stable under every operation; transforms that
/// renumber vertices return explicit id maps. Immutable after construction.
struct WeightedTree {
  VertexId root = 0;
  std::vector<VertexId> parent;                // kNoVertex at the root
  std::vector<std::vector<VertexId>> children; // sorted by id
  std::vector<Rat> weight;

  int size() const { return static_cast<int>(parent.size()); }
  int degree(VertexId v) const {
    return static_cast<int>(children[v].size()) + (parent[v] == kNoVertex ? 0 : 1);
  }
  std::vector<VertexId> neighbors(VertexId v) const;

  /// Subtree sizes |T_v| for every vertex.
  std::vector<int> subtree_sizes() const;
  std::vector<int> depths() const;
  bool is_path() const;

  /// Checks parent/children/root describe one tree over dense ids with
  /// non-negative weights; throws std::runtime_error otherwise.
  void validate() const;

  static WeightedTree build(int n, VertexId root,
                            const std::vector<VertexId>& parent,
                            const std::vector<Rat>& weight);
};

/// Same topology, weight per (child, parent) edge keyed by the child id.
struct EdgeWeightedTree {
  VertexId root = 0;
  std::vector<VertexId> parent;
  std::vector<std::vector<VertexId>> children;
  std::vector<Rat> edge_weight;  // edge_weight[v] = weight of (v, parent[v]); unused at root

  int size() const { return static_cast<int>(parent.size()); }
  void validate() const;

  static EdgeWeightedTree build(int n, VertexId root,
                                const std::vector<VertexId>& parent,
                                const std::vector<Rat>& edge_weight);
};

/// Connected subtree of an origin tree: the members plus the member closest
/// to the origin's root.
struct SubtreeView {
  const WeightedTree* origin = nullptr;
  std::vector<VertexId> members;  // sorted ascending
  VertexId root = kNoVertex;

  int size() const { return static_cast<int>(members.size()); }
  bool contains(VertexId v) const;
};

SubtreeView full_view(const WeightedTree& t);

// ---- file formats -----------------------------------------------------------
//
// Node-weighted tree (UTF-8, line oriented, '#' starts a comment):
//   tree <n> <root_id>
//   node <id> <parent_id|-> <weight>        (weight: "p/q" or decimal literal)
// Edge-weighted variant:
//   etree <n> <root_id>
//   edge <child_id> <parent_id> <weight>

WeightedTree parse_tree(const std::string& text);
std::string serialize_tree(const WeightedTree& t);

EdgeWeightedTree parse_edge_tree(const std::string& text);
std::string serialize_edge_tree(const EdgeWeightedTree& t);

// ---- transforms -------------------------------------------------------------

/// Enforces the star condition w(v) <= sum of neighbor weights by repeated
/// full sweeps in id order until a sweep changes nothing, then scales all
/// weights so the maximum is 1. A single vertex becomes weight 1.
/// Throws GuardError when every weight is zero (n >= 2).
WeightedTree normalize(const WeightedTree& t);

struct EdgeVariantReduction {
  WeightedTree tree;
  // Original vertices keep their ids; subdivision_node[v] is the id of the
  // node splitting edge (v, parent(v)), or kNoVertex at the root.
  std::vector<VertexId> subdivision_node;
};

/// Node-weighted reduction of an edge-weighted instance: every original node
/// gets weight 1 + sum of all edge weights and every edge is subdivided by a
/// node carrying that edge's weight.
EdgeVariantReduction reduce_edge_variant(const EdgeWeightedTree& t);

struct ChainContraction {
  WeightedTree tree;
  std::vector<VertexId> image;                  // old id -> new id
  std::vector<std::vector<VertexId>> chain_of;  // new id -> ordered original chain (empty if not contracted)
};

/// Contracts every long chain (maximal run of >1 adjacent degree-2 vertices)
/// into a single node carrying the minimum weight on the chain.
ChainContraction contract_chains(const WeightedTree& t);

/// The connected component of t minus the queried set that contains x,
/// rooted at its member nearest t's root. Throws if x is queried.
SubtreeView remaining_subtree(const WeightedTree& t, const std::vector<char>& queried,
                              VertexId x);
SubtreeView remaining_subtree(const WeightedTree& t, const std::vector<VertexId>& queried,
                              VertexId x);

/// Vertex whose removal leaves components of size <= floor(|view|/2);
/// ties broken by smallest id.
VertexId centroid(const SubtreeView& view);

/// Largest component size left by removing v from the view.
int max_component_after_removal(const SubtreeView& view, VertexId v);

/// Component of view minus {q} containing x (x != q), as a new view.
SubtreeView shrink_view(const SubtreeView& view, VertexId q, VertexId x);

}  // namespace treesearch
