#pragma once

#include "treesearch/schedule_dp.hpp"

namespace treesearch {

/// Partition of the heavy vertices into maximal heavy-connected groups, each
/// extended by the light parent of its topmost member (groups sharing that
/// parent merge into one part), together with the tree obtained by
/// contracting every part to a single node.
struct HeavyPartition {
  std::vector<std::vector<VertexId>> parts;  // sorted member lists
  std::vector<int> part_of;                  // vertex -> part index or -1
  WeightedTree contracted;
  std::vector<VertexId> image;               // vertex -> contracted id
  std::vector<int> part_of_contracted;       // contracted id -> part index or -1
};

HeavyPartition extended_heavy_parts(const WeightedTree& t, const std::vector<bool>& heavy);

/// Vertex labels (1-based). Between any two equal labels on the contracted
/// tree lies a smaller label; all vertices of one part share a label.
struct Labeling {
  std::vector<int> labels;

  int max_label() const;
};

/// Recursive centroid labeling: the centroid of every remaining piece gets
/// the current label, its components recurse with label+1.
Labeling label_contracted(const WeightedTree& tc);

/// Extends a contracted-tree labeling back to the original vertices.
Labeling extend_labels(const HeavyPartition& hp, const Labeling& contracted_labels);

/// Prefix sequences: R(v) lists the descendants u with a smaller label than v
/// that are label-visible from v (every vertex strictly between has a larger
/// label than u), ordered by increasing label. Labels inside one R(v) are
/// distinct by construction; this is asserted.
QuerySequenceAssignment build_R(const WeightedTree& t, const Labeling& labels);

/// Per-vertex concatenation: R(v) then S(v), duplicates kept.
QuerySequenceAssignment compose(const QuerySequenceAssignment& R,
                                const QuerySequenceAssignment& S);

/// Convenience: rounds at (c, omega) taken from `params`, builds parts,
/// labels, and the composed assignment R ∘ S.
struct PrefixOutput {
  HeavyPartition partition;
  Labeling labels;  // on the original tree
  QuerySequenceAssignment R;
  QuerySequenceAssignment composed;
};

PrefixOutput build_prefix_assignment(const WeightedTree& t, const RoundedTree& rounded,
                                     const QuerySequenceAssignment& S);

}  // namespace treesearch
