#pragma once

#include "treesearch/tree.hpp"

namespace treesearch {

enum class TreeKind { Path, Star, Spider, Caterpillar, Random };
enum class WeightModel { Unit, Uniform, Heavytail };

TreeKind tree_kind_from(const std::string& name);
WeightModel weight_model_from(const std::string& name);

/// Deterministic instance generator. Random topologies decode a random
/// sequence the classic way (label multiset with leaf elimination); weights
/// are exact rationals with denominator at most 2^16.
WeightedTree generate_tree(TreeKind kind, int n, WeightModel weights, unsigned long long seed);

/// Edge-weighted instance over a random topology.
EdgeWeightedTree generate_edge_tree(int n, WeightModel weights, unsigned long long seed);

}  // namespace treesearch
