#pragma once

#include "treesearch/executor.hpp"

namespace treesearch {

/// Halving baseline: query the centroid of the remaining view until the
/// target is isolated. At most ceil(log2 n) queries for any target.
QueryTrace centroid_strategy_execute(const WeightedTree& t, VertexId x);

/// The centroid rule as a reusable adaptive policy.
AdaptivePolicy centroid_policy();

}  // namespace treesearch
