#include "treesearch/baseline.hpp"

namespace treesearch {

AdaptivePolicy centroid_policy() {
  return [](const SubtreeView& view) { return centroid(view); };
}

QueryTrace centroid_strategy_execute(const WeightedTree& t, VertexId x) {
  return run_adaptive(t, centroid_policy(), x);
}

}  // namespace treesearch
