#include "doctest.h"

#include "test_util.hpp"
#include "treesearch/baseline.hpp"
#include "treesearch/generator.hpp"

using namespace treesearch;
using namespace treesearch::testutil;

TEST_CASE("centroid strategy basics") {
  CHECK(centroid_strategy_execute(make_unit_path(1), 0).steps.empty());
  for (VertexId x = 0; x < 6; ++x)
    CHECK(centroid_strategy_execute(make_unit_star(6), x).query_count() == 1);
  for (VertexId x = 0; x < 8; ++x)
    CHECK(centroid_strategy_execute(make_unit_path(8), x).query_count() <= 3);
}

TEST_CASE("centroid strategy stays within ceil(log2 n) queries and cost") {
  for (unsigned long long seed = 1; seed <= 25; ++seed) {
    int n = 2 + static_cast<int>((seed * 37) % 60);
    WeightedTree t = normalize(generate_tree(TreeKind::Random, n, WeightModel::Uniform, seed));
    int bound = ceil_log2(n);
    for (VertexId x = 0; x < n; ++x) {
      QueryTrace trace = centroid_strategy_execute(t, x);
      CHECK(trace.query_count() <= bound);
      CHECK(trace.cost <= Rat(bound));
    }
  }
}
