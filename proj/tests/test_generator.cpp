#include "doctest.h"

#include "treesearch/generator.hpp"

using namespace treesearch;

TEST_CASE("fixed shapes") {
  WeightedTree star = generate_tree(TreeKind::Star, 5, WeightModel::Unit, 0);
  CHECK(star.children[0].size() == 4);
  for (VertexId v = 0; v < 5; ++v) CHECK(star.weight[v] == Rat(1));

  WeightedTree path = generate_tree(TreeKind::Path, 8, WeightModel::Unit, 0);
  CHECK(path.is_path());
  CHECK(path.size() == 8);

  WeightedTree spider = generate_tree(TreeKind::Spider, 12, WeightModel::Unit, 0);
  int over2 = 0;
  for (VertexId v = 0; v < spider.size(); ++v)
    if (spider.degree(v) > 2) ++over2;
  CHECK(over2 <= 1);

  WeightedTree cat = generate_tree(TreeKind::Caterpillar, 11, WeightModel::Unit, 0);
  cat.validate();
}

TEST_CASE("random generation is deterministic per seed") {
  WeightedTree a = generate_tree(TreeKind::Random, 10, WeightModel::Uniform, 42);
  WeightedTree b = generate_tree(TreeKind::Random, 10, WeightModel::Uniform, 42);
  CHECK(serialize_tree(a) == serialize_tree(b));
  WeightedTree c = generate_tree(TreeKind::Random, 10, WeightModel::Uniform, 43);
  CHECK(serialize_tree(a) != serialize_tree(c));
}

TEST_CASE("weights have bounded denominators") {
  for (WeightModel model : {WeightModel::Uniform, WeightModel::Heavytail}) {
    WeightedTree t = generate_tree(TreeKind::Random, 30, model, 9);
    for (VertexId v = 0; v < t.size(); ++v) {
      CHECK(t.weight[v] > 0);
      CHECK(denominator(t.weight[v]) <= BigInt(1) << 16);
    }
  }
}

TEST_CASE("edge instances") {
  EdgeWeightedTree et = generate_edge_tree(7, WeightModel::Uniform, 3);
  et.validate();
  EdgeWeightedTree same = generate_edge_tree(7, WeightModel::Uniform, 3);
  CHECK(serialize_edge_tree(et) == serialize_edge_tree(same));
}
