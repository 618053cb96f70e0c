#include "doctest.h"

#include "test_util.hpp"
#include "treesearch/generator.hpp"
#include "treesearch/tree.hpp"

#include <set>

using namespace treesearch;
using namespace treesearch::testutil;

TEST_CASE("parse_tree handles minimal instances") {
  WeightedTree singleton = parse_tree("tree 1 0\nnode 0 - 1\n");
  CHECK(singleton.size() == 1);
  CHECK(singleton.weight[0] == Rat(1));

  WeightedTree two = parse_tree("tree 2 0\nnode 0 - 1\nnode 1 0 1/2\n");
  CHECK(two.size() == 2);
  CHECK(two.parent[1] == 0);
  CHECK(two.weight[1] == make_rat(1, 2));
}

TEST_CASE("parse_tree reports malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(parse_tree("tree 2 0\nnode 0 - 1\nnode 1 1 1\n"),
                       doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_AS(parse_tree("tree 2 0\nnode 0 - 1\nnode 0 - 1\n"), ParseError);   // duplicate
  CHECK_THROWS_AS(parse_tree("tree 2 0\nnode 0 - 1\nnode 1 - 1\n"), ParseError);   // two roots
  CHECK_THROWS_AS(parse_tree("tree 2 0\nnode 0 - 1\nnode 1 0 -3\n"), ParseError);  // negative
  CHECK_THROWS_AS(parse_tree("tree 2 0\nnode 0 - 1\nnode 1 0 x\n"), ParseError);   // bad weight
  CHECK_THROWS_AS(parse_tree("node 0 - 1\n"), ParseError);                          // no header
  // three-vertex cycle below an isolated root line
  CHECK_THROWS_AS(parse_tree("tree 3 0\nnode 0 - 1\nnode 1 2 1\nnode 2 1 1\n"), ParseError);
}

TEST_CASE("serialize/parse round trip is the identity, byte-stable") {
  std::string text = "tree 3 1\nnode 0 1 3/8\nnode 1 - 1\nnode 2 1 0.25\n";
  WeightedTree t = parse_tree(text);
  std::string canonical = serialize_tree(t);
  CHECK(canonical == "tree 3 1\nnode 0 1 3/8\nnode 1 - 1\nnode 2 1 1/4\n");
  CHECK(serialize_tree(parse_tree(canonical)) == canonical);
  CHECK(canonical.find("3/8") != std::string::npos);  // exact, not a decimal
}

TEST_CASE("parse_tree ignores comments and blank lines") {
  WeightedTree t = parse_tree("# header comment\ntree 2 0\n\nnode 0 - 1 # root\nnode 1 0 1\n");
  CHECK(t.size() == 2);
}

TEST_CASE("normalize: star condition then scale") {
  SUBCASE("already satisfied, scaling only") {
    WeightedTree t = make_path({"2", "6", "4"});
    WeightedTree nt = normalize(t);
    CHECK(nt.weight[0] == make_rat(1, 3));
    CHECK(nt.weight[1] == Rat(1));
    CHECK(nt.weight[2] == make_rat(2, 3));
  }
  SUBCASE("fixpoint sweeps cap both endpoints") {
    WeightedTree t = make_path({"1", "1/10"});
    WeightedTree nt = normalize(t);
    CHECK(nt.weight[0] == Rat(1));
    CHECK(nt.weight[1] == Rat(1));
  }
  SUBCASE("singleton becomes weight 1") {
    WeightedTree t = make_path({"7"});
    CHECK(normalize(t).weight[0] == Rat(1));
  }
  SUBCASE("all-zero weights refused") {
    CHECK_THROWS_AS(normalize(make_path({"0", "0"})), GuardError);
  }
  SUBCASE("weights collapsing to zero refused") {
    CHECK_THROWS_AS(normalize(make_path({"0", "5", "0"})), GuardError);
  }
}

TEST_CASE("normalize is idempotent and enforces its postconditions") {
  for (unsigned long long seed = 1; seed <= 25; ++seed) {
    WeightedTree t = generate_tree(TreeKind::Random, 2 + static_cast<int>(seed % 9),
                                   WeightModel::Uniform, seed);
    WeightedTree nt = normalize(t);
    Rat maxw = 0;
    for (VertexId v = 0; v < nt.size(); ++v) {
      Rat sum = 0;
      for (VertexId u : nt.neighbors(v)) sum += nt.weight[u];
      CHECK(nt.weight[v] <= sum);
      maxw = std::max(maxw, nt.weight[v]);
    }
    CHECK(maxw == Rat(1));
    WeightedTree again = normalize(nt);
    CHECK(again.weight == nt.weight);
  }
}

TEST_CASE("reduce_edge_variant subdivides with large node weights") {
  SUBCASE("single edge") {
    EdgeWeightedTree et = EdgeWeightedTree::build(2, 0, {kNoVertex, 0}, {Rat(0), Rat(2)});
    EdgeVariantReduction red = reduce_edge_variant(et);
    CHECK(red.tree.size() == 3);
    CHECK(red.tree.weight[0] == Rat(3));
    CHECK(red.tree.weight[1] == Rat(3));
    CHECK(red.tree.weight[red.subdivision_node[1]] == Rat(2));
    CHECK(red.tree.parent[1] == red.subdivision_node[1]);
    CHECK(red.tree.parent[red.subdivision_node[1]] == 0);
  }
  SUBCASE("edgeless singleton") {
    EdgeWeightedTree et = EdgeWeightedTree::build(1, 0, {kNoVertex}, {Rat(0)});
    EdgeVariantReduction red = reduce_edge_variant(et);
    CHECK(red.tree.size() == 1);
    CHECK(red.tree.weight[0] == Rat(1));
  }
  SUBCASE("two-edge path, unit weights") {
    EdgeWeightedTree et =
        EdgeWeightedTree::build(3, 0, {kNoVertex, 0, 1}, {Rat(0), Rat(1), Rat(1)});
    EdgeVariantReduction red = reduce_edge_variant(et);
    CHECK(red.tree.size() == 5);
    std::multiset<std::string> weights;
    for (VertexId v = 0; v < 5; ++v) weights.insert(rat_str(red.tree.weight[v]));
    CHECK(weights == std::multiset<std::string>{"1", "1", "3", "3", "3"});
    CHECK(red.tree.is_path());
  }
}

TEST_CASE("contract_chains") {
  SUBCASE("5-path collapses its middle") {
    WeightedTree t = make_unit_path(5);
    ChainContraction cc = contract_chains(t);
    CHECK(cc.tree.size() == 3);
    CHECK(cc.tree.is_path());
    // chain = inner vertices 1,2,3 ordered from the root side
    CHECK(cc.chain_of[cc.image[1]] == std::vector<VertexId>{1, 2, 3});
  }
  SUBCASE("star unchanged") {
    WeightedTree t = make_unit_star(5);
    ChainContraction cc = contract_chains(t);
    CHECK(cc.tree.size() == 5);
  }
  SUBCASE("contracted node carries the minimum weight") {
    WeightedTree t = make_path({"9", "5", "2", "7", "9"});
    ChainContraction cc = contract_chains(t);
    CHECK(cc.tree.size() == 3);
    CHECK(cc.tree.weight[cc.image[2]] == Rat(2));
  }
  SUBCASE("no long chain remains and the expansion restores the topology") {
    for (unsigned long long seed = 1; seed <= 20; ++seed) {
      WeightedTree t = generate_tree(seed % 2 ? TreeKind::Random : TreeKind::Caterpillar,
                                     3 + static_cast<int>(seed % 20), WeightModel::Uniform, seed);
      ChainContraction cc = contract_chains(t);
      for (VertexId v = 0; v < cc.tree.size(); ++v) {
        if (cc.tree.degree(v) != 2) continue;
        for (VertexId u : cc.tree.neighbors(v)) {
          bool both_plain = cc.chain_of[v].empty() && cc.chain_of[u].empty();
          CHECK((cc.tree.degree(u) != 2 || !both_plain));
        }
      }
      // expansion: rebuild the undirected edge set and compare
      std::set<std::pair<VertexId, VertexId>> original, expanded;
      auto norm_edge = [](VertexId a, VertexId b) {
        return std::make_pair(std::min(a, b), std::max(a, b));
      };
      for (VertexId v = 0; v < t.size(); ++v)
        if (t.parent[v] != kNoVertex) original.insert(norm_edge(v, t.parent[v]));
      // edges within chains
      for (const auto& chain : cc.chain_of)
        for (size_t i = 0; i + 1 < chain.size(); ++i)
          expanded.insert(norm_edge(chain[i], chain[i + 1]));
      // edges between contracted nodes: attach at the original endpoints
      for (VertexId v = 0; v < t.size(); ++v) {
        VertexId p = t.parent[v];
        if (p == kNoVertex || cc.image[v] == cc.image[p]) continue;
        expanded.insert(norm_edge(v, p));
      }
      CHECK(original == expanded);
    }
  }
}

TEST_CASE("remaining_subtree picks the component of the target") {
  WeightedTree t = make_unit_path(3);  // 0-1-2 rooted at 0
  SUBCASE("no queries: whole tree") {
    SubtreeView view = remaining_subtree(t, std::vector<VertexId>{}, 2);
    CHECK(view.size() == 3);
    CHECK(view.root == 0);
  }
  SUBCASE("down part") {
    SubtreeView view = remaining_subtree(t, std::vector<VertexId>{1}, 2);
    CHECK(view.members == std::vector<VertexId>{2});
    CHECK(view.root == 2);
  }
  SUBCASE("up part") {
    SubtreeView view = remaining_subtree(t, std::vector<VertexId>{2}, 0);
    CHECK(view.members == std::vector<VertexId>{0, 1});
    CHECK(view.root == 0);
  }
  SUBCASE("queried target refused") {
    CHECK_THROWS(remaining_subtree(t, std::vector<VertexId>{1}, 1));
  }
}

TEST_CASE("remaining_subtree shrinks monotonically") {
  WeightedTree t = generate_tree(TreeKind::Random, 12, WeightModel::Unit, 7);
  for (VertexId x = 0; x < t.size(); ++x) {
    std::vector<VertexId> queried;
    SubtreeView prev = remaining_subtree(t, queried, x);
    for (VertexId v = 0; v < t.size(); ++v) {
      if (v == x) continue;
      queried.push_back(v);
      SubtreeView next = remaining_subtree(t, queried, x);
      for (VertexId m : next.members) CHECK(prev.contains(m));
      prev = next;
    }
  }
}

TEST_CASE("centroid halves the view, smallest id wins ties") {
  CHECK(centroid(full_view(make_unit_path(1))) == 0);
  CHECK(centroid(full_view(make_unit_path(3))) == 1);
  // 4-path: vertices 1 and 2 both leave components of size 2
  CHECK(centroid(full_view(make_unit_path(4))) == 1);

  for (unsigned long long seed = 1; seed <= 30; ++seed) {
    WeightedTree t = generate_tree(TreeKind::Random, 2 + static_cast<int>(seed % 14),
                                   WeightModel::Unit, seed);
    SubtreeView view = full_view(t);
    VertexId c = centroid(view);
    int bound = view.size() / 2;
    CHECK(max_component_after_removal(view, c) <= bound);
  }
}
