#include "treesearch/generator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace treesearch {

namespace {

uint64_t next_rand(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t rand_below(uint64_t& state, uint64_t bound) {
  return bound == 0 ? 0 : next_rand(state) % bound;
}

Rat draw_weight(WeightModel model, uint64_t& rng) {
  switch (model) {
    case WeightModel::Unit:
      return Rat(1);
    case WeightModel::Uniform:
      // k / 2^16 with k in [1, 2^16]
      return Rat(BigInt(1 + static_cast<long long>(rand_below(rng, 1 << 16))), BigInt(1 << 16));
    case WeightModel::Heavytail:
      // log-uniform spread: 2^-e, e in [0, 16]
      return Rat(BigInt(1), BigInt(1) << rand_below(rng, 17));
  }
  return Rat(1);
}

// Uniform labeled tree: decode a random parent sequence by leaf elimination.
std::vector<std::pair<VertexId, VertexId>> random_edges(int n, uint64_t& rng) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (n == 1) return edges;
  if (n == 2) {
    edges.push_back({0, 1});
    return edges;
  }
  std::vector<int> code(n - 2);
  for (int& c : code) c = static_cast<int>(rand_below(rng, n));
  std::vector<int> degree(n, 1);
  for (int c : code) ++degree[c];
  std::set<int> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.insert(v);
  for (int c : code) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.push_back({leaf, c});
    if (--degree[c] == 1) leaves.insert(c);
  }
  int u = *leaves.begin();
  int v = *std::next(leaves.begin());
  edges.push_back({u, v});
  return edges;
}

std::vector<VertexId> parents_from_edges(int n, VertexId root,
                                         const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<char> seen(n, 0);
  std::deque<VertexId> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        parent[u] = v;
        queue.push_back(u);
      }
  }
  return parent;
}

}  // namespace

TreeKind tree_kind_from(const std::string& name) {
  if (name == "path") return TreeKind::Path;
  if (name == "star") return TreeKind::Star;
  if (name == "spider") return TreeKind::Spider;
  if (name == "caterpillar") return TreeKind::Caterpillar;
  if (name == "random") return TreeKind::Random;
  throw GuardError("unknown tree kind '" + name + "'");
}

WeightModel weight_model_from(const std::string& name) {
  if (name == "unit") return WeightModel::Unit;
  if (name == "uniform") return WeightModel::Uniform;
  if (name == "heavytail") return WeightModel::Heavytail;
  throw GuardError("unknown weight model '" + name + "'");
}

WeightedTree generate_tree(TreeKind kind, int n, WeightModel weights, unsigned long long seed) {
  if (n < 1) throw GuardError("instance size must be >= 1");
  uint64_t rng = seed ^ 0xa02bdbf7bb3c0a7ull;
  std::vector<VertexId> parent(n, kNoVertex);
  switch (kind) {
    case TreeKind::Path:
      for (VertexId v = 1; v < n; ++v) parent[v] = v - 1;
      break;
    case TreeKind::Star:
      for (VertexId v = 1; v < n; ++v) parent[v] = 0;
      break;
    case TreeKind::Spider: {
      // center 0 with roughly sqrt(n-1) legs of balanced lengths
      int legs = std::max(1, static_cast<int>(std::lround(std::sqrt(double(std::max(0, n - 1))))));
      std::vector<VertexId> leg_tip(legs, 0);
      int leg = 0;
      for (VertexId v = 1; v < n; ++v) {
        parent[v] = leg_tip[leg];
        leg_tip[leg] = v;
        leg = (leg + 1) % legs;
      }
      break;
    }
    case TreeKind::Caterpillar: {
      int spine = (n + 1) / 2;
      for (VertexId v = 1; v < spine; ++v) parent[v] = v - 1;
      for (VertexId v = spine; v < n; ++v) parent[v] = (v - spine) % spine;
      break;
    }
    case TreeKind::Random: {
      auto edges = random_edges(n, rng);
      parent = parents_from_edges(n, 0, edges);
      break;
    }
  }
  std::vector<Rat> weight(n);
  for (VertexId v = 0; v < n; ++v) weight[v] = draw_weight(weights, rng);
  return WeightedTree::build(n, 0, parent, weight);
}

EdgeWeightedTree generate_edge_tree(int n, WeightModel weights, unsigned long long seed) {
  if (n < 1) throw GuardError("instance size must be >= 1");
  uint64_t rng = seed ^ 0x9d2c5680cafebeefull;
  std::vector<VertexId> parent(n, kNoVertex);
  if (n > 1) {
    auto edges = random_edges(n, rng);
    parent = parents_from_edges(n, 0, edges);
  }
  std::vector<Rat> eweight(n, Rat(0));
  for (VertexId v = 1; v < n; ++v) eweight[v] = draw_weight(weights, rng);
  return EdgeWeightedTree::build(n, 0, parent, eweight);
}

}  // namespace treesearch
