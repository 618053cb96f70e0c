#include "treesearch/prefix_sequences.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace treesearch {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

HeavyPartition extended_heavy_parts(const WeightedTree& t, const std::vector<bool>& heavy) {
  int n = t.size();
  UnionFind uf(n);
  // A heavy vertex joins its parent: heavy parents chain the heavy component,
  // a light parent becomes the part's anchor (shared anchors merge parts).
  for (VertexId v = 0; v < n; ++v)
    if (heavy[v] && t.parent[v] != kNoVertex) uf.unite(v, t.parent[v]);

  HeavyPartition hp;
  hp.part_of.assign(n, -1);
  std::vector<char> class_heavy(n, 0);
  for (VertexId v = 0; v < n; ++v)
    if (heavy[v]) class_heavy[uf.find(v)] = 1;
  std::vector<int> part_of_class(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    int cls = uf.find(v);
    if (!class_heavy[cls]) continue;
    if (part_of_class[cls] < 0) {
      part_of_class[cls] = static_cast<int>(hp.parts.size());
      hp.parts.emplace_back();
    }
    hp.part_of[v] = part_of_class[cls];
    hp.parts[part_of_class[cls]].push_back(v);
  }

  // Contract each part; new ids in first-occurrence order over old ids.
  hp.image.assign(n, kNoVertex);
  std::vector<VertexId> part_new_id(hp.parts.size(), kNoVertex);
  int next = 0;
  for (VertexId v = 0; v < n; ++v) {
    int part = hp.part_of[v];
    if (part < 0) {
      hp.image[v] = next++;
    } else if (part_new_id[part] == kNoVertex) {
      part_new_id[part] = next++;
    }
  }
  for (VertexId v = 0; v < n; ++v)
    if (hp.part_of[v] >= 0) hp.image[v] = part_new_id[hp.part_of[v]];

  int m = next;
  std::vector<VertexId> parent(m, kNoVertex);
  std::vector<Rat> weight(m, Rat(0));
  std::vector<char> weight_set(m, 0);
  for (VertexId v = 0; v < n; ++v) {
    VertexId nv = hp.image[v];
    if (!weight_set[nv]) {
      weight[nv] = t.weight[v];
      weight_set[nv] = 1;
    } else {
      weight[nv] = std::min(weight[nv], t.weight[v]);
    }
    if (t.parent[v] != kNoVertex && hp.image[t.parent[v]] != nv)
      parent[nv] = hp.image[t.parent[v]];
  }
  hp.contracted = WeightedTree::build(m, hp.image[t.root], parent, weight);
  hp.part_of_contracted.assign(m, -1);
  for (size_t part = 0; part < hp.parts.size(); ++part)
    hp.part_of_contracted[part_new_id[part]] = static_cast<int>(part);
  return hp;
}

int Labeling::max_label() const {
  int best = 0;
  for (int l : labels) best = std::max(best, l);
  return best;
}

namespace {

void label_recurse(const WeightedTree& t, const SubtreeView& view, int level,
                   std::vector<int>& labels) {
  if (view.members.empty()) return;
  VertexId center = centroid(view);
  labels[center] = level;
  if (view.size() == 1) return;
  std::vector<char> in_view(t.size(), 0);
  for (VertexId v : view.members) in_view[v] = 1;
  in_view[center] = 0;
  std::vector<char> seen(t.size(), 0);
  for (VertexId v : view.members) {
    if (v == center || seen[v]) continue;
    SubtreeView comp;
    comp.origin = &t;
    std::vector<VertexId> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      comp.members.push_back(u);
      for (VertexId w : t.neighbors(u))
        if (in_view[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.members.begin(), comp.members.end());
    VertexId r = comp.members[0];
    // Root of the component: the member whose parent left the component.
    for (VertexId u : comp.members) {
      VertexId par = t.parent[u];
      if (par == kNoVertex || !std::binary_search(comp.members.begin(), comp.members.end(), par)) {
        r = u;
        break;
      }
    }
    comp.root = r;
    label_recurse(t, comp, level + 1, labels);
  }
}

}  // namespace

Labeling label_contracted(const WeightedTree& tc) {
  Labeling out;
  out.labels.assign(tc.size(), 0);
  label_recurse(tc, full_view(tc), 1, out.labels);
  return out;
}

Labeling extend_labels(const HeavyPartition& hp, const Labeling& contracted_labels) {
  Labeling out;
  out.labels.assign(hp.image.size(), 0);
  for (size_t v = 0; v < hp.image.size(); ++v)
    out.labels[v] = contracted_labels.labels[hp.image[v]];
  return out;
}

QuerySequenceAssignment build_R(const WeightedTree& t, const Labeling& labels) {
  int n = t.size();
  QuerySequenceAssignment R = QuerySequenceAssignment::empty(n);
  for (VertexId v = 0; v < n; ++v) {
    struct Entry {
      int label;
      VertexId u;
    };
    std::vector<Entry> found;
    // DFS below v tracking the minimum label strictly between v and the node.
    struct Frame {
      VertexId u;
      int min_between;
    };
    std::vector<Frame> stack;
    for (VertexId c : t.children[v]) stack.push_back({c, std::numeric_limits<int>::max()});
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (labels.labels[f.u] < labels.labels[v] && labels.labels[f.u] < f.min_between)
        found.push_back({labels.labels[f.u], f.u});
      int next_min = std::min(f.min_between, labels.labels[f.u]);
      for (VertexId c : t.children[f.u]) stack.push_back({c, next_min});
    }
    std::sort(found.begin(), found.end(), [](const Entry& a, const Entry& b) {
      if (a.label != b.label) return a.label < b.label;
      return a.u < b.u;
    });
    for (size_t i = 0; i + 1 < found.size(); ++i) {
      if (found[i].label == found[i + 1].label)
        throw std::runtime_error("label visibility broken: two equal labels in one prefix");
    }
    for (const Entry& e : found) R.seq[v].push_back(e.u);
  }
  return R;
}

QuerySequenceAssignment compose(const QuerySequenceAssignment& R,
                                const QuerySequenceAssignment& S) {
  if (R.size() != S.size()) throw std::invalid_argument("assignment sizes differ");
  QuerySequenceAssignment out = QuerySequenceAssignment::empty(R.size());
  for (VertexId v = 0; v < R.size(); ++v) {
    out.seq[v] = R.seq[v];
    out.seq[v].insert(out.seq[v].end(), S.seq[v].begin(), S.seq[v].end());
  }
  return out;
}

PrefixOutput build_prefix_assignment(const WeightedTree& t, const RoundedTree& rounded,
                                     const QuerySequenceAssignment& S) {
  PrefixOutput out;
  std::vector<bool> heavy(rounded.heavy.begin(), rounded.heavy.end());
  out.partition = extended_heavy_parts(t, heavy);
  Labeling on_contracted = label_contracted(out.partition.contracted);
  out.labels = extend_labels(out.partition, on_contracted);
  out.R = build_R(t, out.labels);
  out.composed = compose(out.R, S);
  return out;
}

}  // namespace treesearch
