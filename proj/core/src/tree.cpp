#include "treesearch/tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace treesearch {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string out = (pos == std::string::npos) ? line : line.substr(0, pos);
  while (!out.empty() && (out.back() == '\r' || out.back() == ' ' || out.back() == '\t'))
    out.pop_back();
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail_line(int line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

long long parse_id(const std::string& tok, int line_no, const char* what) {
  try {
    size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail_line(line_no, std::string("malformed ") + what + " '" + tok + "'");
  }
}

void check_reachability(int n, VertexId root,
                        const std::vector<std::vector<VertexId>>& children) {
  std::vector<char> seen(n, 0);
  std::deque<VertexId> queue{root};
  seen[root] = 1;
  int count = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    ++count;
    for (VertexId c : children[v]) {
      if (seen[c]) throw std::runtime_error("cycle through vertex " + std::to_string(c));
      seen[c] = 1;
      queue.push_back(c);
    }
  }
  if (count != n) {
    for (VertexId v = 0; v < n; ++v)
      if (!seen[v])
        throw std::runtime_error("cycle: vertex " + std::to_string(v) +
                                 " not reachable from the root");
  }
}

}  // namespace

std::vector<VertexId> WeightedTree::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  if (parent[v] != kNoVertex) out.push_back(parent[v]);
  out.insert(out.end(), children[v].begin(), children[v].end());
  return out;
}

std::vector<int> WeightedTree::subtree_sizes() const {
  int n = size();
  std::vector<int> sz(n, 1);
  std::vector<VertexId> order;
  order.reserve(n);
  order.push_back(root);
  for (size_t i = 0; i < order.size(); ++i)
    for (VertexId c : children[order[i]]) order.push_back(c);
  for (int i = n - 1; i >= 0; --i) {
    VertexId v = order[i];
    if (parent[v] != kNoVertex) sz[parent[v]] += sz[v];
  }
  return sz;
}

std::vector<int> WeightedTree::depths() const {
  int n = size();
  std::vector<int> depth(n, 0);
  std::vector<VertexId> order{root};
  order.reserve(n);
  for (size_t i = 0; i < order.size(); ++i)
    for (VertexId c : children[order[i]]) {
      depth[c] = depth[order[i]] + 1;
      order.push_back(c);
    }
  return depth;
}

bool WeightedTree::is_path() const {
  for (VertexId v = 0; v < size(); ++v)
    if (degree(v) > 2) return false;
  return true;
}

void WeightedTree::validate() const {
  int n = size();
  if (n <= 0) throw std::runtime_error("empty tree");
  if (root < 0 || root >= n) throw std::runtime_error("root id out of range");
  if (parent[root] != kNoVertex) throw std::runtime_error("root has a parent");
  if (static_cast<int>(children.size()) != n || static_cast<int>(weight.size()) != n)
    throw std::runtime_error("field size mismatch");
  for (VertexId v = 0; v < n; ++v) {
    if (v != root && (parent[v] < 0 || parent[v] >= n))
      throw std::runtime_error("parent id out of range at vertex " + std::to_string(v));
    if (weight[v] < 0)
      throw std::runtime_error("negative weight at vertex " + std::to_string(v));
  }
  check_reachability(n, root, children);
}

WeightedTree WeightedTree::build(int n, VertexId root, const std::vector<VertexId>& parent,
                                 const std::vector<Rat>& weight) {
  WeightedTree t;
  t.root = root;
  t.parent = parent;
  t.weight = weight;
  t.children.assign(n, {});
  for (VertexId v = 0; v < n; ++v)
    if (parent[v] != kNoVertex) t.children[parent[v]].push_back(v);
  for (auto& ch : t.children) std::sort(ch.begin(), ch.end());
  t.validate();
  return t;
}

void EdgeWeightedTree::validate() const {
  int n = size();
  if (n <= 0) throw std::runtime_error("empty tree");
  if (root < 0 || root >= n) throw std::runtime_error("root id out of range");
  if (parent[root] != kNoVertex) throw std::runtime_error("root has a parent");
  for (VertexId v = 0; v < n; ++v) {
    if (v != root && (parent[v] < 0 || parent[v] >= n))
      throw std::runtime_error("parent id out of range at vertex " + std::to_string(v));
    if (v != root && edge_weight[v] < 0)
      throw std::runtime_error("negative edge weight at vertex " + std::to_string(v));
  }
  check_reachability(n, root, children);
}

EdgeWeightedTree EdgeWeightedTree::build(int n, VertexId root,
                                         const std::vector<VertexId>& parent,
                                         const std::vector<Rat>& edge_weight) {
  EdgeWeightedTree t;
  t.root = root;
  t.parent = parent;
  t.edge_weight = edge_weight;
  t.children.assign(n, {});
  for (VertexId v = 0; v < n; ++v)
    if (parent[v] != kNoVertex) t.children[parent[v]].push_back(v);
  for (auto& ch : t.children) std::sort(ch.begin(), ch.end());
  t.validate();
  return t;
}

bool SubtreeView::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

SubtreeView full_view(const WeightedTree& t) {
  SubtreeView view;
  view.origin = &t;
  view.members.resize(t.size());
  for (int v = 0; v < t.size(); ++v) view.members[v] = v;
  view.root = t.root;
  return view;
}

// ---- parsing ----------------------------------------------------------------

WeightedTree parse_tree(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  long long n = -1;
  long long root = -1;
  int header_line = 0;
  std::vector<VertexId> parent;
  std::vector<Rat> weight;
  std::vector<char> seen;
  int nodes_read = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (n < 0) {
      if (toks[0] != "tree" || toks.size() != 3)
        fail_line(line_no, "expected header 'tree <n> <root_id>'");
      n = parse_id(toks[1], line_no, "vertex count");
      root = parse_id(toks[2], line_no, "root id");
      if (n < 1) fail_line(line_no, "vertex count must be >= 1");
      if (root < 0 || root >= n) fail_line(line_no, "root id out of range");
      header_line = line_no;
      parent.assign(n, kNoVertex);
      weight.assign(n, Rat(0));
      seen.assign(n, 0);
      continue;
    }
    if (toks[0] != "node" || toks.size() != 4)
      fail_line(line_no, "expected 'node <id> <parent_id|-> <weight>'");
    long long id = parse_id(toks[1], line_no, "node id");
    if (id < 0 || id >= n) fail_line(line_no, "node id out of range");
    if (seen[id]) fail_line(line_no, "duplicate id " + std::to_string(id));
    seen[id] = 1;
    ++nodes_read;
    if (toks[2] == "-") {
      if (id != root) fail_line(line_no, "multiple roots: vertex " + std::to_string(id) +
                                             " has no parent but root is " + std::to_string(root));
      parent[id] = kNoVertex;
    } else {
      long long p = parse_id(toks[2], line_no, "parent id");
      if (p < 0 || p >= n) fail_line(line_no, "parent id out of range");
      if (p == id) fail_line(line_no, "cycle: vertex " + std::to_string(id) + " is its own parent");
      if (id == root) fail_line(line_no, "root must have parent '-'");
      parent[id] = static_cast<VertexId>(p);
    }
    Rat w;
    try {
      w = parse_rational(toks[3]);
    } catch (const std::exception& e) {
      fail_line(line_no, e.what());
    }
    if (w < 0) fail_line(line_no, "negative weight");
    weight[id] = w;
  }
  if (n < 0) throw ParseError("missing 'tree' header");
  if (nodes_read != n)
    fail_line(header_line, "expected " + std::to_string(n) + " node lines, found " +
                               std::to_string(nodes_read));
  try {
    return WeightedTree::build(static_cast<int>(n), static_cast<VertexId>(root), parent, weight);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_tree(const WeightedTree& t) {
  std::ostringstream out;
  out << "tree " << t.size() << " " << t.root << "\n";
  for (VertexId v = 0; v < t.size(); ++v) {
    out << "node " << v << " ";
    if (t.parent[v] == kNoVertex)
      out << "-";
    else
      out << t.parent[v];
    out << " " << rat_str(t.weight[v]) << "\n";
  }
  return out.str();
}

EdgeWeightedTree parse_edge_tree(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  long long n = -1;
  long long root = -1;
  int header_line = 0;
  std::vector<VertexId> parent;
  std::vector<Rat> eweight;
  int edges_read = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (n < 0) {
      if (toks[0] != "etree" || toks.size() != 3)
        fail_line(line_no, "expected header 'etree <n> <root_id>'");
      n = parse_id(toks[1], line_no, "vertex count");
      root = parse_id(toks[2], line_no, "root id");
      if (n < 1) fail_line(line_no, "vertex count must be >= 1");
      if (root < 0 || root >= n) fail_line(line_no, "root id out of range");
      header_line = line_no;
      parent.assign(n, kNoVertex);
      eweight.assign(n, Rat(0));
      continue;
    }
    if (toks[0] != "edge" || toks.size() != 4)
      fail_line(line_no, "expected 'edge <child_id> <parent_id> <weight>'");
    long long c = parse_id(toks[1], line_no, "child id");
    long long p = parse_id(toks[2], line_no, "parent id");
    if (c < 0 || c >= n || p < 0 || p >= n) fail_line(line_no, "vertex id out of range");
    if (c == p) fail_line(line_no, "self-loop edge");
    if (c == root) fail_line(line_no, "edge points above the root");
    if (parent[c] != kNoVertex) fail_line(line_no, "duplicate edge into vertex " + std::to_string(c));
    parent[c] = static_cast<VertexId>(p);
    try {
      eweight[c] = parse_rational(toks[3]);
    } catch (const std::exception& e) {
      fail_line(line_no, e.what());
    }
    if (eweight[c] < 0) fail_line(line_no, "negative weight");
    ++edges_read;
  }
  if (n < 0) throw ParseError("missing 'etree' header");
  if (edges_read != n - 1)
    fail_line(header_line, "expected " + std::to_string(n - 1) + " edge lines, found " +
                               std::to_string(edges_read));
  try {
    return EdgeWeightedTree::build(static_cast<int>(n), static_cast<VertexId>(root), parent,
                                   eweight);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_edge_tree(const EdgeWeightedTree& t) {
  std::ostringstream out;
  out << "etree " << t.size() << " " << t.root << "\n";
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root) continue;
    out << "edge " << v << " " << t.parent[v] << " " << rat_str(t.edge_weight[v]) << "\n";
  }
  return out.str();
}

// ---- transforms -------------------------------------------------------------

WeightedTree normalize(const WeightedTree& t) {
  WeightedTree out = t;
  int n = t.size();
  if (n == 1) {
    out.weight[0] = 1;
    return out;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId v = 0; v < n; ++v) {
      Rat sum = 0;
      for (VertexId u : out.neighbors(v)) sum += out.weight[u];
      if (out.weight[v] > sum) {
        out.weight[v] = sum;
        changed = true;
      }
    }
  }
  Rat maxw = 0;
  for (VertexId v = 0; v < n; ++v) maxw = std::max(maxw, out.weight[v]);
  if (maxw == 0)
    throw GuardError("normalization impossible: all weights are zero");
  for (VertexId v = 0; v < n; ++v) out.weight[v] /= maxw;
  return out;
}

EdgeVariantReduction reduce_edge_variant(const EdgeWeightedTree& t) {
  int n = t.size();
  Rat total = 0;
  for (VertexId v = 0; v < n; ++v)
    if (v != t.root) total += t.edge_weight[v];
  Rat node_weight = Rat(1) + total;

  // Original vertices keep ids 0..n-1; subdivision node for edge (v, parent)
  // gets id n + rank of v among non-root ids.
  std::vector<VertexId> sub(n, kNoVertex);
  int next = n;
  for (VertexId v = 0; v < n; ++v)
    if (v != t.root) sub[v] = next++;

  int m = next;
  std::vector<VertexId> parent(m, kNoVertex);
  std::vector<Rat> weight(m, Rat(0));
  for (VertexId v = 0; v < n; ++v) {
    weight[v] = node_weight;
    if (v == t.root) continue;
    parent[v] = sub[v];
    parent[sub[v]] = t.parent[v];
    weight[sub[v]] = t.edge_weight[v];
  }
  EdgeVariantReduction out;
  out.tree = WeightedTree::build(m, t.root, parent, weight);
  out.subdivision_node = sub;
  return out;
}

ChainContraction contract_chains(const WeightedTree& t) {
  int n = t.size();
  std::vector<int> chain_id(n, -1);
  std::vector<std::vector<VertexId>> chains;
  std::vector<int> depth = t.depths();

  auto degree2 = [&](VertexId v) { return t.degree(v) == 2; };

  std::vector<char> visited(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (!degree2(v) || visited[v]) continue;
    // Collect the maximal run of adjacent degree-2 vertices through v.
    std::vector<VertexId> run{v};
    visited[v] = 1;
    for (int dir = 0; dir < 2; ++dir) {
      VertexId prev = v;
      while (true) {
        VertexId next = kNoVertex;
        for (VertexId u : t.neighbors(prev)) {
          if (degree2(u) && !visited[u]) {
            next = u;
            break;
          }
        }
        if (next == kNoVertex) break;
        visited[next] = 1;
        if (dir == 0)
          run.push_back(next);
        else
          run.insert(run.begin(), next);
        prev = next;
      }
    }
    if (run.size() < 2) continue;  // a lone degree-2 vertex is not a long chain
    // Canonical order: start at the end nearest the root, smaller id on ties.
    VertexId front = run.front(), back = run.back();
    if (depth[back] < depth[front] || (depth[back] == depth[front] && back < front))
      std::reverse(run.begin(), run.end());
    int id = static_cast<int>(chains.size());
    for (VertexId u : run) chain_id[u] = id;
    chains.push_back(std::move(run));
  }

  // Assign new ids: first occurrence order over old ids.
  std::vector<VertexId> image(n, kNoVertex);
  std::vector<int> chain_new_id(chains.size(), kNoVertex);
  int next = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (chain_id[v] < 0) {
      image[v] = next++;
    } else if (chain_new_id[chain_id[v]] == kNoVertex) {
      chain_new_id[chain_id[v]] = next++;
    }
  }
  for (VertexId v = 0; v < n; ++v)
    if (chain_id[v] >= 0) image[v] = chain_new_id[chain_id[v]];

  int m = next;
  std::vector<Rat> weight(m, Rat(0));
  std::vector<char> set(m, 0);
  for (VertexId v = 0; v < n; ++v) {
    VertexId nv = image[v];
    if (!set[nv]) {
      weight[nv] = t.weight[v];
      set[nv] = 1;
    } else {
      weight[nv] = std::min(weight[nv], t.weight[v]);
    }
  }

  std::vector<VertexId> parent(m, kNoVertex);
  for (VertexId v = 0; v < n; ++v) {
    if (t.parent[v] == kNoVertex) continue;
    VertexId a = image[v], b = image[t.parent[v]];
    if (a != b) parent[a] = b;
  }
  ChainContraction out;
  out.tree = WeightedTree::build(m, image[t.root], parent, weight);
  out.image = image;
  out.chain_of.assign(m, {});
  for (size_t i = 0; i < chains.size(); ++i) out.chain_of[chain_new_id[i]] = chains[i];
  return out;
}

SubtreeView remaining_subtree(const WeightedTree& t, const std::vector<char>& queried,
                              VertexId x) {
  if (queried[x]) throw std::invalid_argument("target is in the queried set");
  SubtreeView view;
  view.origin = &t;
  std::vector<char> in_comp(t.size(), 0);
  std::deque<VertexId> queue{x};
  in_comp[x] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    view.members.push_back(v);
    for (VertexId u : t.neighbors(v)) {
      if (!in_comp[u] && !queried[u]) {
        in_comp[u] = 1;
        queue.push_back(u);
      }
    }
  }
  std::sort(view.members.begin(), view.members.end());
  VertexId r = x;
  while (t.parent[r] != kNoVertex && in_comp[t.parent[r]]) r = t.parent[r];
  view.root = r;
  return view;
}

SubtreeView remaining_subtree(const WeightedTree& t, const std::vector<VertexId>& queried,
                              VertexId x) {
  std::vector<char> mask(t.size(), 0);
  for (VertexId v : queried) mask[v] = 1;
  return remaining_subtree(t, mask, x);
}

int max_component_after_removal(const SubtreeView& view, VertexId v) {
  const WeightedTree& t = *view.origin;
  std::vector<char> in_view(t.size(), 0);
  for (VertexId u : view.members) in_view[u] = 1;
  // Sizes within the view, rooted at view.root.
  std::vector<int> order;
  order.push_back(view.root);
  std::vector<int> sz(t.size(), 0);
  for (size_t i = 0; i < order.size(); ++i)
    for (VertexId c : t.children[order[i]])
      if (in_view[c]) order.push_back(c);
  for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
    VertexId u = order[i];
    sz[u] = 1;
    for (VertexId c : t.children[u])
      if (in_view[c]) sz[u] += sz[c];
  }
  int best = view.size() - sz[v];
  for (VertexId c : t.children[v])
    if (in_view[c]) best = std::max(best, sz[c]);
  return best;
}

VertexId centroid(const SubtreeView& view) {
  if (view.members.empty()) throw std::invalid_argument("centroid of empty view");
  const WeightedTree& t = *view.origin;
  std::vector<char> in_view(t.size(), 0);
  for (VertexId u : view.members) in_view[u] = 1;
  std::vector<int> order{view.root};
  std::vector<int> sz(t.size(), 0);
  for (size_t i = 0; i < order.size(); ++i)
    for (VertexId c : t.children[order[i]])
      if (in_view[c]) order.push_back(c);
  for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
    VertexId u = order[i];
    sz[u] = 1;
    for (VertexId c : t.children[u])
      if (in_view[c]) sz[u] += sz[c];
  }
  int k = view.size();
  VertexId best = kNoVertex;
  int best_max = k + 1;
  for (VertexId v : view.members) {  // ascending ids: first strict improvement wins ties
    int worst = k - sz[v];
    for (VertexId c : t.children[v])
      if (in_view[c]) worst = std::max(worst, sz[c]);
    if (worst < best_max) {
      best_max = worst;
      best = v;
    }
  }
  return best;
}

SubtreeView shrink_view(const SubtreeView& view, VertexId q, VertexId x) {
  if (q == x) throw std::invalid_argument("shrink_view: query equals target");
  const WeightedTree& t = *view.origin;
  std::vector<char> allowed(t.size(), 0);
  for (VertexId u : view.members) allowed[u] = 1;
  allowed[q] = 0;
  SubtreeView out;
  out.origin = &t;
  std::vector<char> in_comp(t.size(), 0);
  std::deque<VertexId> queue{x};
  in_comp[x] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    out.members.push_back(v);
    for (VertexId u : t.neighbors(v))
      if (allowed[u] && !in_comp[u]) {
        in_comp[u] = 1;
        queue.push_back(u);
      }
  }
  std::sort(out.members.begin(), out.members.end());
  VertexId r = x;
  while (t.parent[r] != kNoVertex && in_comp[t.parent[r]]) r = t.parent[r];
  out.root = r;
  return out;
}

}  // namespace treesearch
