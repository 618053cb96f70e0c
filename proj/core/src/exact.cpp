#include "treesearch/exact.hpp"

#include <algorithm>
#include <deque>

namespace treesearch {

namespace {

// Connected components of `members` minus {removed}, by neighbor walks in t.
std::vector<std::vector<VertexId>> components_without(const WeightedTree& t,
                                                      const std::vector<VertexId>& members,
                                                      VertexId removed) {
  std::vector<std::vector<VertexId>> out;
  std::vector<char> in_set(t.size(), 0);
  for (VertexId v : members) in_set[v] = 1;
  in_set[removed] = 0;
  std::vector<char> seen(t.size(), 0);
  for (VertexId v : members) {
    if (v == removed || seen[v]) continue;
    std::vector<VertexId> comp;
    std::deque<VertexId> queue{v};
    seen[v] = 1;
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (VertexId w : t.neighbors(u))
        if (in_set[w] && !seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

struct OracleContext {
  const WeightedTree& t;
  OptResult& result;

  Rat solve(const std::vector<VertexId>& view) {
    if (view.size() <= 1) return Rat(0);
    auto memo = result.view_value.find(view);
    if (memo != result.view_value.end()) return memo->second;
    Rat best;
    VertexId best_query = kNoVertex;
    for (VertexId v : view) {  // ascending ids: smallest-id tie-break
      Rat worst = 0;
      for (const auto& comp : components_without(t, view, v))
        worst = std::max(worst, solve(comp));
      Rat total = t.weight[v] + worst;
      if (best_query == kNoVertex || total < best) {
        best = total;
        best_query = v;
      }
    }
    result.view_value.emplace(view, best);
    result.policy.emplace(view, best_query);
    return best;
  }
};

}  // namespace

AdaptivePolicy OptResult::as_policy() const {
  return [this](const SubtreeView& view) {
    auto it = policy.find(view.members);
    if (it == policy.end())
      throw std::runtime_error("policy has no entry for the current view");
    return it->second;
  };
}

OptResult opt_oracle(const WeightedTree& t, int cap) {
  if (t.size() > cap)
    throw GuardError("opt_oracle refuses n=" + std::to_string(t.size()) + " (cap " +
                     std::to_string(cap) + ")");
  OptResult result;
  OracleContext ctx{t, result};
  result.value = ctx.solve(full_view(t).members);
  return result;
}

const Rat& PathOptTable::opt(int i, int j) const {
  static const Rat zero(0);
  if (i > j) return zero;
  return value[static_cast<size_t>(i) * length + j];
}

VertexId PathOptTable::pick(int i, int j) const {
  return choice[static_cast<size_t>(i) * length + j];
}

VertexId PathOptTable::pick_view(const SubtreeView& view) const {
  int lo = length, hi = -1;
  for (VertexId v : view.members) {
    int p = pos_of[v];
    if (p < 0) throw std::runtime_error("view vertex is not on the path");
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (hi - lo + 1 != view.size())
    throw std::runtime_error("view is not a contiguous subpath");
  return pick(lo, hi);
}

Rat PathOptTable::opt_view(const std::vector<VertexId>& members) const {
  int lo = length, hi = -1;
  for (VertexId v : members) {
    int p = pos_of[v];
    if (p < 0) throw std::runtime_error("vertex is not on the path");
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (hi - lo + 1 != static_cast<int>(members.size()))
    throw std::runtime_error("members are not a contiguous subpath");
  return opt(lo, hi);
}

PathOptTable path_opt_table(const WeightedTree& t) {
  if (!t.is_path()) throw GuardError("path_opt requires a path (all degrees <= 2)");
  int n = t.size();
  PathOptTable table;
  table.length = n;
  table.pos_of.assign(n, -1);
  // Linearize from the smaller-id endpoint.
  VertexId start = kNoVertex;
  for (VertexId v = 0; v < n; ++v)
    if (t.degree(v) <= 1) {
      start = v;
      break;
    }
  VertexId prev = kNoVertex, cur = start;
  while (cur != kNoVertex) {
    table.pos_of[cur] = static_cast<int>(table.order.size());
    table.order.push_back(cur);
    VertexId next = kNoVertex;
    for (VertexId u : t.neighbors(cur))
      if (u != prev) next = u;
    prev = cur;
    cur = next;
  }

  table.value.assign(static_cast<size_t>(n) * n, Rat(0));
  table.choice.assign(static_cast<size_t>(n) * n, kNoVertex);
  auto at = [&](int i, int j) -> size_t { return static_cast<size_t>(i) * n + j; };
  for (int i = 0; i < n; ++i) table.choice[at(i, i)] = table.order[i];
  for (int len = 2; len <= n; ++len) {
    for (int i = 0; i + len - 1 < n; ++i) {
      int j = i + len - 1;
      Rat best;
      VertexId best_query = kNoVertex;
      for (int q = i; q <= j; ++q) {
        Rat left = (q > i) ? table.value[at(i, q - 1)] : Rat(0);
        Rat right = (q < j) ? table.value[at(q + 1, j)] : Rat(0);
        Rat total = t.weight[table.order[q]] + std::max(left, right);
        VertexId qv = table.order[q];
        if (best_query == kNoVertex || total < best ||
            (total == best && qv < best_query)) {
          best = total;
          best_query = qv;
        }
      }
      table.value[at(i, j)] = best;
      table.choice[at(i, j)] = best_query;
    }
  }
  return table;
}

OptResult path_opt(const WeightedTree& t) {
  PathOptTable table = path_opt_table(t);
  OptResult result;
  int n = table.length;
  result.value = (n >= 1) ? table.opt(0, n - 1) : Rat(0);
  for (int i = 0; i < n; ++i) {
    std::vector<VertexId> members;
    for (int j = i; j < n; ++j) {
      members.push_back(table.order[j]);
      std::vector<VertexId> key = members;
      std::sort(key.begin(), key.end());
      result.view_value.emplace(key, table.opt(i, j));
      result.policy.emplace(std::move(key), table.pick(i, j));
    }
  }
  return result;
}

namespace {

struct EdgeOracleContext {
  const EdgeWeightedTree& t;
  std::map<std::vector<VertexId>, Rat> memo;

  Rat solve(const std::vector<VertexId>& view) {
    if (view.size() <= 1) return Rat(0);
    auto it = memo.find(view);
    if (it != memo.end()) return it->second;
    std::vector<char> in_set(t.size(), 0);
    for (VertexId v : view) in_set[v] = 1;
    Rat best;
    bool first = true;
    for (VertexId child : view) {  // edge (child, parent) inside the view
      VertexId par = t.parent[child];
      if (par == kNoVertex || !in_set[par]) continue;
      // Side containing `child` after cutting the edge.
      std::vector<VertexId> side_child, side_par;
      {
        std::vector<char> seen(t.size(), 0);
        std::deque<VertexId> queue{child};
        seen[child] = 1;
        while (!queue.empty()) {
          VertexId u = queue.front();
          queue.pop_front();
          side_child.push_back(u);
          for (VertexId w : neighbors(u))
            if (in_set[w] && !seen[w] && !(u == child && w == par) && !(u == par && w == child)) {
              seen[w] = 1;
              queue.push_back(w);
            }
        }
        for (VertexId v : view)
          if (!seen[v]) side_par.push_back(v);
      }
      std::sort(side_child.begin(), side_child.end());
      std::sort(side_par.begin(), side_par.end());
      Rat total = t.edge_weight[child] + std::max(solve(side_child), solve(side_par));
      if (first || total < best) {
        best = total;
        first = false;
      }
    }
    memo.emplace(view, best);
    return best;
  }

  std::vector<VertexId> neighbors(VertexId v) const {
    std::vector<VertexId> out;
    if (t.parent[v] != kNoVertex) out.push_back(t.parent[v]);
    out.insert(out.end(), t.children[v].begin(), t.children[v].end());
    return out;
  }
};

}  // namespace

Rat edge_opt_oracle(const EdgeWeightedTree& t, int cap) {
  if (t.size() - 1 > cap)
    throw GuardError("edge_opt_oracle refuses " + std::to_string(t.size() - 1) + " edges (cap " +
                     std::to_string(cap) + ")");
  EdgeOracleContext ctx{t, {}};
  std::vector<VertexId> all;
  for (VertexId v = 0; v < t.size(); ++v) all.push_back(v);
  return ctx.solve(all);
}

QueryTrace run_policy(const WeightedTree& t, const OptResult& opt, VertexId x) {
  return run_adaptive(t, opt.as_policy(), x);
}

}  // namespace treesearch
