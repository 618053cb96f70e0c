#include "treesearch/executor.hpp"

#include <algorithm>
#include <random>

namespace treesearch {

namespace {

// Path from `from` to `to` in t, inclusive of both endpoints.
std::vector<VertexId> tree_path(const WeightedTree& t, VertexId from, VertexId to) {
  std::vector<int> depth = t.depths();
  std::vector<VertexId> a, b;
  VertexId u = from, v = to;
  while (depth[u] > depth[v]) {
    a.push_back(u);
    u = t.parent[u];
  }
  while (depth[v] > depth[u]) {
    b.push_back(v);
    v = t.parent[v];
  }
  while (u != v) {
    a.push_back(u);
    b.push_back(v);
    u = t.parent[u];
    v = t.parent[v];
  }
  a.push_back(u);
  a.insert(a.end(), b.rbegin(), b.rend());
  return a;
}

uint64_t next_rand(uint64_t& state) {
  // splitmix64: stable across platforms, unlike distribution adapters.
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t rand_below(uint64_t& state, uint64_t bound) {
  return bound == 0 ? 0 : next_rand(state) % bound;
}

}  // namespace

QueryTrace run_adaptive(const WeightedTree& t, const AdaptivePolicy& policy, VertexId x) {
  QueryTrace trace;
  trace.target = x;
  trace.cost = 0;
  SubtreeView view = full_view(t);
  while (view.size() > 1) {
    VertexId q = policy(view);
    trace.cost += t.weight[q];
    if (q == x) {
      trace.steps.push_back({q, Reply::Found, trace.cost, kNoVertex, -1});
      return trace;
    }
    VertexId old_root = view.root;
    view = shrink_view(view, q, x);
    Reply reply = (view.root == old_root) ? Reply::Up : Reply::Down;
    trace.steps.push_back({q, reply, trace.cost, kNoVertex, -1});
  }
  return trace;
}

QueryTrace execute_strategy(const WeightedTree& t, const QuerySequenceAssignment& s, VertexId x) {
  QueryTrace trace;
  trace.target = x;
  trace.cost = 0;
  SubtreeView view = full_view(t);
  while (view.size() > 1) {
    VertexId v = view.root;
    VertexId q = kNoVertex;
    int pos = -1;
    for (size_t i = 0; i < s.seq[v].size(); ++i) {
      if (view.contains(s.seq[v][i])) {
        q = s.seq[v][i];
        pos = static_cast<int>(i);
        break;
      }
    }
    if (q == kNoVertex) throw IncompleteAssignmentError(v, view.members);
    trace.cost += t.weight[q];
    if (q == x) {
      trace.steps.push_back({q, Reply::Found, trace.cost, v, pos});
      return trace;
    }
    VertexId old_root = view.root;
    view = shrink_view(view, q, x);
    Reply reply = (view.root == old_root) ? Reply::Up : Reply::Down;
    trace.steps.push_back({q, reply, trace.cost, v, pos});
  }
  return trace;
}

CostReport evaluate_assignment(const WeightedTree& t, const QuerySequenceAssignment& s) {
  CostReport report;
  report.worst = 0;
  for (VertexId x = 0; x < t.size(); ++x) {
    report.traces.push_back(execute_strategy(t, s, x));
    report.per_target.push_back(report.traces.back().cost);
    report.worst = std::max(report.worst, report.traces.back().cost);
  }
  return report;
}

Rat worst_case_cost(const WeightedTree& t, const QuerySequenceAssignment& s) {
  Rat worst = 0;
  for (VertexId x = 0; x < t.size(); ++x)
    worst = std::max(worst, execute_strategy(t, s, x).cost);
  return worst;
}

Rat modified_cost(const WeightedTree& t, const QuerySequenceAssignment& s, const Rat& omega,
                  int c) {
  if (omega <= 0) throw std::invalid_argument("modified_cost requires omega > 0");
  if (c < 1) throw std::invalid_argument("modified_cost requires c >= 1");
  Rat discount_unit = Rat(2 * c + 1) * omega;
  Rat worst;
  bool first = true;
  for (VertexId x = 0; x < t.size(); ++x) {
    QueryTrace trace = execute_strategy(t, s, x);
    Rat value = trace.cost - discount_unit * trace.light_down_count(t, omega, c);
    if (first || value > worst) {
      worst = value;
      first = false;
    }
  }
  return worst;
}

bool is_subsequence(const std::vector<VertexId>& sub, const std::vector<VertexId>& full) {
  size_t i = 0;
  for (VertexId v : full) {
    if (i < sub.size() && sub[i] == v) ++i;
  }
  return i == sub.size();
}

StabilityResult check_stability(const WeightedTree& t, const QuerySequenceAssignment& s,
                                int trials, unsigned long long seed) {
  StabilityResult result;
  for (int trial = 0; trial < trials; ++trial) {
    uint64_t rng = seed * 0x100000001b3ull + static_cast<uint64_t>(trial) + 1;
    VertexId x = static_cast<VertexId>(rand_below(rng, t.size()));

    std::vector<VertexId> original;
    try {
      QueryTrace base = execute_strategy(t, s, x);
      for (const TraceStep& st : base.steps) original.push_back(st.query);
    } catch (const IncompleteAssignmentError& e) {
      result.ok = false;
      result.counterexample = StabilityCounterexample{trial, x, {}, {},
                                                      std::string("baseline run failed: ") + e.what()};
      return result;
    }

    // Perturbed replay: the scanning vertex may jump past the new root.
    std::vector<VertexId> perturbed;
    SubtreeView view = full_view(t);
    VertexId scan = view.root;
    bool failed = false;
    std::string note;
    while (view.size() > 1) {
      VertexId q = kNoVertex;
      for (VertexId u : s.seq[scan]) {
        if (view.contains(u)) {
          q = u;
          break;
        }
      }
      if (q == kNoVertex) {
        failed = true;
        note = "perturbed run exhausted the sequence of vertex " + std::to_string(scan);
        break;
      }
      perturbed.push_back(q);
      if (q == x) break;
      VertexId old_root = view.root;
      view = shrink_view(view, q, x);
      if (view.root != old_root) {
        // Down reply: optionally jump anywhere on the path new-root -> target.
        scan = view.root;
        if (view.size() > 1 && rand_below(rng, 2) == 1) {
          std::vector<VertexId> path = tree_path(t, view.root, x);
          scan = path[rand_below(rng, path.size())];
        }
      }
    }
    if (!failed && !is_subsequence(perturbed, original)) {
      failed = true;
      note = "perturbed queries are not a subsequence of the original";
    }
    if (failed) {
      result.ok = false;
      result.counterexample = StabilityCounterexample{trial, x, original, perturbed, note};
      return result;
    }
  }
  return result;
}

}  // namespace treesearch
