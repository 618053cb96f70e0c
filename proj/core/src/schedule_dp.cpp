#include "treesearch/schedule_dp.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <unordered_map>

namespace treesearch {

RoundingParams RoundingParams::make(int c, long long a, int n, int L) {
  if (c < 1) throw std::invalid_argument("c must be >= 1");
  if (a < 1) throw std::invalid_argument("a must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  return RoundingParams{c, a, n, L};
}

int box_budget_for(int c, int n) {
  if (c < 1 || n < 1) throw std::invalid_argument("box_budget_for requires c, n >= 1");
  // Smallest L with 2^L >= n^(c^2), i.e. L >= c^2 * log2(n).
  BigInt target = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(c) * c);
  if (target <= 1) return 1;
  unsigned bits = boost::multiprecision::msb(target);
  BigInt pow2 = BigInt(1) << bits;
  int L = static_cast<int>(bits) + (pow2 == target ? 0 : 1);
  return std::max(1, L);
}

int c_for_eps(const Rat& eps) {
  if (eps <= 0 || eps >= 1) throw GuardError("eps must be in (0,1)");
  BigInt c = ceil_int(Rat(168) / eps);
  if (c > 1000000) throw GuardError("eps too small: c = " + c.str() + " is not executable");
  return static_cast<int>(c);
}

RoundedTree round_weights(const WeightedTree& t, const RoundingParams& p) {
  RoundedTree rt;
  rt.base = &t;
  int n = t.size();
  rt.rounded.resize(n);
  rt.slots.resize(n);
  rt.heavy.resize(n);
  Rat slot = p.slot();
  long long cn = static_cast<long long>(p.c) * p.n;
  for (VertexId v = 0; v < n; ++v) {
    // heavy iff w > c*omega = a/n
    rt.heavy[v] = t.weight[v] * p.n > p.a;
    BigInt in_slots = ceil_int(t.weight[v] * cn);
    long long k = in_slots.convert_to<long long>();
    if (rt.heavy[v]) {
      long long boxes = (k + p.a - 1) / p.a;
      k = boxes * p.a;
    }
    rt.slots[v] = k;
    rt.rounded[v] = Rat(BigInt(k)) * slot;
  }
  return rt;
}

WeightedTree rounded_as_tree(const RoundedTree& rt) {
  WeightedTree out = *rt.base;
  out.weight = rt.rounded;
  return out;
}

DpState merge_schedules(const DpState& orig, const DpState& add, const RoundingParams& p) {
  DpState s = orig;
  s.prov_merge = s.prov_prev = s.prov_child = -1;
  for (int box = 0; box < p.L; ++box) {
    if (s.loads[box] == kOverflowLoad || add.loads[box] == kOverflowLoad) {
      s.loads[box] = kOverflowLoad;
    } else {
      uint64_t sum = static_cast<uint64_t>(s.loads[box]) + add.loads[box];
      s.loads[box] = sum > static_cast<uint64_t>(p.a) ? kOverflowLoad
                                                      : static_cast<uint32_t>(sum);
    }
    if (add.loads[box] != kOverflowLoad)
      s.max_child[box] = std::max(s.max_child[box], add.loads[box]);
  }
  if (add.t_slot == kNoStart) s.must_contain = true;
  return s;
}

std::optional<DpState> insert_vertex(const DpState& merged, VertexId v, const RoundedTree& rt,
                                     const RoundingParams& p, long long t_slot) {
  const long long a = p.a;
  const long long horizon = p.horizon_slots();
  const bool placed = t_slot != kNoStart;
  long long start = 0, end = 0;
  if (placed) {
    if (t_slot < 0) return std::nullopt;
    if (rt.heavy[v] && t_slot % a != 0) return std::nullopt;
    start = t_slot;
    end = t_slot + rt.slots[v];
    if (end > horizon) return std::nullopt;
  } else {
    if (merged.must_contain) return std::nullopt;
  }

  DpState out;
  out.loads.assign(p.L, 0);
  out.max_child.assign(p.L, 0);
  out.t_slot = t_slot;
  out.must_contain = false;
  for (int box = 0; box < p.L; ++box) {
    long long b0 = static_cast<long long>(box) * a;
    long long b1 = b0 + a;
    long long ap = 0;
    if (placed) ap = std::max(0LL, std::min(end, b1) - std::max(start, b0));
    if (static_cast<uint64_t>(merged.max_child[box]) + ap > static_cast<uint64_t>(a))
      return std::nullopt;
    if (!placed || end >= b1) {
      // Query (if any) completes at or after the box end: carry children's load.
      if (merged.loads[box] == kOverflowLoad) return std::nullopt;
      uint64_t sum = static_cast<uint64_t>(merged.loads[box]) + ap;
      if (sum > static_cast<uint64_t>(a)) return std::nullopt;
      out.loads[box] = static_cast<uint32_t>(sum);
    } else {
      // Own query ends inside or before this box: the schedule keeps only the tail.
      out.loads[box] = static_cast<uint32_t>(ap);
    }
  }
  return out;
}

namespace {

std::string merged_key(const DpState& s) {
  std::string key;
  key.reserve(s.loads.size() * 8 + 1);
  key.append(reinterpret_cast<const char*>(s.loads.data()), s.loads.size() * sizeof(uint32_t));
  key.append(reinterpret_cast<const char*>(s.max_child.data()),
             s.max_child.size() * sizeof(uint32_t));
  key.push_back(s.must_contain ? 1 : 0);
  return key;
}

std::string final_key(const DpState& s) {
  std::string key;
  key.reserve(s.loads.size() * 4 + 8);
  key.append(reinterpret_cast<const char*>(s.loads.data()), s.loads.size() * sizeof(uint32_t));
  key.append(reinterpret_cast<const char*>(&s.t_slot), sizeof(s.t_slot));
  return key;
}

void apply_dominance(std::vector<DpState>& finals) {
  std::vector<char> dropped(finals.size(), 0);
  for (size_t i = 0; i < finals.size(); ++i) {
    if (dropped[i]) continue;
    for (size_t j = 0; j < finals.size(); ++j) {
      if (i == j || dropped[j]) continue;
      if (finals[i].t_slot != finals[j].t_slot) continue;
      bool leq = true, strict = false;
      for (size_t b = 0; b < finals[i].loads.size(); ++b) {
        if (finals[i].loads[b] > finals[j].loads[b]) {
          leq = false;
          break;
        }
        if (finals[i].loads[b] < finals[j].loads[b]) strict = true;
      }
      if (leq && strict) dropped[j] = 1;
    }
  }
  std::vector<DpState> kept;
  for (size_t i = 0; i < finals.size(); ++i)
    if (!dropped[i]) kept.push_back(std::move(finals[i]));
  finals = std::move(kept);
}

std::vector<VertexId> postorder(const WeightedTree& t) {
  std::vector<VertexId> order;
  order.reserve(t.size());
  std::vector<VertexId> stack{t.root};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (VertexId c : t.children[v]) stack.push_back(c);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

// Runs the merge phase for one vertex; returns the arena plus the indices of
// the last generation.
void run_merge_phase(const WeightedTree& t, VertexId v, const DpResult& dp,
                     const RoundingParams& p, uint64_t cap, std::vector<DpState>& arena,
                     std::vector<int>& last_gen) {
  DpState zero;
  zero.loads.assign(p.L, 0);
  zero.max_child.assign(p.L, 0);
  arena.clear();
  arena.push_back(zero);
  last_gen = {0};
  for (VertexId child : t.children[v]) {
    const auto& child_finals = dp.per_vertex[child].finals;
    std::vector<int> next_gen;
    std::unordered_map<std::string, int> dedup;
    for (int si : last_gen) {
      for (size_t fi = 0; fi < child_finals.size(); ++fi) {
        DpState merged = merge_schedules(arena[si], child_finals[fi], p);
        merged.prov_prev = si;
        merged.prov_child = static_cast<int>(fi);
        std::string key = merged_key(merged);
        auto it = dedup.find(key);
        if (it != dedup.end()) continue;
        if (next_gen.size() + 1 > cap)
          throw StateCapExceeded("state cap " + std::to_string(cap) +
                                 " exceeded while merging at vertex " + std::to_string(v));
        dedup.emplace(std::move(key), static_cast<int>(arena.size()));
        next_gen.push_back(static_cast<int>(arena.size()));
        arena.push_back(std::move(merged));
      }
    }
    last_gen = std::move(next_gen);
  }
}

void emit_finals(const RoundedTree& rt, VertexId v, const RoundingParams& p, uint64_t cap,
                 const std::vector<DpState>& arena, const std::vector<int>& last_gen,
                 std::vector<DpState>& finals) {
  finals.clear();
  std::unordered_map<std::string, int> dedup;
  auto try_insert = [&](int si, long long ts) {
    auto inserted = insert_vertex(arena[si], v, rt, p, ts);
    if (!inserted) return;
    inserted->prov_merge = si;
    std::string key = final_key(*inserted);
    if (dedup.count(key)) return;
    if (finals.size() + 1 > cap)
      throw StateCapExceeded("state cap " + std::to_string(cap) +
                             " exceeded while inserting at vertex " + std::to_string(v));
    dedup.emplace(std::move(key), static_cast<int>(finals.size()));
    finals.push_back(std::move(*inserted));
  };
  for (int si : last_gen) {
    if (rt.heavy[v]) {
      for (int box = 0; box < p.L; ++box) try_insert(si, static_cast<long long>(box) * p.a);
    } else {
      for (long long ts = 0; ts < p.horizon_slots(); ++ts) try_insert(si, ts);
    }
    if (!arena[si].must_contain) try_insert(si, kNoStart);
  }
}

// Child picks encoded in a merged chain, last child first while walking back.
std::vector<int> decode_children(const std::vector<DpState>& arena, int merged_idx,
                                 int child_count) {
  std::vector<int> picks(child_count, -1);
  int idx = merged_idx;
  for (int i = child_count - 1; i >= 0; --i) {
    picks[i] = arena[idx].prov_child;
    idx = arena[idx].prov_prev;
  }
  return picks;
}

bool final_less(const DpState& a, const DpState& b) {
  if (a.t_slot != b.t_slot) return a.t_slot < b.t_slot;  // missing query (-1) first
  return a.loads < b.loads;
}

void assign_witness(const WeightedTree& t, const RoundedTree& rt, const RoundingParams& p,
                    const DpResult& dp, const DpOptions& opt, VertexId v, const DpState& chosen,
                    ChosenSchedule& out) {
  out.t_slot[v] = chosen.t_slot;
  out.loads[v] = chosen.loads;
  int child_count = static_cast<int>(t.children[v].size());
  std::vector<int> picks;
  if (opt.witness_mode == WitnessMode::Stored) {
    picks = decode_children(dp.per_vertex[v].merged, chosen.prov_merge, child_count);
  } else {
    // Recompute the merge arena locally, then find the first producer of the
    // chosen state; since the dedup key includes the start slot, only the
    // chosen slot needs to be retried.
    std::vector<DpState> arena;
    std::vector<int> last_gen;
    uint64_t cap = opt.state_cap ? opt.state_cap : state_count_bound(p);
    run_merge_phase(t, v, dp, p, cap, arena, last_gen);
    int producer = -1;
    for (int si : last_gen) {
      auto inserted = insert_vertex(arena[si], v, rt, p, chosen.t_slot);
      if (inserted && inserted->loads == chosen.loads) {
        producer = si;
        break;
      }
    }
    if (producer < 0) throw std::runtime_error("witness re-derivation failed at vertex " +
                                               std::to_string(v));
    picks = decode_children(arena, producer, child_count);
  }
  for (int i = 0; i < child_count; ++i) {
    VertexId child = t.children[v][i];
    assign_witness(t, rt, p, dp, opt, child, dp.per_vertex[child].finals[picks[i]], out);
  }
}

}  // namespace

DpResult build_strategy(const RoundedTree& rt, const RoundingParams& p, const DpOptions& opt) {
  const WeightedTree& t = *rt.base;
  uint64_t cap = opt.state_cap ? opt.state_cap : state_count_bound(p);
  DpResult result;
  result.per_vertex.resize(t.size());
  for (VertexId v : postorder(t)) {
    NodeStates& node = result.per_vertex[v];
    std::vector<int> last_gen;
    run_merge_phase(t, v, result, p, cap, node.merged, last_gen);
    emit_finals(rt, v, p, cap, node.merged, last_gen, node.finals);
    if (opt.dominance_prune) apply_dominance(node.finals);
    if (opt.witness_mode == WitnessMode::Rederive) {
      node.merged.clear();
      node.merged.shrink_to_fit();
      for (DpState& f : node.finals) f.prov_merge = -1;
    }
  }
  result.feasible = !result.per_vertex[t.root].finals.empty();
  return result;
}

std::optional<std::string> validate_witness(const ChosenSchedule& w, const RoundedTree& rt,
                                            const RoundingParams& p) {
  const WeightedTree& t = *rt.base;
  const long long a = p.a;
  const long long horizon = p.horizon_slots();
  for (VertexId v = 0; v < t.size(); ++v) {
    bool placed = w.queried(v);
    long long start = placed ? w.t_slot[v] : 0;
    long long end = placed ? start + rt.slots[v] : -1;
    if (placed) {
      if (start < 0 || end > horizon)
        return "job of vertex " + std::to_string(v) + " leaves the horizon";
      if (rt.heavy[v] && start % a != 0)
        return "heavy vertex " + std::to_string(v) + " not box-aligned";
    } else {
      for (VertexId c : t.children[v])
        if (!w.queried(c))
          return "edge (" + std::to_string(v) + "," + std::to_string(c) +
                 ") has no queried endpoint";
    }
    for (int box = 0; box < p.L; ++box) {
      long long b0 = static_cast<long long>(box) * a;
      long long b1 = b0 + a;
      long long ap = placed ? std::max(0LL, std::min(end, b1) - std::max(start, b0)) : 0;
      for (VertexId c : t.children[v]) {
        if (static_cast<long long>(w.loads[c][box]) + ap > a)
          return "child " + std::to_string(c) + " cannot coexist with the query to " +
                 std::to_string(v) + " in box " + std::to_string(box);
      }
      if (!placed || end >= b1) {
        long long sum = ap;
        for (VertexId c : t.children[v]) sum += w.loads[c][box];
        if (sum > a) return "box " + std::to_string(box) + " of vertex " + std::to_string(v) +
                            " overloaded";
        if (static_cast<long long>(w.loads[v][box]) != sum)
          return "load equation violated at vertex " + std::to_string(v) + ", box " +
                 std::to_string(box);
      } else if (end > b0) {
        if (static_cast<long long>(w.loads[v][box]) < ap)
          return "partial box below own contribution at vertex " + std::to_string(v);
      } else {
        if (w.loads[v][box] != 0)
          return "nonzero load after completion at vertex " + std::to_string(v);
      }
    }
  }
  return std::nullopt;
}

SweepResult omega_sweep(const WeightedTree& t, int c, int L, const DpOptions& opt) {
  int n = t.size();
  long long limit = std::max(1LL, 2LL * c * n * ceil_log2(n));
  for (long long a = 1; a <= limit; ++a) {
    RoundingParams p = RoundingParams::make(c, a, n, L);
    RoundedTree rt = round_weights(t, p);
    DpResult dp = build_strategy(rt, p, opt);
    if (!dp.feasible) continue;
    const auto& root_finals = dp.per_vertex[t.root].finals;
    int best = 0;
    for (size_t i = 1; i < root_finals.size(); ++i)
      if (final_less(root_finals[i], root_finals[best])) best = static_cast<int>(i);
    SweepResult result;
    result.params = p;
    result.rounded = rt;  // keeps a pointer to the caller's tree
    result.witness.t_slot.assign(n, kNoStart);
    result.witness.loads.assign(n, {});
    assign_witness(t, rt, p, dp, opt, t.root, root_finals[best], result.witness);
    result.swept_values = a;
    if (auto err = validate_witness(result.witness, rt, p))
      throw std::runtime_error("internal: backtracked witness invalid: " + *err);
    return result;
  }
  throw GuardError("omega sweep exceeded " + std::to_string(limit) +
                   " values of a; the instance is not normalized or parameters are misused");
}

QuerySequenceAssignment extract_sequences(const ChosenSchedule& w, const RoundingParams& p,
                                          const RoundedTree& rt) {
  const WeightedTree& t = *rt.base;
  int n = t.size();
  Rat omega = p.omega();
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(n);
  struct Entry {
    Rat first, second;
    VertexId u;
  };
  for (VertexId v = 0; v < n; ++v) {
    std::vector<Entry> entries;
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId c : t.children[u]) stack.push_back(c);
      if (!w.queried(u)) continue;
      Rat tu = w.start_time(u, p);
      Rat end = tu + rt.rounded[u];
      Rat block_bound = floor_to_multiple(end, omega) + omega;
      bool blocked = false;
      for (VertexId z = (u == v) ? kNoVertex : t.parent[u]; z != kNoVertex;
           z = (z == v) ? kNoVertex : t.parent[z]) {
        if (w.queried(z) && w.start_time(z, p) < block_bound) {
          blocked = true;
          break;
        }
      }
      if (!blocked)
        entries.push_back({floor_to_multiple(tu, omega), ceil_to_multiple(end, omega), u});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
      if (x.first != y.first) return x.first < y.first;
      if (x.second != y.second) return x.second < y.second;
      return x.u < y.u;
    });
    for (const Entry& e : entries) s.seq[v].push_back(e.u);
  }
  s.validate(n);
  return s;
}

ScheduleAssignment witness_schedule(const ChosenSchedule& w, const RoundedTree& rt,
                                    const RoundingParams& p) {
  const WeightedTree& t = *rt.base;
  int n = t.size();
  ScheduleAssignment out;
  out.jobs.assign(n, {});
  for (VertexId v = 0; v < n; ++v) {
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId c : t.children[u]) stack.push_back(c);
      if (!w.queried(u)) continue;
      long long tu = w.t_slot[u];
      bool hidden = false;
      for (VertexId z = (u == v) ? kNoVertex : t.parent[u]; z != kNoVertex;
           z = (z == v) ? kNoVertex : t.parent[z]) {
        if (w.queried(z) && w.t_slot[z] + rt.slots[z] <= tu) {
          hidden = true;
          break;
        }
      }
      if (!hidden) out.jobs[v].push_back(Job{u, w.start_time(u, p)});
    }
    std::sort(out.jobs[v].begin(), out.jobs[v].end(), [](const Job& x, const Job& y) {
      if (x.start != y.start) return x.start < y.start;
      return x.vertex < y.vertex;
    });
  }
  return out;
}

QptasOutput qptas_sequences(const WeightedTree& t, int c, int L, const DpOptions& opt) {
  SweepResult sweep = omega_sweep(t, c, L, opt);
  QptasOutput out;
  out.params = sweep.params;
  out.rounded = sweep.rounded;
  out.rounded.base = &t;
  out.witness = sweep.witness;
  out.sequences = extract_sequences(out.witness, out.params, out.rounded);
  return out;
}

uint64_t state_count_bound(const RoundingParams& p) {
  const uint64_t kMax = std::numeric_limits<uint64_t>::max();
  uint64_t bound = static_cast<uint64_t>(p.L) + 1;
  uint64_t factor = static_cast<uint64_t>(p.a) + 1;
  for (int i = 0; i < 2 * p.L; ++i) {
    if (bound > kMax / factor) return kMax;
    bound *= factor;
  }
  if (bound > kMax / 2) return kMax;
  return bound * 2;
}

}  // namespace treesearch
