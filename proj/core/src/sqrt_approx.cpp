#include "treesearch/sqrt_approx.hpp"

#include "treesearch/baseline.hpp"

#include <algorithm>

namespace treesearch {

InnerSolver centroid_inner() {
  return [](const WeightedTree&) { return InnerStrategy{centroid_policy()}; };
}

InnerSolver oracle_inner(int cap) {
  return [cap](const WeightedTree& t) {
    auto opt = std::make_shared<OptResult>(opt_oracle(t, cap));
    return InnerStrategy{[opt](const SubtreeView& view) {
      auto it = opt->policy.find(view.members);
      if (it == opt->policy.end())
        throw std::runtime_error("oracle policy missing a view entry");
      return it->second;
    }};
  };
}

namespace {

AdaptivePolicy sequence_policy(std::shared_ptr<QuerySequenceAssignment> seqs) {
  return [seqs](const SubtreeView& view) {
    for (VertexId u : seqs->seq[view.root])
      if (view.contains(u)) return u;
    throw IncompleteAssignmentError(view.root, view.members);
  };
}

}  // namespace

InnerSolver qptas_inner(int c, int max_l, DpOptions opt) {
  return [c, max_l, opt](const WeightedTree& t) {
    WeightedTree normalized = normalize(t);
    int L = std::min(box_budget_for(c, normalized.size()), max_l);
    QptasOutput qp = qptas_sequences(normalized, c, L, opt);
    PrefixOutput prefix = build_prefix_assignment(normalized, qp.rounded, qp.sequences);
    auto seqs = std::make_shared<QuerySequenceAssignment>(std::move(prefix.composed));
    return InnerStrategy{sequence_policy(std::move(seqs))};
  };
}

SeparatingTree separating_tree(const WeightedTree& t, const Rat& alpha) {
  if (alpha < 1) throw GuardError("separating tree requires alpha >= 1");
  std::vector<int> sizes = t.subtree_sizes();
  int n = t.size();
  std::vector<char> in_star(n, 0);
  in_star[t.root] = 1;
  for (VertexId v = 0; v < n; ++v)
    if (Rat(sizes[v]) > alpha) in_star[v] = 1;

  SeparatingTree sep;
  for (VertexId v = 0; v < n; ++v)
    if (in_star[v]) sep.members.push_back(v);
  // The member set is closed upward, so components are whole hanging subtrees.
  for (VertexId v = 0; v < n; ++v) {
    if (in_star[v] || !in_star[t.parent[v]]) continue;
    SeparatingTree::Component comp;
    comp.attach = t.parent[v];
    comp.root = v;
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      comp.vertices.push_back(u);
      for (VertexId c : t.children[u]) stack.push_back(c);
    }
    std::sort(comp.vertices.begin(), comp.vertices.end());
    sep.components.push_back(std::move(comp));
  }
  return sep;
}

int CompositeStrategy::depth() const {
  if (base_case) return 1;
  int deepest = 0;
  for (const Child& c : children) deepest = std::max(deepest, c.strategy->depth());
  return 1 + deepest;
}

std::unique_ptr<CompositeStrategy> rec_solve(const WeightedTree& t, const InnerSolver& inner) {
  auto cs = std::make_unique<CompositeStrategy>();
  int n = t.size();
  cs->level_n = n;
  int k = ceil_sqrt_log2(n);
  cs->threshold = 1LL << k;
  if (n <= cs->threshold) {
    cs->base_case = true;
    cs->base_tree = t;
    cs->base = inner(t);
    return cs;
  }
  Rat alpha = Rat(n) / Rat(BigInt(cs->threshold));
  SeparatingTree sep = separating_tree(t, alpha);
  cs->vstar = sep.members;

  int sn = static_cast<int>(sep.members.size());
  cs->star_of_t.assign(n, kNoVertex);
  cs->t_of_star = sep.members;
  for (int i = 0; i < sn; ++i) cs->star_of_t[sep.members[i]] = i;
  std::vector<VertexId> sparent(sn, kNoVertex);
  std::vector<Rat> sweight(sn);
  for (int i = 0; i < sn; ++i) {
    VertexId v = sep.members[i];
    sweight[i] = t.weight[v];
    if (v != t.root) sparent[i] = cs->star_of_t[t.parent[v]];  // members are closed upward
  }
  cs->star_tree = WeightedTree::build(sn, cs->star_of_t[t.root], sparent, sweight);
  cs->star_contraction = contract_chains(cs->star_tree);
  cs->chain_tables.resize(cs->star_contraction.tree.size());
  cs->star_of_contr.assign(cs->star_contraction.tree.size(), kNoVertex);
  for (VertexId s = 0; s < sn; ++s)
    if (cs->star_contraction.chain_of[cs->star_contraction.image[s]].empty())
      cs->star_of_contr[cs->star_contraction.image[s]] = s;
  cs->top = inner(cs->star_contraction.tree);

  for (const auto& comp : sep.components) {
    CompositeStrategy::Child child;
    child.attach = comp.attach;
    child.root = comp.root;
    int cn = static_cast<int>(comp.vertices.size());
    child.t_of_local = comp.vertices;
    child.local_of_t.assign(n, kNoVertex);
    for (int i = 0; i < cn; ++i) child.local_of_t[comp.vertices[i]] = i;
    std::vector<VertexId> cparent(cn, kNoVertex);
    std::vector<Rat> cweight(cn);
    for (int i = 0; i < cn; ++i) {
      VertexId v = comp.vertices[i];
      cweight[i] = t.weight[v];
      if (v != comp.root) cparent[i] = child.local_of_t[t.parent[v]];
    }
    child.tree = WeightedTree::build(cn, child.local_of_t[comp.root], cparent, cweight);
    child.strategy = rec_solve(child.tree, inner);
    cs->children.push_back(std::move(child));
  }
  return cs;
}

namespace {

// Chain-local path instance for stage-2 searches inside one contracted chain.
const PathOptTable& chain_table(CompositeStrategy& cs, VertexId contracted_id) {
  auto& slot = cs.chain_tables[contracted_id];
  if (!slot) {
    const auto& chain = cs.star_contraction.chain_of[contracted_id];
    int k = static_cast<int>(chain.size());
    std::vector<VertexId> parent(k, kNoVertex);
    std::vector<Rat> weight(k);
    for (int i = 0; i < k; ++i) {
      weight[i] = cs.star_tree.weight[chain[i]];
      if (i > 0) parent[i] = i - 1;
    }
    WeightedTree path = WeightedTree::build(k, 0, parent, weight);
    auto table = std::make_unique<PathOptTable>(path_opt_table(path));
    // Re-key positions by star ids.
    std::vector<int> pos_of_star(cs.star_tree.size(), -1);
    for (int i = 0; i < k; ++i) pos_of_star[chain[table->order[i]]] = i;
    std::vector<VertexId> order_star(k);
    for (int i = 0; i < k; ++i) order_star[i] = chain[table->order[i]];
    table->order = std::move(order_star);
    table->pos_of = std::move(pos_of_star);
    slot = std::move(table);
  }
  return *slot;
}

VertexId min_weight_chain_vertex(const CompositeStrategy& cs, VertexId contracted_id) {
  const auto& chain = cs.star_contraction.chain_of[contracted_id];
  VertexId best = chain[0];
  for (VertexId v : chain)
    if (cs.star_tree.weight[v] < cs.star_tree.weight[best] ||
        (cs.star_tree.weight[v] == cs.star_tree.weight[best] && v < best))
      best = v;
  return best;
}

struct LevelExecutor {
  const WeightedTree& t;
  CompositeStrategy& cs;
  VertexId x;
  CompositeRun& run;
  SubtreeView view_t;      // honest remaining view at this level
  bool done = false;

  explicit LevelExecutor(const WeightedTree& tree, CompositeStrategy& strategy, VertexId target,
                         CompositeRun& out)
      : t(tree), cs(strategy), x(target), run(out), view_t(full_view(tree)) {}

  void pay(VertexId q, Rat& bucket) {
    run.trace.cost += t.weight[q];
    bucket += t.weight[q];
    if (q == x) {
      run.trace.steps.push_back({q, Reply::Found, run.trace.cost, kNoVertex, -1});
      done = true;
      return;
    }
    VertexId old_root = view_t.root;
    view_t = shrink_view(view_t, q, x);
    Reply reply = (view_t.root == old_root) ? Reply::Up : Reply::Down;
    run.trace.steps.push_back({q, reply, run.trace.cost, kNoVertex, -1});
  }
};

void run_level(const WeightedTree& t, CompositeStrategy& cs, VertexId x, CompositeRun& run);

}  // namespace

CompositeRun run_composite(const WeightedTree& t, CompositeStrategy& cs, VertexId x) {
  CompositeRun run;
  run.trace.target = x;
  run.trace.cost = 0;
  run_level(t, cs, x, run);
  return run;
}

namespace {

void run_level(const WeightedTree& t, CompositeStrategy& cs, VertexId x, CompositeRun& run) {
  CompositeRunLevel level;
  level.n = cs.level_n;
  level.base = cs.base_case;
  level.top_cost = 0;
  level.bridge_cost = 0;
  level.vstar_max_weight = 0;

  if (cs.base_case) {
    size_t level_index = run.levels.size();
    run.levels.push_back(level);
    LevelExecutor ex(t, cs, x, run);
    while (!ex.done && ex.view_t.size() > 1) {
      VertexId q = cs.base.policy(ex.view_t);
      ex.pay(q, run.levels[level_index].top_cost);
    }
    return;
  }

  for (VertexId v : cs.vstar) level.vstar_max_weight = std::max(level.vstar_max_weight, t.weight[v]);
  size_t level_index = run.levels.size();
  run.levels.push_back(level);
  auto& rec = run.levels[level_index];

  LevelExecutor ex(t, cs, x, run);

  // Nearest separating-tree vertex to the target (members are closed upward).
  VertexId xprime = x;
  while (cs.star_of_t[xprime] == kNoVertex) xprime = t.parent[xprime];
  VertexId xstar = cs.star_of_t[xprime];
  VertexId ximg = cs.star_contraction.image[xstar];

  // Stage 1: drive the contracted-tree search; chain queries map to the
  // chain's minimum-weight vertex.
  SubtreeView contr_view = full_view(cs.star_contraction.tree);
  SubtreeView star_view = full_view(cs.star_tree);
  std::vector<char> star_queried(cs.star_tree.size(), 0);
  VertexId located_img = kNoVertex;
  while (contr_view.size() > 1) {
    VertexId qbar = cs.top.policy(contr_view);
    VertexId qstar = cs.star_of_contr[qbar];
    if (qstar == kNoVertex) qstar = min_weight_chain_vertex(cs, qbar);
    if (!star_queried[qstar]) {
      star_queried[qstar] = 1;
      ex.pay(cs.t_of_star[qstar], rec.top_cost);
      if (ex.done) return;
      if (qstar != xstar && star_view.contains(qstar))
        star_view = shrink_view(star_view, qstar, xstar);
    }
    if (qbar == ximg) {
      located_img = qbar;
      break;
    }
    contr_view = shrink_view(contr_view, qbar, ximg);
  }
  if (located_img == kNoVertex) located_img = contr_view.members[0];

  // Stage 2: the image is a collapsed chain; finish with the optimal path
  // strategy on the remaining subpath. Skipped when stage 1 already queried
  // the sought vertex (its reply pinned the location exactly).
  if (!star_queried[xstar] && !cs.star_contraction.chain_of[located_img].empty()) {
    const PathOptTable& table = chain_table(cs, located_img);
    std::vector<VertexId> remaining;
    for (VertexId s : cs.star_contraction.chain_of[located_img])
      if (star_view.contains(s)) remaining.push_back(s);
    std::sort(remaining.begin(), remaining.end());
    while (remaining.size() > 1) {
      SubtreeView pv;
      pv.origin = &cs.star_tree;
      pv.members = remaining;
      pv.root = remaining[0];
      VertexId qstar = table.pick_view(pv);
      if (star_queried[qstar]) throw std::runtime_error("stage-2 repeated a query");
      star_queried[qstar] = 1;
      ex.pay(cs.t_of_star[qstar], rec.top_cost);
      if (ex.done) return;
      if (qstar == xstar) break;
      // Keep the side of the chain containing the target.
      int qpos = table.pos_of[qstar];
      int xpos = table.pos_of[xstar];
      std::vector<VertexId> kept;
      for (VertexId s : remaining) {
        int p = table.pos_of[s];
        if (p == qpos) continue;
        if ((p < qpos) == (xpos < qpos)) kept.push_back(s);
      }
      remaining = std::move(kept);
    }
  }

  // Bridge: query the located vertex unless the search already did.
  if (!star_queried[xstar]) {
    ex.pay(xprime, rec.bridge_cost);
    if (ex.done) return;
  }
  if (x == xprime)
    throw std::runtime_error("composite failed to stop at a located target");

  // Recurse into the component holding the target.
  for (auto& child : cs.children) {
    if (child.local_of_t[x] == kNoVertex || child.attach != xprime) continue;
    CompositeRun sub = run_composite(child.tree, *child.strategy, child.local_of_t[x]);
    Rat base_cost = run.trace.cost;
    for (const TraceStep& st : sub.trace.steps)
      run.trace.steps.push_back({child.t_of_local[st.query], st.reply, st.cumulative + base_cost,
                                 kNoVertex, -1});
    run.trace.cost += sub.trace.cost;
    run.levels.insert(run.levels.end(), sub.levels.begin(), sub.levels.end());
    return;
  }
  throw std::runtime_error("no component contains the target");
}

}  // namespace

std::vector<LevelStat> level_stats(const CompositeStrategy& cs) {
  std::vector<LevelStat> out;
  LevelStat stat;
  stat.n = cs.level_n;
  stat.base = cs.base_case;
  if (!cs.base_case) {
    stat.contracted_star_size = cs.star_contraction.tree.size();
    stat.size_limit = 4 * cs.threshold;  // n / alpha = 2^ceil(sqrt(log2 n)) exactly
  }
  out.push_back(stat);
  if (!cs.base_case)
    for (const auto& child : cs.children) {
      auto sub = level_stats(*child.strategy);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  return out;
}

Rat measured_inner_ratio(const CompositeStrategy& cs, int oracle_cap) {
  auto policy_ratio = [oracle_cap](const WeightedTree& tree, const AdaptivePolicy& policy) {
    OptResult opt = opt_oracle(tree, oracle_cap);
    Rat worst = 0;
    for (VertexId v = 0; v < tree.size(); ++v)
      worst = std::max(worst, run_adaptive(tree, policy, v).cost);
    if (opt.value == 0) return Rat(1);
    return worst / opt.value;
  };
  if (cs.base_case) return policy_ratio(cs.base_tree, cs.base.policy);
  Rat ratio = policy_ratio(cs.star_contraction.tree, cs.top.policy);
  for (const auto& child : cs.children)
    ratio = std::max(ratio, measured_inner_ratio(*child.strategy, oracle_cap));
  return ratio;
}

}  // namespace treesearch
