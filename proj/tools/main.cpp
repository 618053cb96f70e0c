#include "CLI11.hpp"

#include "treesearch/baseline.hpp"
#include "treesearch/exact.hpp"
#include "treesearch/executor.hpp"
#include "treesearch/generator.hpp"
#include "treesearch/prefix_sequences.hpp"
#include "treesearch/schedule_dp.hpp"
#include "treesearch/sqrt_approx.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

using namespace treesearch;

namespace {

constexpr int kExitError = 1;
constexpr int kExitGuard = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

double ms_between(std::chrono::steady_clock::time_point a,
                  std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

struct TargetCostTable {
  Rat worst;
  std::vector<Rat> per_target;
};

TargetCostTable policy_costs(const WeightedTree& t, const AdaptivePolicy& policy) {
  TargetCostTable table;
  table.worst = 0;
  for (VertexId x = 0; x < t.size(); ++x) {
    table.per_target.push_back(run_adaptive(t, policy, x).cost);
    table.worst = std::max(table.worst, table.per_target.back());
  }
  return table;
}

void print_cost_table(std::ostream& out, const TargetCostTable& table) {
  for (VertexId x = 0; x < static_cast<int>(table.per_target.size()); ++x)
    out << "target " << x << " cost " << rat_str(table.per_target[x]) << "\n";
  out << "cost " << rat_str(table.worst) << "\n";
}

struct SolveResult {
  std::string algo;
  TargetCostTable costs;
  std::optional<QuerySequenceAssignment> sequences;
  std::string report_extra;  // algorithm-specific report lines
};

SolveResult solve_dispatch(const WeightedTree& tree, const std::string& algo, int c, int L,
                           const std::string& eps, int cap, uint64_t state_cap,
                           const std::string& inner, bool emit_labels) {
  SolveResult result;
  result.algo = algo;
  if (algo == "oracle") {
    OptResult opt = opt_oracle(tree, cap);
    result.costs = policy_costs(tree, opt.as_policy());
    result.report_extra = "opt " + rat_str(opt.value) + "\n";
  } else if (algo == "path") {
    OptResult opt = path_opt(tree);
    result.costs = policy_costs(tree, opt.as_policy());
    result.report_extra = "opt " + rat_str(opt.value) + "\n";
  } else if (algo == "centroid") {
    result.costs = policy_costs(tree, centroid_policy());
  } else if (algo == "qptas") {
    int use_c = c;
    int use_l = L;
    if (!eps.empty()) {
      use_c = c_for_eps(parse_rational(eps));
      use_l = box_budget_for(use_c, tree.size());
    }
    if (use_l <= 0) use_l = std::min(box_budget_for(use_c, tree.size()), 12);
    if (use_l > 64)
      throw GuardError("qptas refused: L = " + std::to_string(use_l) +
                       " boxes is beyond the desk-scale cap of 64 (use smaller --c/--eps or --L)");
    if (static_cast<long long>(use_c) * tree.size() > 4096)
      throw GuardError("qptas refused: c*n = " +
                       std::to_string(static_cast<long long>(use_c) * tree.size()) +
                       " slots is beyond the desk-scale cap of 4096");
    DpOptions opt;
    opt.state_cap = state_cap;
    QptasOutput out = qptas_sequences(tree, use_c, use_l, opt);
    PrefixOutput prefix = build_prefix_assignment(tree, out.rounded, out.sequences);
    CostReport report = evaluate_assignment(tree, prefix.composed);
    result.costs.worst = report.worst;
    result.costs.per_target = report.per_target;
    result.sequences = prefix.composed;
    Rat modcost = modified_cost(tree, out.sequences, out.params.omega(), out.params.c);
    std::ostringstream extra;
    extra << "omega " << rat_str(out.params.omega()) << " L " << out.params.L << " modcost "
          << rat_str(modcost) << " cost " << rat_str(report.worst) << "\n";
    if (emit_labels)
      for (VertexId v = 0; v < tree.size(); ++v)
        extra << "label " << v << " " << prefix.labels.labels[v] << "\n";
    result.report_extra = extra.str();
  } else if (algo == "sqrt") {
    InnerSolver solver;
    if (inner == "centroid") {
      solver = centroid_inner();
    } else if (inner == "oracle") {
      solver = oracle_inner(cap);
    } else if (inner == "qptas") {
      DpOptions opt;
      opt.state_cap = state_cap;
      solver = qptas_inner(c, L > 0 ? L : 12, opt);
    } else if (inner == "auto") {
      // exact where the oracle is cheap, box/slot sweep above that
      int the_cap = cap;
      DpOptions opt;
      opt.state_cap = state_cap;
      int qc = c;
      int ql = L > 0 ? L : 12;
      solver = [the_cap, opt, qc, ql](const WeightedTree& sub) {
        if (sub.size() <= the_cap) return oracle_inner(the_cap)(sub);
        return qptas_inner(qc, ql, opt)(sub);
      };
    } else {
      throw GuardError("unknown inner solver '" + inner + "'");
    }
    auto cs = rec_solve(tree, solver);
    std::ostringstream extra;
    result.costs.worst = 0;
    for (VertexId x = 0; x < tree.size(); ++x) {
      CompositeRun run = run_composite(tree, *cs, x);
      result.costs.per_target.push_back(run.trace.cost);
      result.costs.worst = std::max(result.costs.worst, run.trace.cost);
    }
    extra << "depth " << cs->depth() << "\n";
    int level_no = 0;
    for (const LevelStat& stat : level_stats(*cs)) {
      extra << "level " << level_no++ << " n " << stat.n;
      if (stat.base)
        extra << " base\n";
      else
        extra << " contracted " << stat.contracted_star_size << " limit " << stat.size_limit
              << "\n";
    }
    result.report_extra = extra.str();
  } else {
    throw GuardError("unknown algorithm '" + algo + "'");
  }
  return result;
}

struct BenchRow {
  std::string kind;
  int n = 0;
  std::string weights;
  unsigned long long seed = 0;
  std::string algo;
  std::vector<std::string> params;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"')
      out += "\"\"";
    else
      out += ch;
  }
  out += "\"";
  return out;
}

std::string run_bench_row(const BenchRow& row, int cap) {
  std::ostringstream line;
  std::string instance = row.kind + "-" + std::to_string(row.n) + "-" + row.weights + "-" +
                         std::to_string(row.seed);
  std::string params;
  for (const auto& p : row.params) {
    if (!params.empty()) params += " ";
    params += p;
  }
  auto start = std::chrono::steady_clock::now();
  try {
    WeightedTree raw = generate_tree(tree_kind_from(row.kind), row.n,
                                     weight_model_from(row.weights), row.seed);
    WeightedTree tree = normalize(raw);
    int c = 2, L = 0;
    std::string inner = "auto";
    bool want_opt = false;
    for (const auto& p : row.params) {
      auto eq = p.find('=');
      std::string key = p.substr(0, eq);
      std::string value = eq == std::string::npos ? "" : p.substr(eq + 1);
      if (key == "c")
        c = std::stoi(value);
      else if (key == "L")
        L = std::stoi(value);
      else if (key == "inner")
        inner = value;
      else if (key == "opt")
        want_opt = true;
      else
        throw GuardError("unknown bench parameter '" + p + "'");
    }
    SolveResult solved = solve_dispatch(tree, row.algo, c, L, "", cap, 0, inner, false);
    auto end = std::chrono::steady_clock::now();
    std::string opt_cell, opt_dec, ratio_cell, ratio_dec;
    if (want_opt && tree.size() <= cap) {
      Rat opt = opt_oracle(tree, cap).value;
      opt_cell = rat_str(opt);
      opt_dec = std::to_string(rat_double(opt));
      if (opt > 0) {
        Rat ratio = solved.costs.worst / opt;
        ratio_cell = rat_str(ratio);
        ratio_dec = std::to_string(rat_double(ratio));
      }
    }
    line << csv_escape(instance) << "," << row.n << "," << row.algo << "," << csv_escape(params)
         << "," << rat_str(solved.costs.worst) << "," << rat_double(solved.costs.worst) << ","
         << opt_cell << "," << opt_dec << "," << ratio_cell << "," << ratio_dec << ","
         << ms_between(start, end) << ",ok";
  } catch (const std::exception& e) {
    auto end = std::chrono::steady_clock::now();
    line << csv_escape(instance) << "," << row.n << "," << row.algo << "," << csv_escape(params)
         << ",,,,,,," << ms_between(start, end) << ","
         << csv_escape(std::string("error: ") + e.what());
  }
  return line.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted tree search strategies: generate, solve, verify, benchmark"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a tree instance");
  std::string gen_kind = "random", gen_weights = "uniform", gen_out;
  int gen_n = 10;
  unsigned long long gen_seed = 1;
  gen->add_option("--kind", gen_kind, "path|star|spider|caterpillar|random");
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--weights", gen_weights, "unit|uniform|heavytail");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "compute a strategy / cost report");
  std::string solve_tree, solve_algo = "oracle", solve_eps, solve_inner = "auto";
  std::string solve_out, solve_report, solve_schedule_out;
  int solve_c = 2, solve_l = 0, solve_cap = 14;
  uint64_t solve_state_cap = 0;
  bool solve_no_normalize = false, solve_emit_labels = false;
  solve->add_option("tree", solve_tree, "tree file")->required();
  solve->add_option("--algo", solve_algo, "oracle|path|centroid|qptas|sqrt");
  solve->add_option("--c", solve_c, "slack parameter c");
  solve->add_option("--L", solve_l, "box budget L (0: derive from c and n, desk-capped)");
  solve->add_option("--eps", solve_eps, "derive c and L from a target slack in (0,1)");
  solve->add_option("--cap", solve_cap, "exact-oracle size cap");
  solve->add_option("--state-cap", solve_state_cap, "per-vertex state cap (0: counting bound)");
  solve->add_option("--inner", solve_inner, "sqrt inner solver: auto|oracle|qptas|centroid");
  solve->add_flag("--no-normalize", solve_no_normalize, "skip normalization");
  solve->add_flag("--emit-labels", solve_emit_labels, "print label lines (qptas)");
  solve->add_option("-o,--out", solve_out, "strategy file to write (sequence algorithms)");
  solve->add_option("--report", solve_report, "write the report to a file as well");
  solve->add_option("--emit-schedule", solve_schedule_out, "write the witness schedule (qptas)");

  auto* verify = app.add_subcommand("verify", "re-execute a strategy file");
  std::string verify_tree, verify_strategy, verify_omega;
  int verify_c = 1, verify_cap = 14;
  bool verify_opt = false, verify_no_normalize = false;
  verify->add_option("tree", verify_tree, "tree file")->required();
  verify->add_option("strategy", verify_strategy, "strategy file")->required();
  verify->add_flag("--opt", verify_opt, "also compute the exact optimum (size-capped)");
  verify->add_option("--cap", verify_cap, "exact-oracle size cap");
  verify->add_option("--omega", verify_omega, "report light-down counts for this omega");
  verify->add_option("--c", verify_c, "c for light-down counts");
  verify->add_flag("--no-normalize", verify_no_normalize, "skip normalization");

  auto* sim = app.add_subcommand("simulate", "dump the trace for one target");
  std::string sim_tree, sim_strategy, sim_omega;
  int sim_target = 0, sim_c = 1;
  bool sim_no_normalize = false;
  sim->add_option("tree", sim_tree, "tree file")->required();
  sim->add_option("strategy", sim_strategy, "strategy file")->required();
  sim->add_option("--target", sim_target, "target vertex")->required();
  sim->add_option("--omega", sim_omega, "omega for the lightdown counter");
  sim->add_option("--c", sim_c, "c for the lightdown counter");
  sim->add_flag("--no-normalize", sim_no_normalize, "skip normalization");

  auto* bench = app.add_subcommand("bench", "run a suite file, emit CSV");
  std::string bench_suite, bench_out;
  int bench_cap = 14;
  bool bench_sequential = false;
  bench->add_option("suite", bench_suite, "suite file")->required();
  bench->add_option("-o,--out", bench_out, "CSV output (default stdout)");
  bench->add_option("--cap", bench_cap, "exact-oracle size cap");
  bench->add_flag("--sequential", bench_sequential, "disable row parallelism");

  auto* conv = app.add_subcommand("convert-edge", "reduce an edge-weighted instance");
  std::string conv_in, conv_out;
  conv->add_option("etree", conv_in, "edge-weighted tree file")->required();
  conv->add_option("-o,--out", conv_out, "output tree file (default stdout)");

  auto* chains = app.add_subcommand("contract-chains", "collapse long chains");
  std::string chains_in, chains_out;
  chains->add_option("tree", chains_in, "tree file")->required();
  chains->add_option("-o,--out", chains_out, "output tree file (default stdout)");

  auto* labels = app.add_subcommand("emit-labels", "print the centroid labeling");
  std::string labels_tree, labels_omega = "1/4";
  int labels_c = 1;
  bool labels_no_normalize = false;
  labels->add_option("tree", labels_tree, "tree file")->required();
  labels->add_option("--c", labels_c, "c of the heaviness threshold");
  labels->add_option("--omega", labels_omega, "omega of the heaviness threshold");
  labels->add_flag("--no-normalize", labels_no_normalize, "skip normalization");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      WeightedTree t = generate_tree(tree_kind_from(gen_kind), gen_n,
                                     weight_model_from(gen_weights), gen_seed);
      std::string text = serialize_tree(t);
      if (gen_out.empty())
        std::cout << text;
      else
        write_file(gen_out, text);
    } else if (*solve) {
      WeightedTree raw = parse_tree(read_file(solve_tree));
      WeightedTree tree = solve_no_normalize ? raw : normalize(raw);
      SolveResult result = solve_dispatch(tree, solve_algo, solve_c, solve_l, solve_eps,
                                          solve_cap, solve_state_cap, solve_inner,
                                          solve_emit_labels);
      std::ostringstream report;
      report << "algo " << result.algo << "\n" << result.report_extra;
      print_cost_table(report, result.costs);
      std::cout << report.str();
      if (!solve_report.empty()) write_file(solve_report, report.str());
      if (!solve_out.empty()) {
        if (!result.sequences)
          throw GuardError("--algo " + solve_algo + " is adaptive and emits no strategy file");
        write_file(solve_out, serialize_strategy(*result.sequences));
      }
      if (!solve_schedule_out.empty()) {
        if (solve_algo != "qptas")
          throw GuardError("--emit-schedule applies to --algo qptas only");
        DpOptions opt;
        opt.state_cap = solve_state_cap;
        int use_c = solve_c;
        int use_l = solve_l > 0 ? solve_l : std::min(box_budget_for(use_c, tree.size()), 12);
        QptasOutput out = qptas_sequences(tree, use_c, use_l, opt);
        write_file(solve_schedule_out,
                   serialize_schedule(witness_schedule(out.witness, out.rounded, out.params)));
      }
    } else if (*verify) {
      WeightedTree raw = parse_tree(read_file(verify_tree));
      WeightedTree tree = verify_no_normalize ? raw : normalize(raw);
      QuerySequenceAssignment s = parse_strategy(read_file(verify_strategy));
      if (s.size() != tree.size())
        throw std::runtime_error("strategy has " + std::to_string(s.size()) +
                                 " sequences for a tree of " + std::to_string(tree.size()));
      CostReport report = evaluate_assignment(tree, s);
      for (VertexId x = 0; x < tree.size(); ++x) {
        std::cout << "target " << x << " cost " << rat_str(report.per_target[x]);
        if (!verify_omega.empty()) {
          Rat omega = parse_rational(verify_omega);
          std::cout << " lightdown " << report.traces[x].light_down_count(tree, omega, verify_c);
        }
        std::cout << "\n";
      }
      std::cout << "cost " << rat_str(report.worst) << "\n";
      if (verify_opt) {
        if (tree.size() <= verify_cap) {
          Rat opt = opt_oracle(tree, verify_cap).value;
          std::cout << "opt " << rat_str(opt) << "\n";
          if (opt > 0) std::cout << "ratio " << rat_str(report.worst / opt) << "\n";
        } else {
          std::cout << "opt skipped: n=" << tree.size() << " above cap " << verify_cap << "\n";
        }
      }
    } else if (*sim) {
      WeightedTree raw = parse_tree(read_file(sim_tree));
      WeightedTree tree = sim_no_normalize ? raw : normalize(raw);
      QuerySequenceAssignment s = parse_strategy(read_file(sim_strategy));
      if (sim_target < 0 || sim_target >= tree.size())
        throw std::runtime_error("target out of range");
      QueryTrace trace = execute_strategy(tree, s, sim_target);
      Rat omega = sim_omega.empty() ? Rat(0) : parse_rational(sim_omega);
      std::cout << format_trace(trace, tree, omega, sim_c);
    } else if (*bench) {
      std::vector<BenchRow> rows;
      std::istringstream in(read_file(bench_suite));
      std::string raw_line;
      while (std::getline(in, raw_line)) {
        std::string line = raw_line.substr(0, raw_line.find('#'));
        std::istringstream ls(line);
        BenchRow row;
        if (!(ls >> row.kind >> row.n >> row.weights >> row.seed >> row.algo)) continue;
        std::string tok;
        while (ls >> tok) row.params.push_back(tok);
        rows.push_back(std::move(row));
      }
      std::vector<std::string> lines(rows.size());
      if (bench_sequential || rows.size() <= 1) {
        for (size_t i = 0; i < rows.size(); ++i) lines[i] = run_bench_row(rows[i], bench_cap);
      } else {
        std::vector<std::future<std::string>> futures;
        for (const BenchRow& row : rows)
          futures.push_back(std::async(std::launch::async, run_bench_row, row, bench_cap));
        for (size_t i = 0; i < futures.size(); ++i) lines[i] = futures[i].get();
      }
      std::ostringstream csv;
      csv << "instance,n,algo,params,cost,cost_dec,opt,opt_dec,ratio,ratio_dec,ms,status\n";
      for (const std::string& line : lines) csv << line << "\n";
      if (bench_out.empty())
        std::cout << csv.str();
      else
        write_file(bench_out, csv.str());
    } else if (*conv) {
      EdgeWeightedTree et = parse_edge_tree(read_file(conv_in));
      EdgeVariantReduction red = reduce_edge_variant(et);
      std::string text = serialize_tree(red.tree);
      if (conv_out.empty())
        std::cout << text;
      else
        write_file(conv_out, text);
    } else if (*chains) {
      WeightedTree t = parse_tree(read_file(chains_in));
      ChainContraction cc = contract_chains(t);
      std::ostringstream out;
      out << serialize_tree(cc.tree);
      for (VertexId v = 0; v < cc.tree.size(); ++v) {
        if (cc.chain_of[v].empty()) continue;
        out << "# chain " << v << ":";
        for (VertexId u : cc.chain_of[v]) out << " " << u;
        out << "\n";
      }
      if (chains_out.empty())
        std::cout << out.str();
      else
        write_file(chains_out, out.str());
    } else if (*labels) {
      WeightedTree raw = parse_tree(read_file(labels_tree));
      WeightedTree tree = labels_no_normalize ? raw : normalize(raw);
      Rat omega = parse_rational(labels_omega);
      if (omega <= 0) throw GuardError("omega must be positive");
      std::vector<bool> heavy(tree.size());
      for (VertexId v = 0; v < tree.size(); ++v)
        heavy[v] = tree.weight[v] > Rat(labels_c) * omega;
      HeavyPartition hp = extended_heavy_parts(tree, heavy);
      Labeling lab = extend_labels(hp, label_contracted(hp.contracted));
      for (VertexId v = 0; v < tree.size(); ++v)
        std::cout << "label " << v << " " << lab.labels[v] << "\n";
    }
  } catch (const GuardError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
