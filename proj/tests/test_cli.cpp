#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CommandResult {
  int exit_code;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  std::string cmd = std::string(TREESEARCH_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  int status = pclose(pipe);
  int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/treesearch_cli_test_") + name;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("gen is deterministic and solve reports known optima") {
  std::string tree = tmp_path("star.tree");
  auto gen1 = run_cli("gen --kind star --n 6 --weights unit --seed 5 -o " + tree);
  REQUIRE(gen1.exit_code == 0);
  std::string first = read_text(tree);
  auto gen2 = run_cli("gen --kind star --n 6 --weights unit --seed 5 -o " + tree);
  REQUIRE(gen2.exit_code == 0);
  CHECK(first == read_text(tree));

  auto solved = run_cli("solve " + tree + " --algo centroid");
  CHECK(solved.exit_code == 0);
  CHECK(solved.output.find("cost 1\n") != std::string::npos);

  std::string path8 = tmp_path("path8.tree");
  REQUIRE(run_cli("gen --kind path --n 8 --weights unit --seed 1 -o " + path8).exit_code == 0);
  auto oracle = run_cli("solve " + path8 + " --algo oracle");
  CHECK(oracle.exit_code == 0);
  CHECK(oracle.output.find("opt 3\n") != std::string::npos);
  CHECK(oracle.output.find("cost 3\n") != std::string::npos);
}

TEST_CASE("qptas guard refusals exit with code 2") {
  std::string tree = tmp_path("cap.tree");
  REQUIRE(run_cli("gen --kind random --n 30 --weights uniform --seed 2 -o " + tree).exit_code == 0);
  auto refused = run_cli("solve " + tree + " --algo qptas --eps 999/1000");
  CHECK(refused.exit_code == 2);
  CHECK(refused.output.find("refused") != std::string::npos);

  auto oracle_refused = run_cli("solve " + tree + " --algo oracle");
  CHECK(oracle_refused.exit_code == 2);
}

TEST_CASE("solve/verify round trip reproduces the reported cost") {
  std::string tree = tmp_path("qp.tree");
  std::string strat = tmp_path("qp.strategy");
  REQUIRE(run_cli("gen --kind random --n 6 --weights uniform --seed 11 -o " + tree).exit_code == 0);
  auto solved = run_cli("solve " + tree + " --algo qptas --c 2 -o " + strat);
  REQUIRE(solved.exit_code == 0);
  auto cost_pos = solved.output.rfind("cost ");
  REQUIRE(cost_pos != std::string::npos);
  std::string cost_line = solved.output.substr(cost_pos);

  auto verified = run_cli("verify " + tree + " " + strat + " --opt");
  REQUIRE(verified.exit_code == 0);
  CHECK(verified.output.find(cost_line.substr(0, cost_line.find('\n') + 1)) != std::string::npos);
  CHECK(verified.output.find("ratio ") != std::string::npos);

  // reruns are byte-identical
  std::string strat2 = tmp_path("qp2.strategy");
  REQUIRE(run_cli("solve " + tree + " --algo qptas --c 2 -o " + strat2).exit_code == 0);
  CHECK(read_text(strat) == read_text(strat2));
}

TEST_CASE("verify flags incomplete strategies") {
  std::string tree = tmp_path("inc.tree");
  write_text(tree, "tree 3 0\nnode 0 - 1\nnode 1 0 1\nnode 2 1 1\n");
  std::string strat = tmp_path("inc.strategy");
  write_text(strat, "strategy 3\nseq 0\nseq 1\nseq 2\n");
  auto verified = run_cli("verify " + tree + " " + strat);
  CHECK(verified.exit_code == 1);
  CHECK(verified.output.find("incomplete assignment") != std::string::npos);
  CHECK(verified.output.find("vertex 0") != std::string::npos);
}

TEST_CASE("verify --opt above the cap prints a notice") {
  std::string tree = tmp_path("big.tree");
  REQUIRE(run_cli("gen --kind path --n 20 --weights unit --seed 1 -o " + tree).exit_code == 0);
  std::string strat = tmp_path("big.strategy");
  // a complete assignment: every vertex lists everything in id order
  std::ostringstream s;
  s << "strategy 20\n";
  for (int v = 0; v < 20; ++v) {
    s << "seq " << v;
    for (int u = 0; u < 20; ++u)
      if (u != v) s << " " << u;
    s << " " << v << "\n";
  }
  write_text(strat, s.str());
  auto verified = run_cli("verify " + tree + " " + strat + " --opt");
  CHECK(verified.exit_code == 0);
  CHECK(verified.output.find("opt skipped") != std::string::npos);
}

TEST_CASE("simulate prints the trace format") {
  std::string tree = tmp_path("sim.tree");
  write_text(tree, "tree 2 0\nnode 0 - 1\nnode 1 0 1\n");
  std::string strat = tmp_path("sim.strategy");
  write_text(strat, "strategy 2\nseq 0 1\nseq 1 1\n");
  auto sim = run_cli("simulate " + tree + " " + strat + " --target 0");
  CHECK(sim.exit_code == 0);
  CHECK(sim.output == "query 1 reply=up cum=1\ntarget 0 cost 1 lightdown 0\n");
  auto sim_found = run_cli("simulate " + tree + " " + strat + " --target 1");
  CHECK(sim_found.output.find("reply=found") != std::string::npos);
}

TEST_CASE("bench runs a suite, isolates row failures, reruns identically") {
  std::string suite = tmp_path("suite.txt");
  write_text(suite,
             "# kind n weights seed algo params\n"
             "star 5 unit 1 centroid\n"
             "random 30 uniform 2 oracle\n"  // over the cap: error cell
             "path 8 unit 3 oracle opt\n");
  std::string csv_path = tmp_path("bench.csv");
  auto bench = run_cli("bench " + suite + " -o " + csv_path);
  REQUIRE(bench.exit_code == 0);
  std::string csv = read_text(csv_path);
  CHECK(csv.find("instance,n,algo,params") != std::string::npos);
  CHECK(csv.find("star-5-unit-1,5,centroid,,1,1,") != std::string::npos);
  CHECK(csv.find("error: ") != std::string::npos);
  CHECK(csv.find("path-8-unit-3,8,oracle,opt,3,3,3,3") != std::string::npos);

  auto again = run_cli("bench " + suite + " -o " + csv_path + " --sequential");
  REQUIRE(again.exit_code == 0);
  std::string csv2 = read_text(csv_path);
  // cost columns identical across reruns (timings may differ)
  auto strip_ms = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
      auto last = line.rfind(',');
      auto prev = line.rfind(',', last == std::string::npos ? 0 : last - 1);
      out += line.substr(0, prev) + "\n";
    }
    return out;
  };
  CHECK(strip_ms(csv) == strip_ms(csv2));
}

TEST_CASE("convert-edge, contract-chains, emit-labels") {
  std::string etree = tmp_path("e.tree");
  write_text(etree, "etree 2 0\nedge 1 0 2\n");
  auto conv = run_cli("convert-edge " + etree);
  CHECK(conv.exit_code == 0);
  CHECK(conv.output == "tree 3 0\nnode 0 - 3\nnode 1 2 3\nnode 2 0 2\n");

  std::string path5 = tmp_path("p5.tree");
  REQUIRE(run_cli("gen --kind path --n 5 --weights unit --seed 1 -o " + path5).exit_code == 0);
  auto chains = run_cli("contract-chains " + path5);
  CHECK(chains.exit_code == 0);
  CHECK(chains.output.find("tree 3 0\n") != std::string::npos);
  CHECK(chains.output.find("# chain 1: 1 2 3\n") != std::string::npos);

  std::string path3 = tmp_path("p3.tree");
  REQUIRE(run_cli("gen --kind path --n 3 --weights unit --seed 1 -o " + path3).exit_code == 0);
  auto labels = run_cli("emit-labels " + path3 + " --c 1 --omega 2");
  CHECK(labels.exit_code == 0);
  CHECK(labels.output == "label 0 2\nlabel 1 1\nlabel 2 2\n");
}
