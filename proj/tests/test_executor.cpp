#include "doctest.h"

#include "test_util.hpp"
#include "treesearch/executor.hpp"
#include "treesearch/generator.hpp"

using namespace treesearch;
using namespace treesearch::testutil;

namespace {

QuerySequenceAssignment trivial_assignment(const WeightedTree& t) {
  // children in id order, then the vertex itself
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(t.size());
  for (VertexId v = 0; v < t.size(); ++v) {
    s.seq[v] = t.children[v];
    s.seq[v].push_back(v);
  }
  return s;
}

}  // namespace

TEST_CASE("executor follows the sequences, pays the terminating query") {
  WeightedTree t = make_path({"1", "1/2"});  // root 0, child 1
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(2);
  s.seq[0] = {1};
  s.seq[1] = {1};

  SUBCASE("target is the root: one up reply") {
    QueryTrace trace = execute_strategy(t, s, 0);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].query == 1);
    CHECK(trace.steps[0].reply == Reply::Up);
    CHECK(trace.cost == make_rat(1, 2));
  }
  SUBCASE("target is the child: found") {
    QueryTrace trace = execute_strategy(t, s, 1);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].reply == Reply::Found);
    CHECK(trace.cost == make_rat(1, 2));
  }
  SUBCASE("singleton tree: empty trace") {
    WeightedTree one = make_path({"1"});
    QueryTrace trace = execute_strategy(one, QuerySequenceAssignment::empty(1), 0);
    CHECK(trace.steps.empty());
    CHECK(trace.cost == Rat(0));
  }
}

TEST_CASE("incomplete assignment is an error naming the stuck vertex") {
  WeightedTree t = make_unit_path(3);
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(3);  // nothing to scan
  try {
    execute_strategy(t, s, 2);
    FAIL("expected IncompleteAssignmentError");
  } catch (const IncompleteAssignmentError& e) {
    CHECK(e.vertex == 0);
    CHECK(e.view.size() == 3);
    CHECK(std::string(e.what()).find("vertex 0") != std::string::npos);
  }
}

TEST_CASE("worst_case_cost equals the max of per-target costs") {
  WeightedTree t = random_normalized(7, 11);
  QuerySequenceAssignment s = trivial_assignment(t);
  CostReport report = evaluate_assignment(t, s);
  Rat worst = 0;
  for (const Rat& c : report.per_target) worst = std::max(worst, c);
  CHECK(report.worst == worst);
  CHECK(worst_case_cost(t, s) == worst);
}

TEST_CASE("unit star: one query suffices with the center-only strategy") {
  WeightedTree t = make_unit_star(6);
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(6);
  s.seq[0] = {0};
  for (VertexId v = 1; v < 6; ++v) s.seq[v] = {v};
  CHECK(worst_case_cost(t, s) == Rat(1));
}

TEST_CASE("modified cost discounts light down replies") {
  SUBCASE("no light vertices: equals the worst case") {
    WeightedTree t = make_unit_path(4);
    QuerySequenceAssignment s = trivial_assignment(t);
    CHECK(modified_cost(t, s, make_rat(1, 4), 1) == worst_case_cost(t, s));
  }
  SUBCASE("found on a light vertex is not a down reply") {
    WeightedTree t = make_path({"1", "1/8"});
    QuerySequenceAssignment s = QuerySequenceAssignment::empty(2);
    s.seq[0] = {1};
    s.seq[1] = {1};
    CHECK(modified_cost(t, s, make_rat(1, 4), 1) == make_rat(1, 8));
  }
  SUBCASE("a light down reply is discounted by (2c+1) omega") {
    WeightedTree t = make_path({"1", "1/8", "1"});
    QuerySequenceAssignment s = QuerySequenceAssignment::empty(3);
    s.seq[0] = {1, 0};
    s.seq[1] = {1};
    s.seq[2] = {2};
    // target 2: the query to 1 answers down and isolates the target
    QueryTrace trace = execute_strategy(t, s, 2);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].reply == Reply::Down);
    CHECK(trace.cost == make_rat(1, 8));
    CHECK(trace.light_down_count(t, make_rat(1, 4), 1) == 1);
    // its contribution drops by (2c+1)*omega = 3/4; other targets dominate
    Rat discounted = trace.cost - Rat(3) * make_rat(1, 4);
    CHECK(discounted == make_rat(-5, 8));
    CHECK(modified_cost(t, s, make_rat(1, 4), 1) == make_rat(1, 8));
  }
}

TEST_CASE("modified cost never exceeds the worst case") {
  for (unsigned long long seed = 1; seed <= 10; ++seed) {
    WeightedTree t = random_normalized(6, seed);
    QuerySequenceAssignment s = trivial_assignment(t);
    CHECK(modified_cost(t, s, make_rat(1, 8), 2) <= worst_case_cost(t, s));
  }
}

TEST_CASE("executor totality on random instances") {
  for (unsigned long long seed = 1; seed <= 15; ++seed) {
    WeightedTree t = random_normalized(2 + static_cast<int>(seed % 9), seed * 3 + 1);
    QuerySequenceAssignment s = trivial_assignment(t);
    for (VertexId x = 0; x < t.size(); ++x) {
      QueryTrace trace = execute_strategy(t, s, x);
      if (!trace.steps.empty()) {
        // ends either by found or because the view became the target alone
        bool found = trace.steps.back().reply == Reply::Found;
        if (!found) {
          std::vector<VertexId> queried;
          for (const TraceStep& st : trace.steps) queried.push_back(st.query);
          SubtreeView view = remaining_subtree(t, queried, x);
          CHECK(view.members == std::vector<VertexId>{x});
        }
      }
    }
  }
}

TEST_CASE("trace replies re-derive consistently") {
  WeightedTree t = random_normalized(9, 42);
  QuerySequenceAssignment s = trivial_assignment(t);
  for (VertexId x = 0; x < t.size(); ++x) {
    QueryTrace trace = execute_strategy(t, s, x);
    std::vector<VertexId> queried;
    SubtreeView prev = remaining_subtree(t, queried, x);
    for (const TraceStep& st : trace.steps) {
      if (st.reply == Reply::Found) break;
      queried.push_back(st.query);
      SubtreeView next = remaining_subtree(t, queried, x);
      CHECK((st.reply == Reply::Down) == (next.root != prev.root));
      prev = next;
    }
  }
}

TEST_CASE("stability falsifier") {
  SUBCASE("zero trials pass vacuously") {
    WeightedTree t = make_unit_path(3);
    CHECK(check_stability(t, trivial_assignment(t), 0, 1).ok);
  }
  SUBCASE("the trivial assignment on a 3-path draws no counterexample") {
    WeightedTree t = make_unit_path(3);
    StabilityResult r = check_stability(t, trivial_assignment(t), 200, 7);
    CHECK(r.ok);
  }
  SUBCASE("a crafted unstable assignment is falsified") {
    // 4-path 0-1-2-3; jumping from the down reply at 1 straight to 3 makes the
    // perturbed run query 2 (from seq of 3) while the original queried 3 first.
    WeightedTree t = make_unit_path(4);
    QuerySequenceAssignment s = QuerySequenceAssignment::empty(4);
    s.seq[0] = {1, 0};
    s.seq[1] = {1};
    s.seq[2] = {3, 2};
    s.seq[3] = {2, 3};
    StabilityResult r = check_stability(t, s, 500, 3);
    CHECK_FALSE(r.ok);
    REQUIRE(r.counterexample.has_value());
    CHECK(r.counterexample->target == 3);
  }
  SUBCASE("determinism for a fixed seed") {
    WeightedTree t = random_normalized(8, 5);
    QuerySequenceAssignment s = trivial_assignment(t);
    StabilityResult a = check_stability(t, s, 100, 99);
    StabilityResult b = check_stability(t, s, 100, 99);
    CHECK(a.ok == b.ok);
  }
}

TEST_CASE("is_subsequence") {
  CHECK(is_subsequence({1, 3}, {1, 2, 3}));
  CHECK(is_subsequence({}, {1}));
  CHECK_FALSE(is_subsequence({3, 1}, {1, 2, 3}));
}
