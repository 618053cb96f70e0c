#include "doctest.h"

#include "test_util.hpp"
#include "treesearch/strategy.hpp"

using namespace treesearch;
using namespace treesearch::testutil;

TEST_CASE("strategy file round trip") {
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(3);
  s.seq[0] = {1, 0};
  s.seq[1] = {2, 1};
  s.seq[2] = {2};
  std::string text = serialize_strategy(s);
  CHECK(text == "strategy 3\nseq 0 1 0\nseq 1 2 1\nseq 2 2\n");
  QuerySequenceAssignment back = parse_strategy(text);
  CHECK(back.seq == s.seq);
}

TEST_CASE("self-query must come last") {
  CHECK_THROWS(parse_strategy("strategy 2\nseq 0 0 1\nseq 1 1\n"));
  CHECK_NOTHROW(parse_strategy("strategy 2\nseq 0 1 0\nseq 1 1\n"));
  CHECK_THROWS(parse_strategy("strategy 2\nseq 0 5\nseq 1 1\n"));
}

TEST_CASE("schedule file round trip") {
  ScheduleAssignment s;
  s.jobs.assign(2, {});
  s.jobs[0] = {{1, make_rat(0, 1)}, {0, make_rat(1, 2)}};
  s.jobs[1] = {{1, Rat(0)}};
  std::string text = serialize_schedule(s);
  ScheduleAssignment back = parse_schedule(text);
  CHECK(back.jobs[0].size() == 2);
  CHECK(back.jobs[0][1].start == make_rat(1, 2));
  CHECK(back.jobs[1][0].vertex == 1);
}

TEST_CASE("validate_schedule catches each violation kind") {
  WeightedTree t = make_path({"1", "1/2", "1/2"});  // 0-1-2 rooted at 0

  SUBCASE("consistent schedule passes") {
    ScheduleAssignment s;
    s.jobs.assign(3, {});
    // query 1 at time 0 everywhere relevant, then 0 after it at the root
    s.jobs[0] = {{1, Rat(0)}, {0, make_rat(1, 2)}};
    s.jobs[1] = {{1, Rat(0)}, {2, make_rat(3, 2)}};
    s.jobs[2] = {{2, make_rat(3, 2)}};
    CHECK_FALSE(validate_schedule(t, s).has_value());
  }
  SUBCASE("overlapping jobs in one schedule") {
    ScheduleAssignment s;
    s.jobs.assign(3, {});
    s.jobs[0] = {{1, Rat(0)}, {0, make_rat(1, 4)}};  // [0,1/2] and [1/4,5/4] overlap
    s.jobs[1] = {{1, Rat(0)}};
    s.jobs[2] = {{2, Rat(2)}};
    auto v = validate_schedule(t, s);
    REQUIRE(v.has_value());
    CHECK(v->kind == "overlap");
  }
  SUBCASE("child job before the parent's own query") {
    ScheduleAssignment s;
    s.jobs.assign(3, {});
    s.jobs[0] = {{0, Rat(0)}};
    s.jobs[1] = {{1, Rat(0)}};  // starts before 0's query ends, absent from 0's schedule
    s.jobs[2] = {{2, Rat(2)}};
    auto v = validate_schedule(t, s);
    REQUIRE(v.has_value());
    CHECK(v->kind == "parent-separation");
  }
  SUBCASE("edge with no queried endpoint") {
    ScheduleAssignment s;
    s.jobs.assign(3, {});  // nobody queried: edge (0,1) is uncovered
    auto v = validate_schedule(t, s);
    REQUIRE(v.has_value());
    CHECK(v->kind == "edge-cover");
  }
}

TEST_CASE("trace text format") {
  WeightedTree t = make_path({"1", "1/2"});
  QueryTrace trace;
  trace.target = 0;
  trace.cost = make_rat(1, 2);
  trace.steps.push_back({1, Reply::Up, make_rat(1, 2), 0, 0});
  std::string text = format_trace(trace, t, make_rat(1, 4), 1);
  CHECK(text == "query 1 reply=up cum=1/2\ntarget 0 cost 1/2 lightdown 0\n");
}
