#pragma once

#include "treesearch/tree.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace treesearch {

/// Per-vertex ordered query sequences. A vertex may appear in its own
/// sequence only as the last element.
struct QuerySequenceAssignment {
  std::vector<std::vector<VertexId>> seq;

  int size() const { return static_cast<int>(seq.size()); }
  static QuerySequenceAssignment empty(int n) {
    QuerySequenceAssignment s;
    s.seq.assign(n, {});
    return s;
  }
  /// Checks vertex ids are in range and self-queries are last. Throws.
  void validate(int n) const;
};

// File format:
//   strategy <n>
//   seq <id> <v1> <v2> ...
QuerySequenceAssignment parse_strategy(const std::string& text);
std::string serialize_strategy(const QuerySequenceAssignment& s);

struct Job {
  VertexId vertex;
  Rat start;
};

/// Per-vertex job lists (queries with start times).
struct ScheduleAssignment {
  std::vector<std::vector<Job>> jobs;

  int size() const { return static_cast<int>(jobs.size()); }
  /// max over jobs of start + w(vertex) within one vertex's schedule.
  Rat vertex_duration(const WeightedTree& t, VertexId v) const;
  /// max over vertices.
  Rat duration(const WeightedTree& t) const;
  /// The induced sequence assignment: jobs sorted by start time.
  QuerySequenceAssignment induced_sequences() const;
};

// File format:
//   schedule <n>
//   job <owner_id> <vertex_id> <start>
ScheduleAssignment parse_schedule(const std::string& text);
std::string serialize_schedule(const ScheduleAssignment& s);

struct ScheduleViolation {
  std::string kind;  // "overlap", "parent-separation", "edge-cover"
  VertexId owner = kNoVertex;
  VertexId a = kNoVertex;
  VertexId b = kNoVertex;
  std::string detail;
};

/// Checks the two schedule-consistency conditions plus the edge-cover rule
/// (an unqueried vertex must have every child queried). Returns the first
/// violation found, or nullopt when the schedule is consistent.
std::optional<ScheduleViolation> validate_schedule(const WeightedTree& t,
                                                   const ScheduleAssignment& s);

enum class Reply { Found, Up, Down };

const char* reply_str(Reply r);

struct TraceStep {
  VertexId query;
  Reply reply;
  Rat cumulative;
  VertexId seq_owner;  // vertex whose sequence supplied the query (kNoVertex for adaptive)
  int seq_pos;         // position within that sequence (-1 for adaptive)
};

/// Ordered record of one simulated search.
struct QueryTrace {
  VertexId target = kNoVertex;
  std::vector<TraceStep> steps;
  Rat cost;

  int query_count() const { return static_cast<int>(steps.size()); }
  /// Number of down replies on vertices with weight strictly below c * omega.
  int light_down_count(const WeightedTree& t, const Rat& omega, int c) const;
};

/// Trace text: one "query <v> reply=<found|up|down> cum=<p/q>" line per step,
/// terminated by "target <x> cost <p/q> lightdown <d>".
std::string format_trace(const QueryTrace& trace, const WeightedTree& t, const Rat& omega,
                         int c);

/// Raised when a sequence assignment runs out of queries before the view is
/// a singleton.
struct IncompleteAssignmentError : std::runtime_error {
  VertexId vertex;
  std::vector<VertexId> view;
  IncompleteAssignmentError(VertexId v, std::vector<VertexId> members);
};

}  // namespace treesearch
