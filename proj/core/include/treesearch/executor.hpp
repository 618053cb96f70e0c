#pragma once

#include "treesearch/strategy.hpp"

#include <functional>
#include <optional>

namespace treesearch {

/// Adaptive query rule: given the current view, name the next vertex to query.
using AdaptivePolicy = std::function<VertexId(const SubtreeView&)>;

/// Runs an adaptive search for target x: queries policy(view) until the view
/// is a singleton or the target is hit, paying each queried vertex's weight
/// (the terminating query included).
QueryTrace run_adaptive(const WeightedTree& t, const AdaptivePolicy& policy, VertexId x);

/// Simulates the sequence-driven search for target x: scan the current view
/// root's sequence, query the first vertex inside the view, rescan from the
/// new root's sequence after every down reply. Throws
/// IncompleteAssignmentError when a sequence runs out with the view > 1.
QueryTrace execute_strategy(const WeightedTree& t, const QuerySequenceAssignment& s, VertexId x);

struct CostReport {
  Rat worst;
  std::vector<Rat> per_target;
  std::vector<QueryTrace> traces;
};

/// Executes every target and keeps the traces.
CostReport evaluate_assignment(const WeightedTree& t, const QuerySequenceAssignment& s);

/// max over targets of the trace cost.
Rat worst_case_cost(const WeightedTree& t, const QuerySequenceAssignment& s);

/// max over targets of (trace cost - (2c+1) * omega * light_down_count).
Rat modified_cost(const WeightedTree& t, const QuerySequenceAssignment& s, const Rat& omega,
                  int c);

struct StabilityCounterexample {
  int trial;
  VertexId target;
  std::vector<VertexId> original_queries;
  std::vector<VertexId> perturbed_queries;
  std::string note;
};

struct StabilityResult {
  bool ok = true;
  std::optional<StabilityCounterexample> counterexample;
};

/// Randomized falsifier for the root-jump subsequence property: replays the
/// sequence-driven search, but at randomly chosen down replies moves the
/// scanning vertex to a random vertex further along the path to the target,
/// then checks the perturbed query list is a subsequence of the original.
/// Deterministic for a fixed seed; trials == 0 passes vacuously.
StabilityResult check_stability(const WeightedTree& t, const QuerySequenceAssignment& s,
                                int trials, unsigned long long seed);

/// True when `sub` is a (not necessarily contiguous) subsequence of `full`.
bool is_subsequence(const std::vector<VertexId>& sub, const std::vector<VertexId>& full);

}  // namespace treesearch
