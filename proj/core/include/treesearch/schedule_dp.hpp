#pragma once

#include "treesearch/strategy.hpp"

#include <cstdint>
#include <optional>

namespace treesearch {

/// Discretization parameters: time is cut into L boxes of length omega,
/// each box into `a` slots of length 1/(c*n), so omega = a/(c*n).
struct RoundingParams {
  int c = 1;
  long long a = 1;
  int n = 1;
  int L = 1;

  Rat omega() const { return Rat(BigInt(a), BigInt(static_cast<long long>(c) * n)); }
  Rat slot() const { return Rat(BigInt(1), BigInt(static_cast<long long>(c) * n)); }
  /// Heaviness threshold c * omega = a/n.
  Rat heavy_threshold() const { return Rat(BigInt(a), BigInt(n)); }
  long long slots_per_box() const { return a; }
  long long horizon_slots() const { return static_cast<long long>(L) * a; }

  static RoundingParams make(int c, long long a, int n, int L);
};

/// L = ceil(c^2 * log2 n), the box budget matching the approximation wiring.
int box_budget_for(int c, int n);
/// c = ceil(168 / eps) for a target approximation slack eps in (0,1).
int c_for_eps(const Rat& eps);

/// Weights rounded up: heavy vertices (w > c*omega) to a multiple of omega,
/// light vertices to a multiple of the slot length.
struct RoundedTree {
  const WeightedTree* base = nullptr;
  std::vector<Rat> rounded;
  std::vector<long long> slots;  // rounded weight in slot units
  std::vector<bool> heavy;
};

RoundedTree round_weights(const WeightedTree& t, const RoundingParams& p);

/// The rounded instance materialized as a tree (for cross-checking optima).
WeightedTree rounded_as_tree(const RoundedTree& rt);

constexpr uint32_t kOverflowLoad = 0xFFFFFFFFu;
constexpr long long kNoStart = -1;  // missing own query

/// One schedule summary in the bottom-up search: per-box loads (slot counts),
/// the max load any single child contributes per box, the vertex's own start
/// slot, and whether some merged child was left unqueried.
struct DpState {
  std::vector<uint32_t> loads;
  std::vector<uint32_t> max_child;
  long long t_slot = kNoStart;
  bool must_contain = false;
  // provenance (indices into the owning node's arenas)
  int prov_merge = -1;
  int prov_prev = -1;
  int prov_child = -1;
};

struct StateCapExceeded : std::runtime_error {
  explicit StateCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class WitnessMode { Stored, Rederive };

struct DpOptions {
  /// Per-node cap on any state set; 0 means the counting bound
  /// (L+1) * (a+1)^(2L) * 2 (saturated). Exceeding throws StateCapExceeded.
  uint64_t state_cap = 0;
  /// Pointwise-dominance pruning among equal-start states. Off by default.
  bool dominance_prune = false;
  WitnessMode witness_mode = WitnessMode::Stored;
};

/// Accumulates a child schedule into a partial merge: per-box load sums with
/// overflow clamping, pointwise max of child loads, and the child-unqueried flag.
DpState merge_schedules(const DpState& orig, const DpState& add, const RoundingParams& p);

/// Attempts to place v's own query at start slot `t_slot` (kNoStart for none)
/// on top of merged child schedules. Returns nothing when a box overfills,
/// a child cannot coexist with the query, or the job leaves the horizon.
std::optional<DpState> insert_vertex(const DpState& merged, VertexId v, const RoundedTree& rt,
                                     const RoundingParams& p, long long t_slot);

struct NodeStates {
  std::vector<DpState> merged;  // retained for backtracking in Stored mode
  std::vector<DpState> finals;
};

struct DpResult {
  std::vector<NodeStates> per_vertex;
  bool feasible = false;
};

/// Bottom-up exhaustive state-set construction; feasible iff the root emits
/// at least one state.
DpResult build_strategy(const RoundedTree& rt, const RoundingParams& p, const DpOptions& opt);

/// Backtracked witness: per-vertex own start slot plus the load profile of
/// the chosen state.
struct ChosenSchedule {
  std::vector<long long> t_slot;
  std::vector<std::vector<uint32_t>> loads;

  bool queried(VertexId v) const { return t_slot[v] != kNoStart; }
  Rat start_time(VertexId v, const RoundingParams& p) const {
    return Rat(BigInt(t_slot[v])) * p.slot();
  }
};

/// Independent re-check of the witness: edge cover, per-box load equations,
/// child-fit bounds, alignment, and the horizon. Returns a description of the
/// first violation, or nullopt.
std::optional<std::string> validate_witness(const ChosenSchedule& w, const RoundedTree& rt,
                                            const RoundingParams& p);

struct SweepResult {
  RoundingParams params;
  RoundedTree rounded;
  ChosenSchedule witness;
  long long swept_values = 0;  // number of omega values tried
};

/// Smallest omega = a/(c*n), a = 1,2,..., whose state-set construction is
/// feasible at the root; backtracks and validates a witness. Throws GuardError
/// when the sweep bound 2 * c * n * ceil(log2 n) is exceeded.
SweepResult omega_sweep(const WeightedTree& t, int c, int L, const DpOptions& opt = {});

/// Turns a witness into per-vertex query sequences: a queried descendant u
/// enters v's sequence unless some vertex on the way is queried early enough
/// to hide it; entries are ordered by box-aligned (start, end) brackets.
QuerySequenceAssignment extract_sequences(const ChosenSchedule& w, const RoundingParams& p,
                                          const RoundedTree& rt);

/// The witness as explicit per-vertex job lists: each queried descendant's
/// job propagates upward until an intermediate vertex's own query completes
/// no later than the job starts.
ScheduleAssignment witness_schedule(const ChosenSchedule& w, const RoundedTree& rt,
                                    const RoundingParams& p);

struct QptasOutput {
  QuerySequenceAssignment sequences;
  RoundingParams params;
  RoundedTree rounded;
  ChosenSchedule witness;
};

/// End-to-end pipeline: omega sweep, witness extraction, sequence assignment.
QptasOutput qptas_sequences(const WeightedTree& t, int c, int L, const DpOptions& opt = {});

/// The counting bound (L+1) * (a+1)^(2L) * 2 saturated at uint64 max.
uint64_t state_count_bound(const RoundingParams& p);

}  // namespace treesearch
