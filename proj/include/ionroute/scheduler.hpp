#pragma once

#include "ionroute/arch.hpp"
#include "ionroute/circuit.hpp"
#include "ionroute/state.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace ionroute {

struct SearchConfig {
  double extended_weight = 0.5; // W_E
  int lookahead = 20;
  bool permutation_enabled = true; // SHAPER; false gives SHAW
  int cycle_window = 8;
  /// Fraction of occupied segment nodes above which ions are pushed back.
  double pushback_threshold = 0.5;
  /// Recursion depth for congestion resolution; 0 means |segment nodes|.
  int max_depth = 0;
  int passes = 3;
  std::uint64_t seed = 0;
  /// Greedy moves without executing a block before escaping; 0 means |V|.
  int stall_limit = 0;
  /// State expansions allowed to the gathering search fallback.
  int search_budget = 200000;

  void validate() const;
};

/// perm[i] is the qubit whose ion qubit block.qubits[i] takes over.
using Permutation = std::vector<QubitId>;

struct ExecuteBlock {
  int block = 0;
  int trap = 0; // trap index
  Permutation perm;

  bool operator==(const ExecuteBlock&) const = default;
};

using Instruction = std::variant<Move, ExecuteBlock>;
using InstructionList = std::vector<Instruction>;

/// Cost of executing `block` under `perm`; lower is better.
using BlockCostOracle = std::function<double(const Block& block, std::span<const QubitId> perm)>;

/// Two-qubit gate count of the block, independent of the permutation.
[[nodiscard]] BlockCostOracle gate_count_oracle();

/// Per-(block id, permutation) costs, e.g. from an external re-synthesis
/// run; missing entries fall back to `fallback`.
[[nodiscard]] BlockCostOracle table_oracle(std::map<std::pair<int, Permutation>, double> table,
                                           BlockCostOracle fallback = gate_count_oracle());

/// Front term plus W_E-weighted extended term: per block, max pairwise
/// distance plus each qubit's distance to the nearest free executable slot.
[[nodiscard]] double heuristic_score(const BlockDag& dag, std::span<const int> front,
                                     std::span<const int> extended, const IonAssignment& phi,
                                     const DistanceMatrix& dist, const PositionGraph& g,
                                     double extended_weight);

struct PermutationContext {
  const BlockDag& dag;
  const FrontState& after; // front state once the block has executed
  const DistanceMatrix& dist;
  const PositionGraph& g;
  double extended_weight;
};

/// argmin over all |B|! permutations of (oracle cost, heuristic score after
/// relabeling, lexicographic order). Identity when `enabled` is false.
[[nodiscard]] Permutation select_permutation(const Block& block, const IonAssignment& phi,
                                             const BlockCostOracle& oracle,
                                             const PermutationContext& ctx, bool enabled);

struct ShuttleResult {
  bool resolved = false;
  std::vector<Move> moves;
  IonAssignment phi;
};

/// Recursively clear `p2` so the ion at `p1` can step onto it. Never parks an
/// ion on `path`. Ions in `pinned` may only shift within their own trap.
[[nodiscard]] ShuttleResult resolve_congestion(NodeId p1, NodeId p2, std::span<const NodeId> path,
                                               const IonAssignment& phi, const PositionGraph& g,
                                               int depth,
                                               std::span<const QubitId> pinned = {});

/// Shortest weighted path from `from` to any slot of trap `trap`, inclusive
/// of both ends; empty when unreachable.
[[nodiscard]] std::vector<NodeId> shortest_path_to_trap(const PositionGraph& g,
                                                        const TimingModel& timing, NodeId from,
                                                        int trap);

/// Return every ion parked on a segment to the nearest reachable free trap
/// slot, nearest first.
[[nodiscard]] ShuttleResult push_back(const IonAssignment& phi, const PositionGraph& g,
                                      const TimingModel& timing);

/// Gather `block` into one executable trap: choose the trap, order the
/// qubits, walk shortest paths, evict and resolve congestion on the way.
/// `resolved` is false on deadlock.
[[nodiscard]] ShuttleResult escape_local_minimum(const Block& block, const IonAssignment& phi,
                                                 const PositionGraph& g,
                                                 const DistanceMatrix& dist,
                                                 const TimingModel& timing,
                                                 const SearchConfig& cfg);

/// Best-first search over occupancy states (non-block ions interchangeable)
/// for a move sequence that co-locates `block`. Unresolved when the budget
/// runs out or no such state is reachable.
[[nodiscard]] ShuttleResult gather_search(const Block& block, const IonAssignment& phi,
                                          const PositionGraph& g, const DistanceMatrix& dist,
                                          const TimingModel& timing, int budget);

struct RouteStats {
  std::size_t greedy_moves = 0;
  std::size_t escapes = 0;
  std::size_t pushbacks = 0;
  std::size_t searches = 0;
};

struct RouteResult {
  InstructionList instructions;
  IonAssignment final_phi;
  RouteStats stats;
};

/// Heuristic shuttling search over the block dag from `phi0`. Throws
/// CapacityError for a block wider than every executable trap and
/// RoutingError when no schedule is found within the move cap.
[[nodiscard]] RouteResult route(const BlockDag& dag, const IonAssignment& phi0,
                                const PositionGraph& g, const DistanceMatrix& dist,
                                const TimingModel& timing, const SearchConfig& cfg,
                                const BlockCostOracle& oracle = gate_count_oracle());

/// Seeded random placement on trap slots refined by alternating forward and
/// reverse routing passes; returns the assignment entering the final forward
/// pass.
[[nodiscard]] IonAssignment initial_layout(const BlockDag& dag, const PositionGraph& g,
                                           const DistanceMatrix& dist,
                                           const TimingModel& timing, const SearchConfig& cfg,
                                           const BlockCostOracle& oracle = gate_count_oracle());

/// Same refinement starting from a caller-provided placement.
[[nodiscard]] IonAssignment refine_layout(const BlockDag& dag, const IonAssignment& start,
                                          const PositionGraph& g, const DistanceMatrix& dist,
                                          const TimingModel& timing, const SearchConfig& cfg,
                                          const BlockCostOracle& oracle = gate_count_oracle());

[[nodiscard]] IonAssignment random_placement(int num_qubits, const PositionGraph& g,
                                             std::uint64_t seed);

/// Replay `instrs` from `phi0` through the state rules. Throws ReplayError
/// with the failing index; returns the final assignment.
IonAssignment replay(const InstructionList& instrs, const IonAssignment& phi0,
                     const BlockDag& dag, const PositionGraph& g);

} // namespace ionroute
