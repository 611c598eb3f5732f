#pragma once

#include "ionroute/arch.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ionroute {

/// Injective map from logical qubits to position-graph nodes, with its
/// inverse. One ion per node is structural.
class IonAssignment {
public:
  IonAssignment() = default;
  /// Throws std::invalid_argument if `positions` is not injective or a node
  /// is out of range.
  IonAssignment(std::size_t num_nodes, std::vector<NodeId> positions);

  [[nodiscard]] int num_qubits() const { return static_cast<int>(pos_.size()); }
  [[nodiscard]] std::size_t num_nodes() const { return occ_.size(); }
  [[nodiscard]] NodeId position(QubitId q) const { return pos_[q]; }
  [[nodiscard]] QubitId occupant(NodeId n) const { return occ_[n]; }
  [[nodiscard]] bool occupied(NodeId n) const { return occ_[n] != kNoQubit; }
  [[nodiscard]] const std::vector<NodeId>& positions() const { return pos_; }
  [[nodiscard]] std::span<const QubitId> occupancy() const { return occ_; }

  /// Ion at `from` goes to empty `to`.
  void relocate(NodeId from, NodeId to);
  /// Exchange the ions at two occupied nodes.
  void exchange(NodeId a, NodeId b);
  /// After a block executes under permutation `perm`, qubit qubits[i] lives
  /// where perm[i] lived before.
  void relabel(std::span<const QubitId> qubits, std::span<const QubitId> perm);

  [[nodiscard]] std::uint64_t hash() const;
  [[nodiscard]] std::string dump(const PositionGraph& g) const;

  bool operator==(const IonAssignment&) const = default;

private:
  std::vector<NodeId> pos_;
  std::vector<QubitId> occ_;
};

enum class MoveKind : std::uint8_t { Split, Merge, Move, InnerSwap, Shift };

[[nodiscard]] std::string_view to_string(MoveKind kind);
[[nodiscard]] std::optional<MoveKind> parse_move_kind(std::string_view name);

struct Move {
  MoveKind kind = MoveKind::Move;
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  QubitId qubit = kNoQubit;
  QubitId other = kNoQubit; // inner_swap partner

  friend auto operator<=>(const Move& a, const Move& b) {
    return std::tie(a.kind, a.from, a.to) <=> std::tie(b.kind, b.from, b.to);
  }
  friend bool operator==(const Move& a, const Move& b) = default;
};

/// The move that takes the ion at `from` across edge (from, to), if the
/// current occupancy allows it.
[[nodiscard]] std::optional<Move> move_across(const IonAssignment& phi, const PositionGraph& g,
                                              NodeId from, NodeId to);

/// Every legal single shuttle from `phi`, sorted by (kind, from, to).
[[nodiscard]] std::vector<Move> legal_moves(const IonAssignment& phi, const PositionGraph& g);

/// Throws IllegalMoveError naming the violated constraint.
void check_move(const IonAssignment& phi, const Move& m, const PositionGraph& g);
void apply_move_in_place(IonAssignment& phi, const Move& m, const PositionGraph& g);
[[nodiscard]] IonAssignment apply_move(const IonAssignment& phi, const Move& m,
                                       const PositionGraph& g);

/// Trap index holding every qubit of `qubits` when that trap is executable.
[[nodiscard]] std::optional<int> executable_trap(const IonAssignment& phi,
                                                 std::span<const QubitId> qubits,
                                                 const PositionGraph& g);

[[nodiscard]] inline double nearest_free_trap_distance(NodeId p, const IonAssignment& phi,
                                                       const PositionGraph& g,
                                                       const DistanceMatrix& dist) {
  return nearest_free_trap_distance(p, phi.occupancy(), g, dist);
}

[[nodiscard]] double move_duration(MoveKind kind, const TimingModel& timing);

} // namespace ionroute
