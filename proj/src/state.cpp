#include "ionroute/state.hpp"

#include "ionroute/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace ionroute {

IonAssignment::IonAssignment(std::size_t num_nodes, std::vector<NodeId> positions)
    : pos_(std::move(positions)), occ_(num_nodes, kNoQubit) {
  for (std::size_t q = 0; q < pos_.size(); ++q) {
    const NodeId n = pos_[q];
    if (n < 0 || static_cast<std::size_t>(n) >= num_nodes) {
      throw std::invalid_argument("qubit " + std::to_string(q) + " mapped to invalid node");
    }
    if (occ_[n] != kNoQubit) {
      throw std::invalid_argument("node " + std::to_string(n) + " holds two ions");
    }
    occ_[n] = static_cast<QubitId>(q);
  }
}

void IonAssignment::relocate(NodeId from, NodeId to) {
  const QubitId q = occ_[from];
  occ_[from] = kNoQubit;
  occ_[to] = q;
  pos_[q] = to;
}

void IonAssignment::exchange(NodeId a, NodeId b) {
  const QubitId qa = occ_[a];
  const QubitId qb = occ_[b];
  occ_[a] = qb;
  occ_[b] = qa;
  pos_[qa] = b;
  pos_[qb] = a;
}

void IonAssignment::relabel(std::span<const QubitId> qubits, std::span<const QubitId> perm) {
  if (qubits.size() != perm.size()) {
    throw std::invalid_argument("permutation size mismatch");
  }
  std::vector<NodeId> before;
  before.reserve(perm.size());
  for (QubitId q : perm) {
    before.push_back(pos_[q]);
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    pos_[qubits[i]] = before[i];
    occ_[before[i]] = qubits[i];
  }
}

std::uint64_t IonAssignment::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (NodeId n : pos_) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(n));
    h *= 1099511628211ULL;
  }
  return h;
}

std::string IonAssignment::dump(const PositionGraph& g) const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t q = 0; q < pos_.size(); ++q) {
    j["q" + std::to_string(q)] = g.node_name(pos_[q]);
  }
  return j.dump();
}

std::string_view to_string(MoveKind kind) {
  switch (kind) {
  case MoveKind::Split:
    return "split";
  case MoveKind::Merge:
    return "merge";
  case MoveKind::Move:
    return "move";
  case MoveKind::InnerSwap:
    return "inner_swap";
  case MoveKind::Shift:
    return "shift";
  }
  return "?";
}

std::optional<MoveKind> parse_move_kind(std::string_view name) {
  for (auto k : {MoveKind::Split, MoveKind::Merge, MoveKind::Move, MoveKind::InnerSwap,
                 MoveKind::Shift}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  return std::nullopt;
}

double move_duration(MoveKind kind, const TimingModel& timing) {
  switch (kind) {
  case MoveKind::Split:
    return timing.split;
  case MoveKind::Merge:
    return timing.merge;
  case MoveKind::Move:
    return timing.move;
  case MoveKind::InnerSwap:
  case MoveKind::Shift:
    return timing.inner_swap;
  }
  return 0.0;
}

std::optional<Move> move_across(const IonAssignment& phi, const PositionGraph& g, NodeId from,
                                NodeId to) {
  const QubitId q = phi.occupant(from);
  if (q == kNoQubit) {
    return std::nullopt;
  }
  const auto e = g.find_edge(from, to);
  if (!e) {
    return std::nullopt;
  }
  const QubitId there = phi.occupant(to);
  switch (g.edge(*e).label) {
  case EdgeLabel::Swap:
    if (there == kNoQubit) {
      return Move{MoveKind::Shift, from, to, q, kNoQubit};
    }
    return Move{MoveKind::InnerSwap, from, to, q, there};
  case EdgeLabel::MergeSplit:
    if (there != kNoQubit) {
      return std::nullopt;
    }
    return Move{g.is_segment(from) ? MoveKind::Merge : MoveKind::Split, from, to, q, kNoQubit};
  case EdgeLabel::Move:
    if (there != kNoQubit) {
      return std::nullopt;
    }
    return Move{MoveKind::Move, from, to, q, kNoQubit};
  }
  return std::nullopt;
}

std::vector<Move> legal_moves(const IonAssignment& phi, const PositionGraph& g) {
  std::vector<Move> out;
  for (const auto& e : g.edges()) {
    const bool ou = phi.occupied(e.u);
    const bool ov = phi.occupied(e.v);
    if (ou && ov) {
      if (e.label == EdgeLabel::Swap) {
        out.push_back({MoveKind::InnerSwap, e.u, e.v, phi.occupant(e.u), phi.occupant(e.v)});
      }
    } else if (ou) {
      out.push_back(*move_across(phi, g, e.u, e.v));
    } else if (ov) {
      out.push_back(*move_across(phi, g, e.v, e.u));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int constraint_for(MoveKind kind) {
  switch (kind) {
  case MoveKind::Split:
    return 4;
  case MoveKind::Merge:
    return 5;
  case MoveKind::Move:
    return 6;
  case MoveKind::InnerSwap:
  case MoveKind::Shift:
    return 3;
  }
  return 7;
}

} // namespace

void check_move(const IonAssignment& phi, const Move& m, const PositionGraph& g) {
  const auto n = static_cast<NodeId>(g.num_nodes());
  if (m.from < 0 || m.from >= n || m.to < 0 || m.to >= n) {
    throw IllegalMoveError(constraint_for(m.kind), "node out of range");
  }
  const std::string where = g.node_name(m.from) + " -> " + g.node_name(m.to);
  const auto e = g.find_edge(m.from, m.to);
  if (!e) {
    throw IllegalMoveError(constraint_for(m.kind),
                           std::string(to_string(m.kind)) + " " + where +
                               " is not a position-graph transition");
  }
  const EdgeLabel label = g.edge(*e).label;
  const bool label_ok = [&] {
    switch (m.kind) {
    case MoveKind::Split:
      return label == EdgeLabel::MergeSplit && g.is_trap_slot(m.from);
    case MoveKind::Merge:
      return label == EdgeLabel::MergeSplit && g.is_segment(m.from);
    case MoveKind::Move:
      return label == EdgeLabel::Move;
    case MoveKind::InnerSwap:
    case MoveKind::Shift:
      return label == EdgeLabel::Swap;
    }
    return false;
  }();
  if (!label_ok) {
    throw IllegalMoveError(constraint_for(m.kind), std::string(to_string(m.kind)) + " " +
                                                       where + " crosses a " +
                                                       std::string(to_string(label)) +
                                                       " edge");
  }
  if (phi.occupant(m.from) == kNoQubit || phi.occupant(m.from) != m.qubit) {
    throw IllegalMoveError(7, "qubit " + std::to_string(m.qubit) + " is not at " +
                                  g.node_name(m.from));
  }
  if (m.kind == MoveKind::InnerSwap) {
    if (phi.occupant(m.to) == kNoQubit || phi.occupant(m.to) != m.other) {
      throw IllegalMoveError(3, "inner_swap " + where + " needs qubit " +
                                    std::to_string(m.other) + " at " + g.node_name(m.to));
    }
    return;
  }
  if (phi.occupied(m.to)) {
    if (g.is_segment(m.to)) {
      throw IllegalMoveError(1, "segment " + g.node_name(m.to) + " already holds qubit " +
                                    std::to_string(phi.occupant(m.to)));
    }
    throw IllegalMoveError(3, "trap slot " + g.node_name(m.to) + " already holds qubit " +
                                  std::to_string(phi.occupant(m.to)));
  }
}

void apply_move_in_place(IonAssignment& phi, const Move& m, const PositionGraph& g) {
  check_move(phi, m, g);
  if (m.kind == MoveKind::InnerSwap) {
    phi.exchange(m.from, m.to);
  } else {
    phi.relocate(m.from, m.to);
  }
}

IonAssignment apply_move(const IonAssignment& phi, const Move& m, const PositionGraph& g) {
  IonAssignment next = phi;
  apply_move_in_place(next, m, g);
  return next;
}

std::optional<int> executable_trap(const IonAssignment& phi, std::span<const QubitId> qubits,
                                   const PositionGraph& g) {
  if (qubits.empty()) {
    return std::nullopt;
  }
  const int trap = g.trap_of(phi.position(qubits.front()));
  if (trap < 0 || !g.traps()[trap].executable()) {
    return std::nullopt;
  }
  for (QubitId q : qubits) {
    if (g.trap_of(phi.position(q)) != trap) {
      return std::nullopt;
    }
  }
  return trap;
}

} // namespace ionroute
