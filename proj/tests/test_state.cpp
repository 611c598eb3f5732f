#include "ionroute/errors.hpp"
#include "ionroute/state.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

using namespace ionroute;
using namespace oracle;

namespace {

const PositionGraph& mini() {
  static const PositionGraph g = build_position_graph(preset("MINI", 2));
  return g;
}

} // namespace

TEST(Assignment, InjectivityAndRelabel) {
  EXPECT_THROW(IonAssignment(6, {0, 0}), std::invalid_argument);
  EXPECT_THROW(IonAssignment(6, {7}), std::invalid_argument);
  IonAssignment phi(6, {kT0S0, kT0S1, kT1S0});
  phi.relabel(std::vector<QubitId>{0, 1}, std::vector<QubitId>{1, 0});
  EXPECT_EQ(phi.position(0), kT0S1);
  EXPECT_EQ(phi.position(1), kT0S0);
  EXPECT_EQ(phi.occupant(kT0S1), 0);
  EXPECT_EQ(phi.dump(mini()), R"({"q0":"t0s1","q1":"t0s0","q2":"t1s0"})");
}

TEST(LegalMoves, MiniExample) {
  const IonAssignment phi(6, {kT0S0, kT0S1, kT1S0});
  const auto moves = legal_moves(phi, mini());
  ASSERT_EQ(moves.size(), 4u);
  std::set<std::tuple<MoveKind, NodeId, NodeId>> got;
  for (const auto& m : moves) {
    got.emplace(m.kind, m.from, m.to);
  }
  const std::set<std::tuple<MoveKind, NodeId, NodeId>> want = {
      {MoveKind::InnerSwap, kT0S0, kT0S1},
      {MoveKind::Split, kT0S0, kSeg0},
      {MoveKind::Split, kT1S0, kSeg1},
      {MoveKind::Shift, kT1S0, kT1S1}};
  EXPECT_EQ(got, want);
  EXPECT_TRUE(std::is_sorted(moves.begin(), moves.end()));
}

TEST(LegalMoves, EmptyAndSaturated) {
  EXPECT_TRUE(legal_moves(IonAssignment(6, {}), mini()).empty());
  const IonAssignment full(6, {0, 1, 2, 3, 4, 5});
  const auto moves = legal_moves(full, mini());
  ASSERT_EQ(moves.size(), 2u);
  for (const auto& m : moves) {
    EXPECT_EQ(m.kind, MoveKind::InnerSwap);
  }
}

TEST(ApplyMove, InversePairs) {
  const IonAssignment phi(6, {kT0S0, kT0S1, kT1S0});
  const Move split{MoveKind::Split, kT0S0, kSeg0, 0, kNoQubit};
  const Move merge{MoveKind::Merge, kSeg0, kT0S0, 0, kNoQubit};
  EXPECT_EQ(apply_move(apply_move(phi, split, mini()), merge, mini()), phi);
  const Move swap{MoveKind::InnerSwap, kT0S0, kT0S1, 0, 1};
  const auto once = apply_move(phi, swap, mini());
  EXPECT_EQ(once.position(0), kT0S1);
  const Move back{MoveKind::InnerSwap, kT0S0, kT0S1, 1, 0};
  EXPECT_EQ(apply_move(once, back, mini()), phi);
}

TEST(ApplyMove, ConstraintNumbers) {
  const auto& g = mini();
  const IonAssignment phi(6, {kT0S0, kSeg0, kT1S0, kSeg1});
  auto constraint = [&](const Move& m) {
    try {
      check_move(phi, m, g);
    } catch (const IllegalMoveError& e) {
      return e.constraint();
    }
    return 0;
  };
  // Move into an occupied segment.
  EXPECT_EQ(constraint({MoveKind::Move, kSeg0, kSeg1, 1, kNoQubit}), 1);
  // Split from a slot without a segment.
  EXPECT_EQ(constraint({MoveKind::Split, kT0S1, kSeg0, kNoQubit, kNoQubit}), 4);
  // Merge along a swap edge.
  EXPECT_EQ(constraint({MoveKind::Merge, kT0S0, kT0S1, 0, kNoQubit}), 5);
  // Move between non-junction neighbours.
  EXPECT_EQ(constraint({MoveKind::Move, kSeg0, kT0S0, 1, kNoQubit}), 6);
  // Shift into an occupied slot.
  const IonAssignment packed(6, {kT0S0, kT0S1});
  EXPECT_THROW(check_move(packed, {MoveKind::Shift, kT0S0, kT0S1, 0, kNoQubit}, g),
               IllegalMoveError);
  // Wrong ion at the source.
  EXPECT_EQ(constraint({MoveKind::Shift, kT1S0, kT1S1, 0, kNoQubit}), 7);
  // Merge onto an occupied end slot.
  EXPECT_EQ(constraint({MoveKind::Merge, kSeg0, kT0S0, 1, kNoQubit}), 3);
}

TEST(ApplyMove, ClosureOnRandomStates) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const auto g = build_position_graph(random_spec(rng));
    const int ions = static_cast<int>(rng() % (g.num_nodes() + 1));
    IonAssignment phi = random_state(rng, g, ions);
    for (int step = 0; step < 20; ++step) {
      const auto moves = legal_moves(phi, g);
      for (const auto& m : moves) {
        EXPECT_NO_THROW(check_move(phi, m, g));
      }
      if (moves.empty()) {
        break;
      }
      phi = apply_move(phi, moves[rng() % moves.size()], g);
      int occupied = 0;
      for (std::size_t n = 0; n < g.num_nodes(); ++n) {
        occupied += phi.occupied(static_cast<NodeId>(n)) ? 1 : 0;
      }
      EXPECT_EQ(occupied, ions);
    }
  }
}

TEST(ApplyMove, MiniReachability) {
  const auto& g = mini();
  for (int ions = 1; ions <= 3; ++ions) {
    std::vector<NodeId> start;
    for (int q = 0; q < ions; ++q) {
      start.push_back(q);
    }
    std::set<std::vector<NodeId>> seen{start};
    std::queue<IonAssignment> todo;
    todo.emplace(6, start);
    while (!todo.empty()) {
      const auto cur = todo.front();
      todo.pop();
      for (const auto& m : legal_moves(cur, g)) {
        auto next = apply_move(cur, m, g);
        if (seen.insert(next.positions()).second) {
          todo.push(next);
        }
      }
    }
    std::size_t injective = 1;
    for (int q = 0; q < ions; ++q) {
      injective *= static_cast<std::size_t>(6 - q);
    }
    EXPECT_EQ(seen.size(), injective) << ions;
  }
}

TEST(ExecutableTrap, Cases) {
  const auto& g = mini();
  const IonAssignment phi(6, {kT0S0, kT0S1, kT1S0});
  EXPECT_EQ(executable_trap(phi, std::vector<QubitId>{0, 1}, g), 0);
  EXPECT_FALSE(executable_trap(phi, std::vector<QubitId>{1, 2}, g).has_value());
  auto spec = preset("MINI", 2);
  spec.traps[0].kind = TrapKind::Storage;
  const auto gs = build_position_graph(spec);
  EXPECT_FALSE(executable_trap(phi, std::vector<QubitId>{0, 1}, gs).has_value());
}

TEST(MoveKind, Names) {
  for (auto k : {MoveKind::Split, MoveKind::Merge, MoveKind::Move, MoveKind::InnerSwap,
                 MoveKind::Shift}) {
    EXPECT_EQ(parse_move_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_move_kind("teleport").has_value());
}
