#include "ionroute/errors.hpp"
#include "ionroute/pipeline.hpp"
#include "ionroute/timeline.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace ionroute;
using namespace oracle;

namespace {

// One junction joining four segments, each leading to a single-slot trap.
ArchitectureSpec star4() {
  ArchitectureSpec s;
  s.name = "star4";
  for (int i = 0; i < 4; ++i) {
    s.traps.push_back({i, 1, TrapKind::Executable, {std::nullopt, i}});
    s.segments.push_back({i});
  }
  s.junctions = {{0, {0, 1, 2, 3}}};
  return s;
}

bool has_constraint(const ValidationReport& r, int c) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.constraint == c; });
}

CompileResult compile_small(std::uint64_t seed) {
  CompileOptions opts;
  opts.search.seed = seed;
  return compile(generate(CircuitKind::Qft, 6, 0), preset("H", 2), TimingModel{}, opts);
}

} // namespace

TEST(Schedule, EmptyInput) {
  const auto g = build_position_graph(preset("H", 3));
  const IonAssignment phi(g.num_nodes(), {});
  const BlockDag dag = make_block_dag(0, {});
  const auto ts = schedule({}, phi, dag, Circuit{}, g, TimingModel{});
  EXPECT_TRUE(ts.events.empty());
  EXPECT_EQ(ts.makespan, 0.0);
  EXPECT_TRUE(validate(ts, phi, dag, Circuit{}, g, TimingModel{}).ok());
  const auto s = stats(ts);
  EXPECT_EQ(s.sp, 0.0);
  EXPECT_EQ(s.events, 0u);
}

TEST(Schedule, SplitsInDifferentTrapsRunTogether) {
  const auto g = build_position_graph(preset("H", 3));
  const IonAssignment phi(g.num_nodes(), {2, 5});
  const BlockDag dag = make_block_dag(2, {});
  const InstructionList instrs = {Move{MoveKind::Split, 2, 12, 0, kNoQubit},
                                  Move{MoveKind::Split, 5, 13, 1, kNoQubit}};
  const TimingModel t;
  const auto ts = schedule(instrs, phi, dag, Circuit{2, {}}, g, t);
  EXPECT_EQ(ts.events[0].start, 0.0);
  EXPECT_EQ(ts.events[1].start, 0.0);
  EXPECT_EQ(ts.makespan, t.split);
  EXPECT_TRUE(validate(ts, phi, dag, Circuit{2, {}}, g, t).ok());
}

TEST(Schedule, JunctionSerializesDisjointMoves) {
  const auto g = build_position_graph(star4());
  // Segments are nodes 4..7.
  const IonAssignment phi(g.num_nodes(), {4, 5});
  const BlockDag dag = make_block_dag(2, {});
  const InstructionList instrs = {Move{MoveKind::Move, 4, 6, 0, kNoQubit},
                                  Move{MoveKind::Move, 5, 7, 1, kNoQubit}};
  const TimingModel t;
  const auto ts = schedule(instrs, phi, dag, Circuit{2, {}}, g, t);
  EXPECT_EQ(ts.events[1].start, ts.events[0].end);
  EXPECT_EQ(ts.makespan, 2 * t.move);
  EXPECT_TRUE(validate(ts, phi, dag, Circuit{2, {}}, g, t).ok());

  // Forcing them to overlap trips only the junction rule.
  auto bad = ts;
  bad.events[1].start = 0.0;
  bad.events[1].end = t.move;
  const auto r = validate(bad, phi, dag, Circuit{2, {}}, g, t);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].constraint, 2);
  EXPECT_EQ(r.violations[0].event, 1u);
}

TEST(Validate, CompiledSchedulesPass) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = compile_small(seed);
    const Circuit c = generate(CircuitKind::Qft, 6, 0);
    EXPECT_TRUE(validate(r.schedule, r.initial, r.dag, c, r.graph, TimingModel{}).ok());
  }
}

TEST(Validate, OverlappingSegmentUseIsFlagged) {
  const auto r = compile_small(3);
  const Circuit c = generate(CircuitKind::Qft, 6, 0);
  // Find a shuttle into a segment followed later by one out of it, and pull
  // the second back onto the first.
  for (std::size_t i = 0; i < r.schedule.events.size(); ++i) {
    const auto* a = std::get_if<Move>(&r.schedule.events[i].instr);
    if (a == nullptr || !r.graph.is_segment(a->to)) {
      continue;
    }
    for (std::size_t j = i + 1; j < r.schedule.events.size(); ++j) {
      const auto* b = std::get_if<Move>(&r.schedule.events[j].instr);
      if (b != nullptr && b->from == a->to) {
        auto bad = r.schedule;
        const double d = bad.events[j].end - bad.events[j].start;
        bad.events[j].start = bad.events[i].start;
        bad.events[j].end = bad.events[j].start + d;
        const auto rep = validate(bad, r.initial, r.dag, c, r.graph, TimingModel{});
        EXPECT_TRUE(has_constraint(rep, 1));
        return;
      }
    }
  }
  GTEST_SKIP() << "no segment hand-off in this schedule";
}

TEST(Validate, StructuralFaults) {
  const auto r = compile_small(1);
  const Circuit c = generate(CircuitKind::Qft, 6, 0);
  const TimingModel t;
  {
    auto bad = r.schedule;
    bad.events[0].end += 1.0;
    EXPECT_TRUE(has_constraint(validate(bad, r.initial, r.dag, c, r.graph, t), 0));
  }
  {
    auto bad = r.schedule;
    auto it = std::find_if(bad.events.begin(), bad.events.end(), [](const TimedEvent& e) {
      return std::holds_alternative<ExecuteBlock>(e.instr);
    });
    ASSERT_NE(it, bad.events.end());
    bad.events.erase(it);
    const auto rep = validate(bad, r.initial, r.dag, c, r.graph, t);
    EXPECT_FALSE(rep.ok());
  }
  {
    auto bad = r.schedule;
    bad.events.push_back(bad.events.back());
    bad.events.back().start = bad.makespan + 1000.0;
    bad.events.back().end = bad.events.back().start + (r.schedule.events.back().end -
                                                       r.schedule.events.back().start);
    EXPECT_FALSE(validate(bad, r.initial, r.dag, c, r.graph, t).ok());
  }
}

TEST(Validate, IllegalMoveReportsItsConstraint) {
  const auto g = build_position_graph(preset("MINI", 2));
  const IonAssignment phi(g.num_nodes(), {kT0S0, kSeg0});
  const BlockDag dag = make_block_dag(2, {});
  TimedSchedule ts;
  TimedEvent ev;
  // Merging onto an occupied slot.
  ev.instr = Move{MoveKind::Merge, kSeg0, kT0S0, 1, kNoQubit};
  ev.start = 0.0;
  ev.end = TimingModel{}.merge;
  ts.events.push_back(ev);
  ts.makespan = ev.end;
  const auto rep = validate(ts, phi, dag, Circuit{2, {}}, g, TimingModel{});
  ASSERT_FALSE(rep.ok());
  EXPECT_GT(rep.violations[0].constraint, 0);
}

TEST(Stats, ShuttleProportionExtremes) {
  const auto g = build_position_graph(preset("MINI", 2));
  const BlockDag dag = make_block_dag(2, {});
  const TimingModel t;
  {
    const IonAssignment phi(g.num_nodes(), {kT0S0, kT0S1});
    const InstructionList swaps = {Move{MoveKind::InnerSwap, kT0S0, kT0S1, 0, 1}};
    const auto s = stats(schedule(swaps, phi, dag, Circuit{2, {}}, g, t));
    EXPECT_EQ(s.sp, 0.0);
    EXPECT_EQ(s.counts.at("inner_swap"), 1u);
  }
  {
    const IonAssignment phi(g.num_nodes(), {kT0S0, kT1S1});
    const InstructionList transport = {Move{MoveKind::Split, kT0S0, kSeg0, 0, kNoQubit},
                                       Move{MoveKind::Move, kSeg0, kSeg1, 0, kNoQubit},
                                       Move{MoveKind::Merge, kSeg1, kT1S0, 0, kNoQubit}};
    const auto s = stats(schedule(transport, phi, dag, Circuit{2, {}}, g, t));
    EXPECT_EQ(s.sp, 1.0);
    EXPECT_EQ(s.makespan, t.split + t.move + t.merge);
    EXPECT_EQ(s.transport_total, s.shuttle_total);
  }
}

TEST(Stats, MakespanBoundsOnRandomCompiles) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    SpecOptions so;
    so.min_capacity = 2;
    const auto spec = random_spec(rng, so);
    const auto g = build_position_graph(spec);
    const int n = std::min(6, g.total_trap_slots() - 1);
    if (n < 2) {
      continue;
    }
    const auto c = random_circuit(rng, n, 15);
    CompileOptions opts;
    opts.search.seed = i;
    const auto r = compile(c, spec, TimingModel{}, opts);
    ASSERT_TRUE(validate(r.schedule, r.initial, r.dag, c, r.graph, TimingModel{}).ok());
    double total = 0.0;
    std::vector<double> per_qubit(n, 0.0);
    for (const auto& ev : r.schedule.events) {
      total += ev.end - ev.start;
      if (const auto* m = std::get_if<Move>(&ev.instr)) {
        per_qubit[m->qubit] += ev.end - ev.start;
      }
    }
    const double longest = *std::max_element(per_qubit.begin(), per_qubit.end());
    EXPECT_GE(r.stats.makespan + 1e-9, longest);
    EXPECT_LE(r.stats.makespan, total + 1e-9);
    EXPECT_GE(r.stats.sp, 0.0);
    EXPECT_LE(r.stats.sp, 1.0);
  }
}
