#include "ionroute/timeline.hpp"

#include "ionroute/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ionroute {

namespace {

constexpr double kTimeEps = 1e-9;

int junction_between(const PositionGraph& g, NodeId a, NodeId b) {
  const auto e = g.find_edge(a, b);
  if (!e || g.edge(*e).label != EdgeLabel::Move) {
    return -1;
  }
  return g.edge(*e).junction;
}

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

} // namespace

void fill_resources(TimedEvent& ev, const PositionGraph& g) {
  ev.nodes.clear();
  ev.junction = -1;
  ev.trap = -1;
  if (const auto* m = std::get_if<Move>(&ev.instr)) {
    const auto n = static_cast<NodeId>(g.num_nodes());
    for (NodeId v : {m->from, m->to}) {
      if (v >= 0 && v < n) {
        ev.nodes.push_back(v);
      }
    }
    if (m->kind == MoveKind::Move && ev.nodes.size() == 2) {
      ev.junction = junction_between(g, m->from, m->to);
    }
  } else {
    const auto& ex = std::get<ExecuteBlock>(ev.instr);
    if (ex.trap >= 0 && static_cast<std::size_t>(ex.trap) < g.traps().size()) {
      const Trap& t = g.traps()[ex.trap];
      ev.trap = ex.trap;
      for (int s = 0; s < t.capacity; ++s) {
        ev.nodes.push_back(t.slot(s));
      }
    }
  }
  std::sort(ev.nodes.begin(), ev.nodes.end());
}

double block_duration(const Block& block, const Circuit& circuit, const TimingModel& timing) {
  double total = 0.0;
  for (std::size_t gi : block.gates) {
    total += circuit.gates.at(gi).two_qubit() ? timing.gate_2q : timing.gate_1q;
  }
  return total;
}

TimedSchedule schedule(const InstructionList& instrs, const IonAssignment& phi0,
                       const BlockDag& dag, const Circuit& circuit, const PositionGraph& g,
                       const TimingModel& timing) {
  (void)replay(instrs, phi0, dag, g);

  TimedSchedule ts;
  std::vector<double> node_free(g.num_nodes(), 0.0);
  std::vector<double> junction_free(g.junctions().size(), 0.0);
  std::vector<double> qubit_free(static_cast<std::size_t>(phi0.num_qubits()), 0.0);

  for (const auto& instr : instrs) {
    TimedEvent ev;
    ev.instr = instr;
    fill_resources(ev, g);
    std::vector<QubitId> qubits;
    double duration = 0.0;
    if (const auto* m = std::get_if<Move>(&instr)) {
      qubits.push_back(m->qubit);
      if (m->kind == MoveKind::InnerSwap) {
        qubits.push_back(m->other);
      }
      duration = move_duration(m->kind, timing);
    } else {
      const auto& ex = std::get<ExecuteBlock>(instr);
      const Block& blk = dag.block(ex.block);
      qubits = blk.qubits;
      duration = block_duration(blk, circuit, timing);
    }
    double start = 0.0;
    for (QubitId q : qubits) {
      start = std::max(start, qubit_free[q]);
    }
    for (NodeId n : ev.nodes) {
      start = std::max(start, node_free[n]);
    }
    if (ev.junction >= 0) {
      start = std::max(start, junction_free[ev.junction]);
    }
    ev.start = start;
    ev.end = start + duration;
    for (QubitId q : qubits) {
      qubit_free[q] = ev.end;
    }
    for (NodeId n : ev.nodes) {
      node_free[n] = ev.end;
    }
    if (ev.junction >= 0) {
      junction_free[ev.junction] = ev.end;
    }
    ts.makespan = std::max(ts.makespan, ev.end);
    ts.events.push_back(std::move(ev));
  }
  return ts;
}

ValidationReport validate(const TimedSchedule& ts, const IonAssignment& phi0,
                          const BlockDag& dag, const Circuit& circuit, const PositionGraph& g,
                          const TimingModel& timing) {
  ValidationReport report;
  auto flag = [&](int constraint, std::size_t i, std::string msg) {
    const double t = i < ts.events.size() ? ts.events[i].start : ts.makespan;
    report.violations.push_back({constraint, t, i, std::move(msg)});
  };

  // Resources come from the instructions themselves.
  std::vector<TimedEvent> events = ts.events;
  for (auto& ev : events) {
    fill_resources(ev, g);
  }

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (!(ev.start >= 0.0) || !(ev.end >= ev.start)) {
      flag(0, i, "event has an invalid time interval");
      continue;
    }
    double expected = 0.0;
    if (const auto* m = std::get_if<Move>(&ev.instr)) {
      expected = move_duration(m->kind, timing);
    } else {
      const auto& ex = std::get<ExecuteBlock>(ev.instr);
      if (ex.block < 0 || static_cast<std::size_t>(ex.block) >= dag.size()) {
        flag(0, i, "execute refers to unknown block " + std::to_string(ex.block));
        continue;
      }
      expected = block_duration(dag.block(ex.block), circuit, timing);
    }
    if (std::abs((ev.end - ev.start) - expected) > kTimeEps * std::max(1.0, expected)) {
      flag(0, i, "duration " + format_time(ev.end - ev.start) + " does not match the timing model (" +
                     format_time(expected) + ")");
    }
  }

  // Pairwise resource overlaps, by sweep over start times.
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return events[a].start < events[b].start; });
  std::vector<std::size_t> active;
  for (std::size_t idx : order) {
    const auto& ev = events[idx];
    std::erase_if(active, [&](std::size_t a) { return events[a].end <= ev.start + kTimeEps; });
    if (ev.end - ev.start <= kTimeEps) {
      continue;
    }
    for (std::size_t a : active) {
      const auto& other = events[a];
      const std::size_t first = std::min(a, idx);
      const std::size_t second = std::max(a, idx);
      const std::string pair = "events " + std::to_string(first) + " and " +
                               std::to_string(second);
      if (ev.trap >= 0 && ev.trap == other.trap) {
        flag(8, second, pair + " run gates in trap " + std::to_string(ev.trap) + " concurrently");
        continue;
      }
      if (ev.junction >= 0 && ev.junction == other.junction) {
        flag(2, second, pair + " cross junction " + std::to_string(ev.junction) + " concurrently");
      }
      std::vector<NodeId> shared;
      std::set_intersection(ev.nodes.begin(), ev.nodes.end(), other.nodes.begin(),
                            other.nodes.end(), std::back_inserter(shared));
      for (NodeId n : shared) {
        if (g.is_segment(n)) {
          flag(1, second, pair + " occupy segment " + g.node_name(n) + " concurrently");
        } else {
          flag(7, second, pair + " collide at " + g.node_name(n));
        }
      }
    }
    active.push_back(idx);
  }

  // State replay in start order.
  IonAssignment phi = phi0;
  FrontState fs = make_front_state(dag, 0);
  for (std::size_t idx : order) {
    const auto& ev = events[idx];
    if (const auto* m = std::get_if<Move>(&ev.instr)) {
      try {
        apply_move_in_place(phi, *m, g);
      } catch (const IllegalMoveError& e) {
        flag(e.constraint(), idx, e.what());
      }
      continue;
    }
    const auto& ex = std::get<ExecuteBlock>(ev.instr);
    if (ex.block < 0 || static_cast<std::size_t>(ex.block) >= dag.size()) {
      continue; // reported above
    }
    const Block& blk = dag.block(ex.block);
    if (!fs.in_front(ex.block)) {
      flag(0, idx, "block " + std::to_string(ex.block) +
                       " runs before its dependencies or more than once");
      continue;
    }
    const auto trap = executable_trap(phi, blk.qubits, g);
    if (!trap || *trap != ex.trap) {
      flag(0, idx, "block " + std::to_string(ex.block) +
                       " is not co-located in executable trap " + std::to_string(ex.trap));
    }
    Permutation sorted = ex.perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != blk.qubits) {
      flag(0, idx, "permutation of block " + std::to_string(ex.block) + " is not a bijection");
    } else {
      phi.relabel(blk.qubits, ex.perm);
    }
    fs = advance(fs, dag, ex.block);
  }
  if (!fs.done()) {
    flag(0, events.size(),
         std::to_string(dag.size() - fs.executed_count()) + " blocks never executed");
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.event < b.event; });
  return report;
}

ScheduleStats stats(const TimedSchedule& ts) {
  ScheduleStats s;
  s.makespan = ts.makespan;
  s.events = ts.events.size();
  for (const char* kind : {"split", "merge", "move", "inner_swap", "shift", "execute"}) {
    s.counts[kind] = 0;
  }
  std::vector<std::pair<double, double>> gate_spans;
  for (const auto& ev : ts.events) {
    const double d = ev.end - ev.start;
    if (const auto* m = std::get_if<Move>(&ev.instr)) {
      ++s.counts[std::string(to_string(m->kind))];
      s.shuttle_total += d;
      if (m->kind == MoveKind::Split || m->kind == MoveKind::Merge ||
          m->kind == MoveKind::Move) {
        s.transport_total += d;
      }
    } else {
      ++s.counts["execute"];
      s.gate_total += d;
      if (d > 0.0) {
        gate_spans.emplace_back(ev.start, ev.end);
      }
    }
  }
  s.sp = s.shuttle_total > 0.0 ? s.transport_total / s.shuttle_total : 0.0;

  std::sort(gate_spans.begin(), gate_spans.end());
  double covered = 0.0;
  double lo = 0.0;
  double hi = -1.0;
  for (const auto& [a, b] : gate_spans) {
    if (a > hi) {
      covered += std::max(0.0, hi - lo);
      lo = a;
      hi = b;
    } else {
      hi = std::max(hi, b);
    }
  }
  covered += std::max(0.0, hi - lo);
  s.gate_parallelism = covered > 0.0 ? s.gate_total / covered : 0.0;
  return s;
}

} // namespace ionroute
