#pragma once

#include "ionroute/arch.hpp"
#include "ionroute/circuit.hpp"
#include "ionroute/scheduler.hpp"
#include "ionroute/state.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ionroute {

struct TimedEvent {
  Instruction instr;
  double start = 0.0; // µs
  double end = 0.0;
  /// Nodes held for the whole event; an execution holds every slot of its trap.
  std::vector<NodeId> nodes;
  int junction = -1; // junction index crossed by a move
  int trap = -1;     // trap index of an execution
};

struct TimedSchedule {
  std::vector<TimedEvent> events; // in instruction order
  double makespan = 0.0;
};

/// Nodes, junction and trap an instruction occupies while it runs.
void fill_resources(TimedEvent& ev, const PositionGraph& g);

/// Duration of an execution: its gates run back to back inside the trap.
[[nodiscard]] double block_duration(const Block& block, const Circuit& circuit,
                                    const TimingModel& timing);

/// Greedy list scheduling: each instruction starts as soon as its qubits,
/// the nodes it touches and, for moves, its junction are released by every
/// earlier instruction. Throws ReplayError if `instrs` does not replay.
[[nodiscard]] TimedSchedule schedule(const InstructionList& instrs, const IonAssignment& phi0,
                                     const BlockDag& dag, const Circuit& circuit,
                                     const PositionGraph& g, const TimingModel& timing);

struct Violation {
  int constraint = 0; // 1..8, or 0 for structural problems
  double time = 0.0;
  std::size_t event = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Discrete-event replay of `ts` in start order checking the eight device
/// constraints, event durations, co-location and block dependencies.
/// Resources are recomputed from the instructions, not trusted.
[[nodiscard]] ValidationReport validate(const TimedSchedule& ts, const IonAssignment& phi0,
                                        const BlockDag& dag, const Circuit& circuit,
                                        const PositionGraph& g, const TimingModel& timing);

struct ScheduleStats {
  double makespan = 0.0;       // the reported shuttle time
  double shuttle_total = 0.0;  // summed durations of every shuttle event
  double transport_total = 0.0; // split + move + merge
  double gate_total = 0.0;
  double sp = 0.0; // transport_total / shuttle_total
  double gate_parallelism = 0.0; // gate time / time with any gate running
  std::map<std::string, std::size_t> counts; // per instruction kind
  std::size_t events = 0;
};

[[nodiscard]] ScheduleStats stats(const TimedSchedule& ts);

} // namespace ionroute
