#pragma once

#include "ionroute/arch.hpp"
#include "ionroute/circuit.hpp"
#include "ionroute/scheduler.hpp"
#include "ionroute/serialize.hpp"
#include "ionroute/timeline.hpp"

#include <string_view>

namespace ionroute {

struct CompileOptions {
  int k = 0; // 0: min(3, largest executable trap)
  SearchConfig search;
  BlockCostOracle oracle = gate_count_oracle();
};

struct CompileResult {
  PositionGraph graph;
  BlockDag dag;
  int k = 0;
  IonAssignment initial;
  RouteResult route;
  TimedSchedule schedule;
  ScheduleStats stats;
};

/// Layout, routing and timing in one go. Throws ArchitectureError,
/// CapacityError or RoutingError.
[[nodiscard]] CompileResult compile(const Circuit& circuit, const ArchitectureSpec& spec,
                                    const TimingModel& timing, const CompileOptions& opts = {});

/// A preset name, or a path to an architecture JSON file (capacity ignored).
[[nodiscard]] ArchitectureSpec load_architecture(std::string_view preset_or_path, int capacity);

[[nodiscard]] Trace make_trace(const CompileResult& result, const ArchitectureSpec& spec,
                               const TimingModel& timing);

/// Check a trace against the circuit it claims to run. The block dag is
/// rebuilt with the trace's k. Throws ParseError when the trace cannot be
/// matched to the device or circuit at all.
[[nodiscard]] ValidationReport validate_trace(const Trace& trace, const Circuit& circuit,
                                              const PositionGraph& g);

/// 64-bit FNV-1a, used for input digests.
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes);

} // namespace ionroute
