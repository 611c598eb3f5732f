#pragma once

#include "ionroute/arch.hpp"
#include "ionroute/timeline.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace ionroute {

inline constexpr std::string_view kArchSchema = "ionroute.arch/1";
inline constexpr std::string_view kTraceSchema = "ionroute.trace/1";
inline constexpr std::string_view kStatsSchema = "ionroute.stats/1";

[[nodiscard]] nlohmann::json to_json(const ArchitectureSpec& spec);
/// Throws ParseError on malformed documents; does not validate the device.
[[nodiscard]] ArchitectureSpec arch_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const TimingModel& timing);
/// Missing keys keep their defaults.
[[nodiscard]] TimingModel timing_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const ScheduleStats& s);

struct Trace {
  std::string arch;
  int k = 0;
  TimingModel timing;
  int num_qubits = 0;
  std::vector<NodeId> initial_layout; // node per qubit
  TimedSchedule schedule;
};

/// Nodes are written by name ("t0s1", "seg3").
[[nodiscard]] std::string write_trace(const Trace& trace, const PositionGraph& g);
/// Throws ParseError on malformed text or unknown node names.
[[nodiscard]] Trace read_trace(std::string_view text, const PositionGraph& g);

/// Parse JSON text, mapping syntax errors to ParseError with line/column.
[[nodiscard]] nlohmann::json parse_json(std::string_view text);

[[nodiscard]] NodeId node_by_name(const PositionGraph& g, std::string_view name);

} // namespace ionroute
