#pragma once

#include "ionroute/circuit.hpp"
#include "ionroute/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ionroute {

struct BenchCell {
  CircuitKind kind = CircuitKind::Qft;
  int num_qubits = 0;
  std::string arch;
  int capacity = 0;
};

/// The 16- and 20-qubit circuits over H and G2x3 at the capacities where the
/// device is exactly full and one slot per trap looser.
[[nodiscard]] std::vector<BenchCell> default_bench_cells();

struct BenchRun {
  bool ok = false;
  std::string error;
  ScheduleStats stats;
  double compile_seconds = 0.0;
};

struct BenchRow {
  BenchCell cell;
  BenchRun shaper;
  BenchRun shaw;
};

struct BenchOptions {
  std::vector<std::uint64_t> seeds{1}; // best makespan over these seeds
  TimingModel timing;
  SearchConfig search;
};

[[nodiscard]] BenchRow run_bench_cell(const BenchCell& cell, const BenchOptions& opts);

/// SHAPER makespan <= SHAW makespan * (1 + tolerance).
[[nodiscard]] bool shaper_within(const BenchRow& row, double tolerance = 0.10);

/// Markdown comparison table with a closing note on reproducibility.
[[nodiscard]] std::string format_bench_table(const std::vector<BenchRow>& rows);

} // namespace ionroute
