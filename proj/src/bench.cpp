#include "ionroute/bench.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

namespace ionroute {

std::vector<BenchCell> default_bench_cells() {
  std::vector<BenchCell> cells;
  for (CircuitKind kind : {CircuitKind::QaoaEr, CircuitKind::Qft, CircuitKind::QvLike}) {
    for (int n : {16, 20}) {
      // H has 4 traps, G2x3 has 6.
      const int h_full = n / 4;
      const int g_full = (n + 5) / 6;
      for (int cap : {h_full, h_full + 1}) {
        cells.push_back({kind, n, "H", cap});
      }
      for (int cap : {g_full, g_full + 1}) {
        cells.push_back({kind, n, "G2x3", cap});
      }
    }
  }
  return cells;
}

namespace {

BenchRun run_algo(const Circuit& c, const ArchitectureSpec& spec, const BenchOptions& opts,
                  bool permutations) {
  BenchRun best;
  for (std::uint64_t seed : opts.seeds) {
    CompileOptions co;
    co.search = opts.search;
    co.search.seed = seed;
    co.search.permutation_enabled = permutations;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const CompileResult r = compile(c, spec, opts.timing, co);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!best.ok || r.stats.makespan < best.stats.makespan) {
        best.ok = true;
        best.stats = r.stats;
        best.compile_seconds = secs;
      }
    } catch (const std::exception& e) {
      if (!best.ok) {
        best.error = e.what();
      }
    }
  }
  return best;
}

std::string cell_value(const BenchRun& r, double value, const char* fmt) {
  if (!r.ok) {
    return "X";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

} // namespace

BenchRow run_bench_cell(const BenchCell& cell, const BenchOptions& opts) {
  const Circuit c = generate(cell.kind, cell.num_qubits, 0);
  const ArchitectureSpec spec = preset(cell.arch, cell.capacity);
  return {cell, run_algo(c, spec, opts, true), run_algo(c, spec, opts, false)};
}

bool shaper_within(const BenchRow& row, double tolerance) {
  return row.shaper.ok && row.shaw.ok &&
         row.shaper.stats.makespan <= row.shaw.stats.makespan * (1.0 + tolerance);
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "| Benchmark | Arch | Ions/trap | SHAPER shuttle (us) | SHAPER SP | SHAPER runtime (s) "
        "| SHAW shuttle (us) | SHAW SP | SHAW runtime (s) |\n";
  os << "|---|---|---|---|---|---|---|---|---|\n";
  std::size_t within = 0;
  std::size_t both = 0;
  for (const auto& r : rows) {
    os << "| " << to_string(r.cell.kind) << r.cell.num_qubits << " | " << r.cell.arch << " | "
       << r.cell.capacity << " | " << cell_value(r.shaper, r.shaper.stats.makespan, "%.0f")
       << " | " << cell_value(r.shaper, 100.0 * r.shaper.stats.sp, "%.0f%%") << " | "
       << cell_value(r.shaper, r.shaper.compile_seconds, "%.2f") << " | "
       << cell_value(r.shaw, r.shaw.stats.makespan, "%.0f") << " | "
       << cell_value(r.shaw, 100.0 * r.shaw.stats.sp, "%.0f%%") << " | "
       << cell_value(r.shaw, r.shaw.compile_seconds, "%.2f") << " |\n";
    if (r.shaper.ok && r.shaw.ok) {
      ++both;
      within += shaper_within(r) ? 1 : 0;
    }
  }
  os << "\nSHAPER within 10% of SHAW on " << within << " of " << both << " cells.\n";
  os << "Note: absolute microsecond values are not comparable to published figures; "
        "timing constants, circuit generators and layout randomness differ.\n";
  return os.str();
}

} // namespace ionroute
