#include "ionroute/pipeline.hpp"

#include "ionroute/errors.hpp"
#include "ionroute/log.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ionroute {

namespace {

constexpr int kLayoutRetries = 8;

} // namespace

CompileResult compile(const Circuit& circuit, const ArchitectureSpec& spec,
                      const TimingModel& timing, const CompileOptions& opts) {
  spec.validate();
  timing.validate();
  circuit.validate();
  opts.search.validate();

  CompileResult r;
  r.graph = build_position_graph(spec);
  const PositionGraph& g = r.graph;
  if (circuit.num_qubits > g.total_trap_slots()) {
    throw CapacityError("circuit needs " + std::to_string(circuit.num_qubits) +
                        " ions but the device has " + std::to_string(g.total_trap_slots()) +
                        " trap slots");
  }
  r.k = opts.k > 0 ? opts.k : std::max(2, std::min(3, g.max_executable_capacity()));
  r.dag = partition_blocks(circuit, r.k);
  const DistanceMatrix dist = all_pairs_shuttle_cost(g, timing);

  SearchConfig cfg = opts.search;
  for (int attempt = 0;; ++attempt) {
    r.initial = initial_layout(r.dag, g, dist, timing, cfg, opts.oracle);
    try {
      r.route = route(r.dag, r.initial, g, dist, timing, cfg, opts.oracle);
      break;
    } catch (const RoutingError& e) {
      if (attempt + 1 >= kLayoutRetries) {
        throw;
      }
      logger()->info("routing from layout seed {} failed ({}); reseeding", cfg.seed, e.what());
      cfg.seed = cfg.seed * 6364136223846793005ULL + 1442695040888963407ULL;
    }
  }
  r.schedule = schedule(r.route.instructions, r.initial, r.dag, circuit, g, timing);
  r.stats = stats(r.schedule);
  return r;
}

ArchitectureSpec load_architecture(std::string_view preset_or_path, int capacity) {
  const std::filesystem::path path{std::string(preset_or_path)};
  if (std::filesystem::is_regular_file(path)) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return arch_from_json(parse_json(ss.str()));
    } catch (const ParseError& e) {
      throw ArchitectureError(path.string() + ": " + e.what());
    }
  }
  return preset(preset_or_path, capacity);
}

Trace make_trace(const CompileResult& result, const ArchitectureSpec& spec,
                 const TimingModel& timing) {
  Trace t;
  t.arch = spec.name;
  t.k = result.k;
  t.timing = timing;
  t.num_qubits = result.initial.num_qubits();
  t.initial_layout = result.initial.positions();
  t.schedule = result.schedule;
  return t;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ValidationReport validate_trace(const Trace& trace, const Circuit& circuit,
                                const PositionGraph& g) {
  if (trace.num_qubits < circuit.num_qubits && !circuit.gates.empty()) {
    throw ParseError("trace places " + std::to_string(trace.num_qubits) +
                     " ions but the circuit has " + std::to_string(circuit.num_qubits) +
                     " qubits");
  }
  const int k = trace.k > 0 ? trace.k : std::max(2, std::min(3, g.max_executable_capacity()));
  const BlockDag dag = partition_blocks(circuit, k);
  IonAssignment phi0;
  try {
    phi0 = IonAssignment(g.num_nodes(), trace.initial_layout);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("trace initial_layout: ") + e.what());
  }
  return validate(trace.schedule, phi0, dag, circuit, g, trace.timing);
}

} // namespace ionroute
