// ionroute command line: compile, validate, gen, arch, bench.

#include "ionroute/bench.hpp"
#include "ionroute/errors.hpp"
#include "ionroute/log.hpp"
#include "ionroute/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ionroute;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kFailed = 1,
  kUsage = 2,
  kParse = 3,
  kArch = 4,
  kCapacity = 5,
  kRouting = 6,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) != nullptr) {
    return kParse;
  }
  if (dynamic_cast<const ArchitectureError*>(&e) != nullptr) {
    return kArch;
  }
  if (dynamic_cast<const CapacityError*>(&e) != nullptr) {
    return kCapacity;
  }
  if (dynamic_cast<const RoutingError*>(&e) != nullptr) {
    return kRouting;
  }
  return kFailed;
}

struct CompileFlags {
  std::string arch = "H";
  int capacity = 3;
  std::string circuit;
  std::string algo = "shaper";
  int k = 0;
  double we = 0.5;
  int lookahead = 20;
  int passes = 3;
  std::uint64_t seed = 0;
  std::string timing;
  std::string out = "out";
};

TimingModel load_timing(const std::string& path) {
  return path.empty() ? TimingModel{} : timing_from_json(parse_json(read_file(path)));
}

int cmd_compile(const CompileFlags& f) {
  json report;
  report["schema"] = "ionroute.report/1";
  report["arch"] = f.arch;
  report["seed"] = f.seed;
  report["config"] = {{"capacity", f.capacity}, {"circuit", f.circuit}, {"algo", f.algo},
                      {"k", f.k},               {"we", f.we},           {"lookahead", f.lookahead},
                      {"passes", f.passes},     {"timing", f.timing}};
  const fs::path out{f.out};
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    const std::string text = read_file(f.circuit);
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a(text)));
    report["input_digest"] = std::string("fnv1a:") + digest;
    const Circuit c = parse_qasm(text);
    const ArchitectureSpec spec = load_architecture(f.arch, f.capacity);
    report["arch"] = spec.name;
    const TimingModel timing = load_timing(f.timing);

    CompileOptions opts;
    opts.k = f.k;
    opts.search.extended_weight = f.we;
    opts.search.lookahead = f.lookahead;
    opts.search.passes = f.passes;
    opts.search.seed = f.seed;
    opts.search.permutation_enabled = f.algo == "shaper";
    const CompileResult r = compile(c, spec, timing, opts);

    write_file(out / "trace.json", write_trace(make_trace(r, spec, timing), r.graph));
    write_file(out / "stats.json", to_json(r.stats).dump(1) + "\n");
    report["stats"] = to_json(r.stats);
    report["k"] = r.k;
    report["outcome"] = "ok";
    std::cout << "compiled " << c.gates.size() << " gates in " << r.dag.size()
              << " blocks: makespan " << r.stats.makespan << " us, SP " << r.stats.sp << "\n";
  } catch (const std::exception& e) {
    code = exit_code_for(e);
    report["outcome"] = std::string("failed: ") + e.what();
    std::cerr << "error: " << e.what() << "\n";
  }
  report["compile_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_file(out / "report.json", report.dump(1) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code == kOk ? kFailed : code;
  }
  return code;
}

int cmd_validate(const std::string& trace_path, const std::string& arch, int capacity,
                 const std::string& circuit_path) {
  const ArchitectureSpec spec = load_architecture(arch, capacity);
  spec.validate();
  const PositionGraph g = build_position_graph(spec);
  const Circuit c = parse_qasm(read_file(circuit_path));
  const std::string text = read_file(trace_path);
  Trace t;
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    t = read_trace(text, g);
  }
  const ValidationReport rep = validate_trace(t, c, g);
  for (const auto& v : rep.violations) {
    std::cout << "violation";
    if (v.constraint > 0) {
      std::cout << " (constraint " << v.constraint << ")";
    }
    std::cout << " at t=" << v.time << " us, event " << v.event << ": " << v.message << "\n";
  }
  if (rep.ok()) {
    std::cout << "ok: " << t.schedule.events.size() << " events, makespan "
              << t.schedule.makespan << " us\n";
    return kOk;
  }
  std::cout << rep.violations.size() << " violation(s)\n";
  return kFailed;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuttling compiler for trapped-ion QCCD devices"};
  app.require_subcommand(1);

  CompileFlags cf;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a QASM circuit to a timed trace");
  compile_cmd->add_option("--arch", cf.arch, "Preset (H, G2x3, MINI) or architecture file")
      ->capture_default_str();
  compile_cmd->add_option("--capacity", cf.capacity, "Ions per trap for presets")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compile_cmd->add_option("--circuit", cf.circuit, "OpenQASM 2 file")->required();
  compile_cmd->add_option("--algo", cf.algo, "shaper or shaw")
      ->check(CLI::IsMember({"shaper", "shaw"}))
      ->capture_default_str();
  compile_cmd->add_option("--k", cf.k, "Block width (default min(3, largest trap))");
  compile_cmd->add_option("--we", cf.we, "Extended-set weight")->capture_default_str();
  compile_cmd->add_option("--lookahead", cf.lookahead, "Extended-set size")->capture_default_str();
  compile_cmd->add_option("--passes", cf.passes, "Layout passes")->capture_default_str();
  compile_cmd->add_option("--seed", cf.seed, "Layout seed")->capture_default_str();
  compile_cmd->add_option("--timing", cf.timing, "Timing model JSON");
  compile_cmd->add_option("--out", cf.out, "Output directory")->capture_default_str();

  std::string v_trace;
  std::string v_arch = "H";
  int v_capacity = 3;
  std::string v_circuit;
  auto* validate_cmd = app.add_subcommand("validate", "Check a trace against the device rules");
  validate_cmd->add_option("--trace", v_trace, "Trace file")->required();
  validate_cmd->add_option("--arch", v_arch, "Preset or architecture file")->capture_default_str();
  validate_cmd->add_option("--capacity", v_capacity, "Ions per trap for presets")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate_cmd->add_option("--circuit", v_circuit, "OpenQASM 2 file")->required();

  std::string g_kind;
  int g_n = 16;
  std::uint64_t g_seed = 0;
  GeneratorParams g_params;
  std::string g_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a benchmark circuit");
  gen_cmd->add_option("kind", g_kind, "qft, qaoa_er or qv_like")->required();
  gen_cmd->add_option("--n", g_n, "Qubits")->capture_default_str();
  gen_cmd->add_option("--seed", g_seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--p", g_params.edge_probability, "qaoa_er edge probability")
      ->capture_default_str();
  gen_cmd->add_option("--depth", g_params.depth, "qv_like layers")->capture_default_str();
  gen_cmd->add_option("--out", g_out, "Output file (stdout if omitted)");

  std::string a_name;
  int a_capacity = 3;
  std::string a_out;
  auto* arch_cmd = app.add_subcommand("arch", "Emit a preset architecture description");
  arch_cmd->add_option("name", a_name, "H, G2x3 or MINI")->required();
  arch_cmd->add_option("--capacity", a_capacity, "Ions per trap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  arch_cmd->add_option("--out", a_out, "Output file (stdout if omitted)");

  int b_seeds = 1;
  std::string b_out;
  bool b_quick = false;
  auto* bench_cmd = app.add_subcommand("bench", "SHAPER vs SHAW over the benchmark grid");
  bench_cmd->add_option("--seeds", b_seeds, "Seeds per cell (best kept)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_flag("--quick", b_quick, "16-qubit cells only");
  bench_cmd->add_option("--out", b_out, "Write the table to this file as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*compile_cmd) {
      return cmd_compile(cf);
    }
    if (*validate_cmd) {
      return cmd_validate(v_trace, v_arch, v_capacity, v_circuit);
    }
    if (*gen_cmd) {
      CircuitKind kind;
      try {
        kind = parse_circuit_kind(g_kind);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
      }
      emit(g_out, emit_qasm(generate(kind, g_n, g_seed, g_params)));
      return kOk;
    }
    if (*arch_cmd) {
      const ArchitectureSpec spec = preset(a_name, a_capacity);
      const PositionGraph g = build_position_graph(spec);
      emit(a_out, to_json(spec).dump(1) + "\n");
      std::cerr << spec.name << ": " << g.num_nodes() << " nodes, " << g.num_edges()
                << " edges\n";
      return kOk;
    }
    if (*bench_cmd) {
      BenchOptions opts;
      opts.seeds.clear();
      for (int s = 1; s <= b_seeds; ++s) {
        opts.seeds.push_back(static_cast<std::uint64_t>(s));
      }
      std::vector<BenchRow> rows;
      for (const auto& cell : default_bench_cells()) {
        if (b_quick && cell.num_qubits != 16) {
          continue;
        }
        std::cerr << "running " << to_string(cell.kind) << cell.num_qubits << " on "
                  << cell.arch << "/" << cell.capacity << "\n";
        rows.push_back(run_bench_cell(cell, opts));
      }
      const std::string table = format_bench_table(rows);
      std::cout << table;
      if (!b_out.empty()) {
        write_file(b_out, table);
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}
