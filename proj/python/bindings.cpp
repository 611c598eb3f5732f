// Python bindings: thin wrappers that trade in QASM and JSON text.
#include "ionroute/errors.hpp"
#include "ionroute/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ionroute;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ArchitectureSpec arch_arg(const std::string& arch, int capacity) {
  ArchitectureSpec spec = load_architecture(arch, capacity);
  spec.validate();
  return spec;
}

py::dict compile_py(const std::string& qasm, const std::string& arch, int capacity,
                    const std::string& algo, int k, double we, int lookahead, int passes,
                    std::uint64_t seed) {
  if (algo != "shaper" && algo != "shaw") {
    throw py::value_error("algo must be 'shaper' or 'shaw'");
  }
  const Circuit c = parse_qasm(qasm);
  const ArchitectureSpec spec = arch_arg(arch, capacity);
  CompileOptions opts;
  opts.k = k;
  opts.search.extended_weight = we;
  opts.search.lookahead = lookahead;
  opts.search.passes = passes;
  opts.search.seed = seed;
  opts.search.permutation_enabled = algo == "shaper";
  CompileResult r;
  {
    py::gil_scoped_release release;
    r = compile(c, spec, TimingModel{}, opts);
  }
  py::dict out;
  out["trace"] = write_trace(make_trace(r, spec, TimingModel{}), r.graph);
  out["stats"] = json_to_py(to_json(r.stats));
  out["k"] = r.k;
  out["blocks"] = r.dag.size();
  return out;
}

py::list validate_py(const std::string& trace, const std::string& qasm, const std::string& arch,
                     int capacity) {
  const ArchitectureSpec spec = arch_arg(arch, capacity);
  const PositionGraph g = build_position_graph(spec);
  const Circuit c = parse_qasm(qasm);
  Trace t;
  if (trace.find_first_not_of(" \t\r\n") != std::string::npos) {
    t = read_trace(trace, g);
  }
  py::list out;
  for (const auto& v : validate_trace(t, c, g).violations) {
    py::dict d;
    d["constraint"] = v.constraint;
    d["time"] = v.time;
    d["event"] = v.event;
    d["message"] = v.message;
    out.append(d);
  }
  return out;
}

py::dict graph_info(const std::string& arch, int capacity) {
  const PositionGraph g = build_position_graph(arch_arg(arch, capacity));
  py::list names;
  for (std::size_t n = 0; n < g.num_nodes(); ++n) {
    names.append(g.node_name(static_cast<NodeId>(n)));
  }
  py::list edges;
  for (const auto& e : g.edges()) {
    edges.append(py::make_tuple(g.node_name(e.u), g.node_name(e.v),
                                std::string(to_string(e.label))));
  }
  py::dict d;
  d["nodes"] = names;
  d["edges"] = edges;
  d["trap_slots"] = g.total_trap_slots();
  return d;
}

} // namespace

PYBIND11_MODULE(_ionroute, m) {
  m.doc() = "Shuttling compiler for QCCD trapped-ion devices";

  auto base = py::register_exception<Error>(m, "IonrouteError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ArchitectureError>(m, "ArchitectureError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<RoutingError>(m, "RoutingError", base.ptr());

  m.def(
      "preset",
      [](const std::string& name, int capacity) { return json_to_py(to_json(preset(name, capacity))); },
      py::arg("name"), py::arg("capacity"), "Architecture preset as a JSON-style dict.");
  m.def("graph_info", &graph_info, py::arg("arch") = "H", py::arg("capacity") = 3,
        "Node names and labeled edges of the position graph.");
  m.def(
      "generate",
      [](const std::string& kind, int n, std::uint64_t seed) {
        return emit_qasm(generate(parse_circuit_kind(kind), n, seed));
      },
      py::arg("kind"), py::arg("n"), py::arg("seed") = 0,
      "Benchmark circuit (qft, qaoa_er, qv_like) as OpenQASM text.");
  m.def(
      "normalize_qasm", [](const std::string& text) { return emit_qasm(parse_qasm(text)); },
      py::arg("text"), "Parse and re-emit OpenQASM in canonical form.");
  m.def("compile", &compile_py, py::arg("qasm"), py::arg("arch") = "H", py::arg("capacity") = 3,
        py::arg("algo") = "shaper", py::arg("k") = 0, py::arg("we") = 0.5,
        py::arg("lookahead") = 20, py::arg("passes") = 3, py::arg("seed") = 0,
        "Compile a circuit; returns {'trace': str, 'stats': dict, 'k': int, 'blocks': int}.");
  m.def("validate", &validate_py, py::arg("trace"), py::arg("qasm"), py::arg("arch") = "H",
        py::arg("capacity") = 3, "Violations of a trace; empty when valid.");
}
