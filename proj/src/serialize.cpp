#include "ionroute/serialize.hpp"

#include "ionroute/errors.hpp"

#include <unordered_map>

namespace ionroute {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key, std::string_view where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

void check_schema(const json& j, std::string_view expected) {
  if (!j.is_object()) {
    throw ParseError("expected a JSON object");
  }
  if (j.contains("schema") && j["schema"] != expected) {
    throw ParseError("unsupported schema '" + j["schema"].dump() + "', expected '" +
                     std::string(expected) + "'");
  }
}

json node_json(const PositionGraph& g, NodeId n) { return g.node_name(n); }

NodeId node_field(const json& ev, const char* key, const PositionGraph& g,
                  std::string_view where) {
  return node_by_name(g, field<std::string>(ev, key, where));
}

} // namespace

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Byte offset to line/column for the message.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("invalid JSON", line, col);
  }
}

NodeId node_by_name(const PositionGraph& g, std::string_view name) {
  for (std::size_t n = 0; n < g.num_nodes(); ++n) {
    if (g.node_name(static_cast<NodeId>(n)) == name) {
      return static_cast<NodeId>(n);
    }
  }
  throw ParseError("unknown node '" + std::string(name) + "'");
}

json to_json(const ArchitectureSpec& spec) {
  json j;
  j["schema"] = kArchSchema;
  j["name"] = spec.name;
  auto& traps = j["traps"] = json::array();
  for (const auto& t : spec.traps) {
    json ends = json::array();
    for (const auto& e : t.ends) {
      ends.push_back(e ? json(*e) : json(nullptr));
    }
    traps.push_back({{"id", t.id},
                     {"capacity", t.capacity},
                     {"kind", std::string(to_string(t.kind))},
                     {"ends", ends}});
  }
  auto& junctions = j["junctions"] = json::array();
  for (const auto& jn : spec.junctions) {
    junctions.push_back({{"id", jn.id}, {"segments", jn.segments}});
  }
  auto& segments = j["segments"] = json::array();
  for (const auto& s : spec.segments) {
    segments.push_back({{"id", s.id}});
  }
  return j;
}

ArchitectureSpec arch_from_json(const json& j) {
  check_schema(j, kArchSchema);
  ArchitectureSpec spec;
  spec.name = j.value("name", std::string("custom"));
  for (const auto& t : field<json>(j, "traps", "architecture")) {
    TrapSpec ts;
    ts.id = field<int>(t, "id", "trap");
    ts.capacity = field<int>(t, "capacity", "trap");
    const auto kind = t.value("kind", std::string("executable"));
    if (kind == "executable") {
      ts.kind = TrapKind::Executable;
    } else if (kind == "storage") {
      ts.kind = TrapKind::Storage;
    } else {
      throw ParseError("trap " + std::to_string(ts.id) + ": unknown kind '" + kind + "'");
    }
    if (t.contains("ends")) {
      const auto& ends = t["ends"];
      if (!ends.is_array() || ends.size() != 2) {
        throw ParseError("trap " + std::to_string(ts.id) + ": 'ends' must have two entries");
      }
      for (std::size_t e = 0; e < 2; ++e) {
        if (ends[e].is_number_integer()) {
          ts.ends[e] = ends[e].get<int>();
        } else if (!ends[e].is_null()) {
          throw ParseError("trap " + std::to_string(ts.id) + ": end must be a segment id or null");
        }
      }
    }
    spec.traps.push_back(ts);
  }
  for (const auto& jn : j.value("junctions", json::array())) {
    spec.junctions.push_back(
        {field<int>(jn, "id", "junction"), field<std::vector<int>>(jn, "segments", "junction")});
  }
  for (const auto& s : j.value("segments", json::array())) {
    spec.segments.push_back({field<int>(s, "id", "segment")});
  }
  return spec;
}

json to_json(const TimingModel& t) {
  return {{"split", t.split},         {"merge", t.merge},     {"move", t.move},
          {"inner_swap", t.inner_swap}, {"gate_1q", t.gate_1q}, {"gate_2q", t.gate_2q}};
}

TimingModel timing_from_json(const json& j) {
  if (!j.is_object()) {
    throw ParseError("timing: expected a JSON object");
  }
  TimingModel t;
  auto read = [&](const char* key, double& out) {
    if (j.contains(key)) {
      if (!j[key].is_number()) {
        throw ParseError(std::string("timing: '") + key + "' must be a number");
      }
      out = j[key].get<double>();
    }
  };
  read("split", t.split);
  read("merge", t.merge);
  read("move", t.move);
  read("inner_swap", t.inner_swap);
  read("gate_1q", t.gate_1q);
  read("gate_2q", t.gate_2q);
  return t;
}

json to_json(const ScheduleStats& s) {
  json j;
  j["schema"] = kStatsSchema;
  j["makespan_us"] = s.makespan;
  j["shuttle_time_us"] = s.makespan;
  j["shuttle_total_us"] = s.shuttle_total;
  j["transport_total_us"] = s.transport_total;
  j["gate_total_us"] = s.gate_total;
  j["sp"] = s.sp;
  j["gate_parallelism"] = s.gate_parallelism;
  j["events"] = s.events;
  for (const auto& [kind, n] : s.counts) {
    j["count_" + kind] = n;
  }
  return j;
}

std::string write_trace(const Trace& trace, const PositionGraph& g) {
  json j;
  j["schema"] = kTraceSchema;
  j["arch"] = trace.arch;
  j["k"] = trace.k;
  j["timing"] = to_json(trace.timing);
  j["num_qubits"] = trace.num_qubits;
  auto& layout = j["initial_layout"] = json::array();
  for (NodeId n : trace.initial_layout) {
    layout.push_back(node_json(g, n));
  }
  j["makespan"] = trace.schedule.makespan;
  auto& events = j["events"] = json::array();
  for (const auto& ev : trace.schedule.events) {
    json e;
    e["t_start"] = ev.start;
    e["t_end"] = ev.end;
    if (const auto* m = std::get_if<Move>(&ev.instr)) {
      e["kind"] = to_string(m->kind);
      json qubits = json::array({m->qubit});
      if (m->kind == MoveKind::InnerSwap) {
        qubits.push_back(m->other);
      }
      e["qubits"] = qubits;
      e["from"] = node_json(g, m->from);
      e["to"] = node_json(g, m->to);
    } else {
      const auto& ex = std::get<ExecuteBlock>(ev.instr);
      e["kind"] = "execute";
      e["block"] = ex.block;
      e["trap"] = ex.trap;
      e["perm"] = ex.perm;
    }
    events.push_back(std::move(e));
  }
  return j.dump(1) + "\n";
}

Trace read_trace(std::string_view text, const PositionGraph& g) {
  const json j = parse_json(text);
  check_schema(j, kTraceSchema);
  Trace t;
  t.arch = j.value("arch", std::string());
  t.k = j.value("k", 0);
  if (j.contains("timing")) {
    t.timing = timing_from_json(j["timing"]);
  }
  for (const auto& n : j.value("initial_layout", json::array())) {
    if (!n.is_string()) {
      throw ParseError("trace: initial_layout entries must be node names");
    }
    t.initial_layout.push_back(node_by_name(g, n.get<std::string>()));
  }
  t.num_qubits = j.value("num_qubits", static_cast<int>(t.initial_layout.size()));
  if (t.num_qubits != static_cast<int>(t.initial_layout.size())) {
    throw ParseError("trace: initial_layout does not cover num_qubits");
  }
  const auto events = j.value("events", json::array());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    const std::string where = "trace event " + std::to_string(i);
    TimedEvent out;
    out.start = field<double>(ev, "t_start", where);
    out.end = field<double>(ev, "t_end", where);
    const auto kind = field<std::string>(ev, "kind", where);
    if (kind == "execute") {
      out.instr = ExecuteBlock{field<int>(ev, "block", where), field<int>(ev, "trap", where),
                               field<std::vector<QubitId>>(ev, "perm", where)};
    } else {
      const auto mk = parse_move_kind(kind);
      if (!mk) {
        throw ParseError(where + ": unknown kind '" + kind + "'");
      }
      const auto qubits = field<std::vector<QubitId>>(ev, "qubits", where);
      const std::size_t want = *mk == MoveKind::InnerSwap ? 2 : 1;
      if (qubits.size() != want) {
        throw ParseError(where + ": " + kind + " needs " + std::to_string(want) + " qubit(s)");
      }
      for (QubitId q : qubits) {
        if (q < 0 || q >= t.num_qubits) {
          throw ParseError(where + ": qubit " + std::to_string(q) + " out of range");
        }
      }
      Move m{*mk, node_field(ev, "from", g, where), node_field(ev, "to", g, where), qubits[0],
             want == 2 ? qubits[1] : kNoQubit};
      out.instr = m;
    }
    fill_resources(out, g);
    t.schedule.makespan = std::max(t.schedule.makespan, out.end);
    t.schedule.events.push_back(std::move(out));
  }
  return t;
}

} // namespace ionroute
