#include "ionroute/arch.hpp"

#include "ionroute/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ionroute {

namespace {

struct Endpoint {
  enum class Kind { TrapEnd, Junction } kind;
  int owner; // trap id or junction id
  int end;   // 0/1 for trap ends
};

std::string describe(const Endpoint& ep) {
  std::ostringstream ss;
  if (ep.kind == Endpoint::Kind::TrapEnd) {
    ss << "trap " << ep.owner << " end " << ep.end;
  } else {
    ss << "junction " << ep.owner;
  }
  return ss.str();
}

} // namespace

std::string_view to_string(EdgeLabel label) {
  switch (label) {
  case EdgeLabel::Swap:
    return "swap";
  case EdgeLabel::MergeSplit:
    return "merge_split";
  case EdgeLabel::Move:
    return "move";
  }
  return "?";
}

std::string_view to_string(TrapKind kind) {
  return kind == TrapKind::Executable ? "executable" : "storage";
}

int ArchitectureSpec::total_capacity() const {
  return std::accumulate(traps.begin(), traps.end(), 0,
                         [](int acc, const TrapSpec& t) { return acc + t.capacity; });
}

void ArchitectureSpec::validate() const {
  if (traps.empty()) {
    throw ArchitectureError("architecture has no traps");
  }
  std::set<int> trap_ids;
  std::set<int> junction_ids;
  std::set<int> segment_ids;
  for (const auto& t : traps) {
    if (!trap_ids.insert(t.id).second) {
      throw ArchitectureError("duplicate trap id " + std::to_string(t.id));
    }
    if (t.capacity < 1) {
      throw ArchitectureError("trap " + std::to_string(t.id) +
                              " has capacity < 1");
    }
  }
  for (const auto& j : junctions) {
    if (!junction_ids.insert(j.id).second) {
      throw ArchitectureError("duplicate junction id " + std::to_string(j.id));
    }
  }
  for (const auto& s : segments) {
    if (!segment_ids.insert(s.id).second) {
      throw ArchitectureError("duplicate segment id " + std::to_string(s.id));
    }
  }

  std::map<int, std::vector<Endpoint>> endpoints;
  for (int id : segment_ids) {
    endpoints[id];
  }
  auto attach = [&](int seg, Endpoint ep) {
    auto it = endpoints.find(seg);
    if (it == endpoints.end()) {
      throw ArchitectureError(describe(ep) + " references unknown segment " +
                              std::to_string(seg));
    }
    it->second.push_back(ep);
  };
  for (const auto& t : traps) {
    for (int end = 0; end < 2; ++end) {
      if (t.ends[end]) {
        attach(*t.ends[end], {Endpoint::Kind::TrapEnd, t.id, end});
      }
    }
  }
  for (const auto& j : junctions) {
    if (j.segments.size() < 2) {
      throw ArchitectureError("junction " + std::to_string(j.id) +
                              " has degree < 2");
    }
    std::set<int> seen;
    for (int s : j.segments) {
      if (!seen.insert(s).second) {
        throw ArchitectureError("junction " + std::to_string(j.id) +
                                " attaches segment " + std::to_string(s) +
                                " twice");
      }
      attach(s, {Endpoint::Kind::Junction, j.id, 0});
    }
  }
  for (const auto& [seg, eps] : endpoints) {
    if (eps.size() != 2) {
      throw ArchitectureError("segment " + std::to_string(seg) + " has " +
                              std::to_string(eps.size()) +
                              " endpoints, expected 2");
    }
    if (eps[0].kind == eps[1].kind && eps[0].owner == eps[1].owner) {
      throw ArchitectureError("segment " + std::to_string(seg) +
                              " connects " + describe(eps[0]) + " to itself");
    }
  }
  if (std::none_of(traps.begin(), traps.end(), [](const TrapSpec& t) {
        return t.kind == TrapKind::Executable;
      })) {
    throw ArchitectureError("architecture has no executable trap");
  }

  // Connectivity over traps and junctions, segments as edges.
  std::map<std::pair<int, int>, int> vertex; // (kind, id) -> index
  for (const auto& t : traps) {
    vertex.emplace(std::pair{0, t.id}, static_cast<int>(vertex.size()));
  }
  for (const auto& j : junctions) {
    vertex.emplace(std::pair{1, j.id}, static_cast<int>(vertex.size()));
  }
  std::vector<int> parent(vertex.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      x = parent[x] = parent[parent[x]];
    }
    return x;
  };
  for (const auto& [seg, eps] : endpoints) {
    auto key = [](const Endpoint& ep) {
      return std::pair{ep.kind == Endpoint::Kind::TrapEnd ? 0 : 1, ep.owner};
    };
    parent[find(vertex.at(key(eps[0])))] = find(vertex.at(key(eps[1])));
  }
  const int root = find(0);
  for (std::size_t i = 1; i < parent.size(); ++i) {
    if (find(static_cast<int>(i)) != root) {
      throw ArchitectureError("device graph is not connected");
    }
  }
}

void TimingModel::validate() const {
  for (double d : {split, merge, move, inner_swap, gate_1q, gate_2q}) {
    if (!(d > 0.0)) {
      throw ArchitectureError("timing durations must be > 0");
    }
  }
}

TimingModel TimingModel::unit() {
  return TimingModel{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
}

std::optional<std::size_t> PositionGraph::find_edge(NodeId u, NodeId v) const {
  for (const auto& a : adjacency_[u]) {
    if (a.node == v) {
      return a.edge;
    }
  }
  return std::nullopt;
}

bool PositionGraph::is_end_slot(NodeId n) const {
  const auto& nd = nodes_[n];
  if (nd.kind != NodeKind::TrapSlot) {
    return false;
  }
  return nd.slot == 0 || nd.slot == traps_[nd.trap].capacity - 1;
}

bool PositionGraph::is_attached_end(NodeId n) const {
  const auto& nd = nodes_[n];
  if (nd.kind != NodeKind::TrapSlot) {
    return false;
  }
  const auto& t = traps_[nd.trap];
  return (nd.slot == 0 && t.end_segment[0] >= 0) ||
         (nd.slot == t.capacity - 1 && t.end_segment[1] >= 0);
}

int PositionGraph::max_executable_capacity() const {
  int best = 0;
  for (const auto& t : traps_) {
    if (t.executable()) {
      best = std::max(best, t.capacity);
    }
  }
  return best;
}

int PositionGraph::total_trap_slots() const {
  int total = 0;
  for (const auto& t : traps_) {
    total += t.capacity;
  }
  return total;
}

std::string PositionGraph::node_name(NodeId n) const {
  const auto& nd = nodes_[n];
  if (nd.kind == NodeKind::Segment) {
    return "seg" + std::to_string(segments_[nd.segment].id);
  }
  return "t" + std::to_string(traps_[nd.trap].id) + "s" + std::to_string(nd.slot);
}

void PositionGraph::add_edge(NodeId u, NodeId v, EdgeLabel label, int junction) {
  if (u == v || find_edge(u, v)) {
    return;
  }
  if (u > v) {
    std::swap(u, v);
  }
  const std::size_t idx = edges_.size();
  edges_.push_back({u, v, label, junction});
  adjacency_[u].push_back({v, idx});
  adjacency_[v].push_back({u, idx});
}

PositionGraph build_position_graph(const ArchitectureSpec& spec) {
  spec.validate();
  PositionGraph g;

  auto traps = spec.traps;
  std::sort(traps.begin(), traps.end(),
            [](const TrapSpec& a, const TrapSpec& b) { return a.id < b.id; });
  auto segments = spec.segments;
  std::sort(segments.begin(), segments.end(),
            [](const SegmentSpec& a, const SegmentSpec& b) { return a.id < b.id; });
  auto junctions = spec.junctions;
  std::sort(junctions.begin(), junctions.end(),
            [](const JunctionSpec& a, const JunctionSpec& b) { return a.id < b.id; });

  std::map<int, int> segment_index;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    segment_index[segments[i].id] = static_cast<int>(i);
  }

  for (std::size_t ti = 0; ti < traps.size(); ++ti) {
    const auto& ts = traps[ti];
    Trap t;
    t.id = ts.id;
    t.capacity = ts.capacity;
    t.kind = ts.kind;
    t.first = static_cast<NodeId>(g.nodes_.size());
    for (int end = 0; end < 2; ++end) {
      t.end_segment[end] = ts.ends[end] ? segment_index.at(*ts.ends[end]) : -1;
    }
    for (int s = 0; s < ts.capacity; ++s) {
      g.nodes_.push_back({NodeKind::TrapSlot, static_cast<int>(ti), s, -1});
    }
    g.traps_.push_back(t);
  }
  for (std::size_t si = 0; si < segments.size(); ++si) {
    g.segments_.push_back({segments[si].id, static_cast<NodeId>(g.nodes_.size())});
    g.nodes_.push_back({NodeKind::Segment, -1, -1, static_cast<int>(si)});
  }
  g.adjacency_.resize(g.nodes_.size());

  for (const auto& t : g.traps_) {
    for (int s = 0; s + 1 < t.capacity; ++s) {
      g.add_edge(t.slot(s), t.slot(s + 1), EdgeLabel::Swap, -1);
    }
  }
  for (std::size_t ji = 0; ji < junctions.size(); ++ji) {
    Junction j;
    j.id = junctions[ji].id;
    for (int s : junctions[ji].segments) {
      j.segment_nodes.push_back(g.segments_[segment_index.at(s)].node);
    }
    std::sort(j.segment_nodes.begin(), j.segment_nodes.end());
    for (std::size_t a = 0; a < j.segment_nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < j.segment_nodes.size(); ++b) {
        g.add_edge(j.segment_nodes[a], j.segment_nodes[b], EdgeLabel::Move,
                   static_cast<int>(ji));
      }
    }
    g.junctions_.push_back(std::move(j));
  }
  for (const auto& t : g.traps_) {
    for (int end = 0; end < 2; ++end) {
      if (t.end_segment[end] >= 0) {
        g.add_edge(t.end_slot(end), g.segments_[t.end_segment[end]].node,
                   EdgeLabel::MergeSplit, -1);
      }
    }
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Adjacent& a, const Adjacent& b) { return a.node < b.node; });
  }
  return g;
}

double edge_duration(EdgeLabel label, const TimingModel& timing) {
  switch (label) {
  case EdgeLabel::Swap:
    return timing.inner_swap;
  case EdgeLabel::MergeSplit:
    return std::max(timing.split, timing.merge);
  case EdgeLabel::Move:
    return timing.move;
  }
  return kInfinity;
}

DistanceMatrix all_pairs_shuttle_cost(const PositionGraph& g,
                                      const TimingModel& timing) {
  const auto n = static_cast<NodeId>(g.num_nodes());
  DistanceMatrix d(g.num_nodes());
  for (NodeId u = 0; u < n; ++u) {
    d.at(u, u) = 0.0;
  }
  for (const auto& e : g.edges()) {
    const double w = edge_duration(e.label, timing);
    d.at(e.u, e.v) = std::min(d(e.u, e.v), w);
    d.at(e.v, e.u) = std::min(d(e.v, e.u), w);
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      const double dik = d(i, k);
      if (dik == kInfinity) {
        continue;
      }
      for (NodeId j = 0; j < n; ++j) {
        const double cand = dik + d(k, j);
        if (cand < d(i, j)) {
          d.at(i, j) = cand;
        }
      }
    }
  }
  return d;
}

double nearest_free_trap_distance(NodeId p, std::span<const QubitId> occupancy,
                                  const PositionGraph& g,
                                  const DistanceMatrix& dist) {
  double best = kInfinity;
  for (const auto& t : g.traps()) {
    if (!t.executable()) {
      continue;
    }
    for (int s = 0; s < t.capacity; ++s) {
      const NodeId slot = t.slot(s);
      if (occupancy[slot] == kNoQubit) {
        best = std::min(best, dist(p, slot));
      }
    }
  }
  return best;
}

namespace {

TrapSpec trap(int id, int capacity, std::optional<int> end0, std::optional<int> end1) {
  return TrapSpec{id, capacity, TrapKind::Executable, {end0, end1}};
}

std::vector<SegmentSpec> segments(int count) {
  std::vector<SegmentSpec> out;
  for (int i = 0; i < count; ++i) {
    out.push_back({i});
  }
  return out;
}

} // namespace

ArchitectureSpec preset(std::string_view name, int capacity) {
  if (capacity < 1) {
    throw ArchitectureError("preset capacity must be >= 1");
  }
  ArchitectureSpec spec;
  spec.name = std::string(name);
  if (name == "H") {
    // Left column attaches at its right end, right column at its left end.
    spec.traps = {trap(0, capacity, std::nullopt, 0), trap(1, capacity, std::nullopt, 1),
                  trap(2, capacity, 2, std::nullopt), trap(3, capacity, 3, std::nullopt)};
    spec.junctions = {{0, {0, 1, 4}}, {1, {2, 3, 4}}};
    spec.segments = segments(5);
  } else if (name == "G2x3") {
    // Three columns of two traps; the middle junction is an X-junction.
    spec.traps = {trap(0, capacity, std::nullopt, 0), trap(1, capacity, std::nullopt, 1),
                  trap(2, capacity, 2, std::nullopt), trap(3, capacity, 3, std::nullopt),
                  trap(4, capacity, 4, std::nullopt), trap(5, capacity, 5, std::nullopt)};
    spec.junctions = {{0, {0, 1, 6}}, {1, {2, 3, 6, 7}}, {2, {4, 5, 7}}};
    spec.segments = segments(8);
  } else if (name == "MINI") {
    spec.traps = {trap(0, capacity, 0, std::nullopt), trap(1, capacity, 1, std::nullopt)};
    spec.junctions = {{0, {0, 1}}};
    spec.segments = segments(2);
  } else {
    throw ArchitectureError("unknown architecture preset '" + std::string(name) +
                            "' (expected H, G2x3 or MINI)");
  }
  return spec;
}

} // namespace ionroute
