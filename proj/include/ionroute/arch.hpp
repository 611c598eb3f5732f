#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ionroute {

using NodeId = std::int32_t;
using QubitId = std::int32_t;
inline constexpr NodeId kNoNode = -1;
inline constexpr QubitId kNoQubit = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class TrapKind : std::uint8_t { Executable, Storage };

struct TrapSpec {
  int id = 0;
  int capacity = 1;
  TrapKind kind = TrapKind::Executable;
  /// Segment attached to slot 0 and to slot capacity-1 respectively.
  std::array<std::optional<int>, 2> ends{};
};

struct JunctionSpec {
  int id = 0;
  std::vector<int> segments;
};

struct SegmentSpec {
  int id = 0;
};

/// Declarative QCCD device. Segment endpoints are implied by the trap ends
/// and junctions that name them.
struct ArchitectureSpec {
  std::string name;
  std::vector<TrapSpec> traps;
  std::vector<JunctionSpec> junctions;
  std::vector<SegmentSpec> segments;

  /// Throws ArchitectureError on the first broken invariant.
  void validate() const;

  [[nodiscard]] int total_capacity() const;
};

/// Shuttle and gate durations in microseconds.
struct TimingModel {
  double split = 80.0;
  double merge = 80.0;
  double move = 100.0;
  double inner_swap = 120.0;
  double gate_1q = 30.0;
  double gate_2q = 100.0;

  void validate() const;

  static TimingModel unit();
};

enum class NodeKind : std::uint8_t { TrapSlot, Segment };
enum class EdgeLabel : std::uint8_t { Swap, MergeSplit, Move };

[[nodiscard]] std::string_view to_string(EdgeLabel label);
[[nodiscard]] std::string_view to_string(TrapKind kind);

struct Node {
  NodeKind kind = NodeKind::TrapSlot;
  int trap = -1;    // trap index, TrapSlot only
  int slot = -1;    // TrapSlot only
  int segment = -1; // segment index, Segment only
};

struct Edge {
  NodeId u = kNoNode;
  NodeId v = kNoNode;
  EdgeLabel label = EdgeLabel::Swap;
  int junction = -1; // junction index for Move edges
};

struct Adjacent {
  NodeId node;
  std::size_t edge;
};

struct Trap {
  int id = 0;
  int capacity = 0;
  TrapKind kind = TrapKind::Executable;
  NodeId first = kNoNode;
  /// Segment index attached at slot 0 / slot capacity-1, -1 if none.
  std::array<int, 2> end_segment{-1, -1};

  [[nodiscard]] NodeId slot(int i) const { return first + i; }
  [[nodiscard]] NodeId end_slot(int end) const {
    return end == 0 ? first : first + capacity - 1;
  }
  [[nodiscard]] bool executable() const { return kind == TrapKind::Executable; }
};

struct Segment {
  int id = 0;
  NodeId node = kNoNode;
};

struct Junction {
  int id = 0;
  std::vector<NodeId> segment_nodes;
};

/// Ion positions (trap slots, then segments) with labeled transitions.
/// Immutable after construction.
class PositionGraph {
public:
  PositionGraph() = default;

  [[nodiscard]] std::size_t num_nodes() const { return nodes_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] const Node& node(NodeId n) const { return nodes_[n]; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(std::size_t e) const { return edges_[e]; }
  [[nodiscard]] std::span<const Adjacent> neighbors(NodeId n) const {
    return adjacency_[n];
  }
  [[nodiscard]] std::optional<std::size_t> find_edge(NodeId u, NodeId v) const;

  [[nodiscard]] const std::vector<Trap>& traps() const { return traps_; }
  [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }
  [[nodiscard]] const std::vector<Junction>& junctions() const { return junctions_; }

  [[nodiscard]] bool is_segment(NodeId n) const {
    return nodes_[n].kind == NodeKind::Segment;
  }
  [[nodiscard]] bool is_trap_slot(NodeId n) const {
    return nodes_[n].kind == NodeKind::TrapSlot;
  }
  /// Trap index of a slot node, -1 for segments.
  [[nodiscard]] int trap_of(NodeId n) const { return nodes_[n].trap; }
  /// True for slot 0 / slot n-1 of a trap when a segment is attached there.
  [[nodiscard]] bool is_attached_end(NodeId n) const;
  [[nodiscard]] bool is_end_slot(NodeId n) const;

  [[nodiscard]] int max_executable_capacity() const;
  [[nodiscard]] int total_trap_slots() const;
  [[nodiscard]] std::size_t num_segment_nodes() const { return segments_.size(); }

  [[nodiscard]] std::string node_name(NodeId n) const;

  friend PositionGraph build_position_graph(const ArchitectureSpec& spec);

private:
  void add_edge(NodeId u, NodeId v, EdgeLabel label, int junction);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::vector<Trap> traps_;
  std::vector<Segment> segments_;
  std::vector<Junction> junctions_;
};

/// Nodes: traps in id order (slots 0..n-1), then segments in id order.
/// A segment shared by two junctions is one node in both cliques.
[[nodiscard]] PositionGraph build_position_graph(const ArchitectureSpec& spec);

[[nodiscard]] double edge_duration(EdgeLabel label, const TimingModel& timing);

/// Dense |V|x|V| matrix of minimal shuttle durations.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, kInfinity) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double operator()(NodeId u, NodeId v) const {
    return d_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
  }
  double& at(NodeId u, NodeId v) {
    return d_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
  }

private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Floyd-Warshall over label-dependent weights; merge/split edges use
/// max(split, merge).
[[nodiscard]] DistanceMatrix all_pairs_shuttle_cost(const PositionGraph& g,
                                                    const TimingModel& timing);

/// min over executable traps with a free slot of min over the free slots s of
/// D[p][s]; +inf if every executable trap is full. `occupancy` maps node to
/// qubit or kNoQubit.
[[nodiscard]] double nearest_free_trap_distance(NodeId p,
                                                std::span<const QubitId> occupancy,
                                                const PositionGraph& g,
                                                const DistanceMatrix& dist);

/// "H", "G2x3" or "MINI" with `capacity` slots per trap.
[[nodiscard]] ArchitectureSpec preset(std::string_view name, int capacity);

} // namespace ionroute
