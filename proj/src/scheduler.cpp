#include "ionroute/scheduler.hpp"

#include "ionroute/errors.hpp"
#include "ionroute/log.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ionroute {

void SearchConfig::validate() const {
  if (extended_weight < 0.0) {
    throw std::invalid_argument("extended-set weight must be >= 0");
  }
  if (cycle_window < 2) {
    throw std::invalid_argument("cycle window must be >= 2");
  }
  if (!(pushback_threshold > 0.0 && pushback_threshold <= 1.0)) {
    throw std::invalid_argument("push-back threshold must be in (0, 1]");
  }
  if (passes < 1) {
    throw std::invalid_argument("layout passes must be >= 1");
  }
  if (lookahead < 0 || max_depth < 0 || stall_limit < 0 || search_budget < 1) {
    throw std::invalid_argument("search limits must be non-negative");
  }
}

BlockCostOracle gate_count_oracle() {
  return [](const Block& block, std::span<const QubitId>) {
    return static_cast<double>(block.two_qubit_gates);
  };
}

BlockCostOracle table_oracle(std::map<std::pair<int, Permutation>, double> table,
                             BlockCostOracle fallback) {
  return [table = std::move(table), fallback = std::move(fallback)](
             const Block& block, std::span<const QubitId> perm) {
    const auto it = table.find({block.id, Permutation(perm.begin(), perm.end())});
    return it != table.end() ? it->second : fallback(block, perm);
  };
}

namespace {

std::vector<NodeId> free_executable_slots(const IonAssignment& phi, const PositionGraph& g) {
  std::vector<NodeId> out;
  for (const auto& t : g.traps()) {
    if (!t.executable()) {
      continue;
    }
    for (int s = 0; s < t.capacity; ++s) {
      if (!phi.occupied(t.slot(s))) {
        out.push_back(t.slot(s));
      }
    }
  }
  return out;
}

double block_term(const Block& b, const IonAssignment& phi, const DistanceMatrix& dist,
                  std::span<const NodeId> free_slots) {
  double widest = 0.0;
  for (std::size_t i = 0; i < b.qubits.size(); ++i) {
    for (std::size_t j = i + 1; j < b.qubits.size(); ++j) {
      widest = std::max(widest, dist(phi.position(b.qubits[i]), phi.position(b.qubits[j])));
    }
  }
  double to_trap = 0.0;
  for (QubitId q : b.qubits) {
    double nearest = kInfinity;
    for (NodeId s : free_slots) {
      nearest = std::min(nearest, dist(phi.position(q), s));
    }
    to_trap += nearest;
  }
  return widest + to_trap;
}

double layer_score(const BlockDag& dag, std::span<const int> layer, const IonAssignment& phi,
                   const DistanceMatrix& dist, std::span<const NodeId> free_slots) {
  double sum = 0.0;
  for (int b : layer) {
    sum += block_term(dag.block(b), phi, dist, free_slots);
  }
  return sum / static_cast<double>(layer.size());
}

} // namespace

double heuristic_score(const BlockDag& dag, std::span<const int> front,
                       std::span<const int> extended, const IonAssignment& phi,
                       const DistanceMatrix& dist, const PositionGraph& g,
                       double extended_weight) {
  if (front.empty()) {
    return 0.0;
  }
  const auto free_slots = free_executable_slots(phi, g);
  double score = layer_score(dag, front, phi, dist, free_slots);
  if (!extended.empty() && extended_weight > 0.0) {
    score += extended_weight * layer_score(dag, extended, phi, dist, free_slots);
  }
  return score;
}

Permutation select_permutation(const Block& block, const IonAssignment& phi,
                               const BlockCostOracle& oracle, const PermutationContext& ctx,
                               bool enabled) {
  Permutation perm = block.qubits;
  if (!enabled || perm.size() < 2) {
    return perm;
  }
  Permutation best = perm;
  double best_cost = kInfinity;
  double best_score = kInfinity;
  bool first = true;
  do {
    const double cost = oracle(block, perm);
    IonAssignment relabeled = phi;
    relabeled.relabel(block.qubits, perm);
    const double score =
        heuristic_score(ctx.dag, ctx.after.front, ctx.after.extended, relabeled, ctx.dist,
                        ctx.g, ctx.extended_weight);
    if (first || cost < best_cost || (cost == best_cost && score < best_score)) {
      best = perm;
      best_cost = cost;
      best_score = score;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

double transition_cost(const PositionGraph& g, const TimingModel& timing, NodeId from,
                       const Edge& e) {
  if (e.label == EdgeLabel::MergeSplit) {
    return g.is_segment(from) ? timing.merge : timing.split;
  }
  return edge_duration(e.label, timing);
}

/// Dijkstra from `from` to the first node accepted by `is_target`, only
/// entering nodes accepted by `passable`. Ties resolve by node id.
template <typename Target, typename Passable>
std::vector<NodeId> dijkstra_path(const PositionGraph& g, const TimingModel& timing,
                                  NodeId from, Target is_target, Passable passable) {
  const std::size_t n = g.num_nodes();
  std::vector<double> best(n, kInfinity);
  std::vector<NodeId> parent(n, kNoNode);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  best[from] = 0.0;
  open.emplace(0.0, from);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > best[u]) {
      continue;
    }
    if (u != from && is_target(u)) {
      std::vector<NodeId> path;
      for (NodeId v = u; v != kNoNode; v = parent[v]) {
        path.push_back(v);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& a : g.neighbors(u)) {
      if (!passable(a.node)) {
        continue;
      }
      const double nd = d + edge_duration(g.edge(a.edge).label, timing);
      if (nd < best[a.node]) {
        best[a.node] = nd;
        parent[a.node] = u;
        open.emplace(nd, a.node);
      }
    }
  }
  return {};
}

double path_cost(const PositionGraph& g, const TimingModel& timing,
                 std::span<const NodeId> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += edge_duration(g.edge(*g.find_edge(path[i - 1], path[i])).label, timing);
  }
  return total;
}

/// Mutable shuttling workspace shared by congestion resolution, eviction and
/// the escape walk.
class Shuttler {
public:
  Shuttler(const PositionGraph& g, IonAssignment& phi, std::vector<Move>& moves)
      : g_(g), phi_(phi), moves_(moves), pinned_(static_cast<std::size_t>(phi.num_qubits()), 0) {}

  void pin(QubitId q) { pinned_[q] = 1; }
  [[nodiscard]] bool pinned(QubitId q) const { return pinned_[q] != 0; }
  /// The ion currently being walked; exempt from its own pin.
  void set_mover(QubitId q) { mover_ = q; }

  /// Pinned ions never leave their trap.
  [[nodiscard]] bool may_go(NodeId from, NodeId to) const {
    const QubitId q = phi_.occupant(from);
    if (q == kNoQubit || q == mover_ || !pinned(q)) {
      return true;
    }
    return g_.is_trap_slot(from) && g_.trap_of(to) == g_.trap_of(from);
  }

  bool step(NodeId from, NodeId to) {
    if (!may_go(from, to)) {
      return false;
    }
    const auto mv = move_across(phi_, g_, from, to);
    if (!mv) {
      return false;
    }
    apply_move_in_place(phi_, *mv, g_);
    moves_.push_back(*mv);
    return true;
  }

  bool resolve(NodeId p1, NodeId p2, std::span<const NodeId> path, int depth,
               NodeId keep = kNoNode) {
    std::vector<NodeId> visiting{p1};
    if (keep != kNoNode) {
      visiting.push_back(keep);
    }
    return resolve_rec(p1, p2, path, depth, visiting);
  }

private:
  static bool contains(std::span<const NodeId> nodes, NodeId n) {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
  }

  bool resolve_rec(NodeId p1, NodeId p2, std::span<const NodeId> path, int depth,
                   std::vector<NodeId>& visiting) {
    const auto e = g_.find_edge(p1, p2);
    if (!phi_.occupied(p2) || (e && g_.edge(*e).label == EdgeLabel::Swap)) {
      return step(p1, p2);
    }
    for (const auto& a : g_.neighbors(p2)) {
      const NodeId p = a.node;
      if (p == p1 || phi_.occupied(p) || contains(path, p) || contains(visiting, p)) {
        continue;
      }
      if (step(p2, p)) {
        return step(p1, p2);
      }
    }
    if (depth <= 0) {
      return false;
    }
    visiting.push_back(p2);
    std::vector<NodeId> blocked;
    for (const auto& a : g_.neighbors(p2)) {
      const NodeId p = a.node;
      if (phi_.occupied(p) && !contains(visiting, p) && may_go(p2, p)) {
        blocked.push_back(p);
      }
    }
    std::stable_partition(blocked.begin(), blocked.end(),
                          [&](NodeId p) { return !contains(path, p); });
    for (NodeId p : blocked) {
      if (resolve_rec(p2, p, path, depth - 1, visiting)) {
        visiting.pop_back();
        return step(p1, p2);
      }
    }
    visiting.pop_back();
    return false;
  }

  const PositionGraph& g_;
  IonAssignment& phi_;
  std::vector<Move>& moves_;
  std::vector<char> pinned_;
  QubitId mover_ = kNoQubit;
};

int free_slot_count(const IonAssignment& phi, const Trap& t) {
  int free = 0;
  for (int s = 0; s < t.capacity; ++s) {
    free += phi.occupied(t.slot(s)) ? 0 : 1;
  }
  return free;
}

double segment_occupancy(const IonAssignment& phi, const PositionGraph& g) {
  if (g.segments().empty()) {
    return 0.0;
  }
  int busy = 0;
  for (const auto& s : g.segments()) {
    busy += phi.occupied(s.node) ? 1 : 0;
  }
  return static_cast<double>(busy) / static_cast<double>(g.segments().size());
}

int occupied_count(const IonAssignment& phi, std::span<const NodeId> path) {
  int busy = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    busy += phi.occupied(path[i]) ? 1 : 0;
  }
  return busy;
}

void append(ShuttleResult& into, const ShuttleResult& from) {
  into.moves.insert(into.moves.end(), from.moves.begin(), from.moves.end());
  into.phi = from.phi;
}

} // namespace

std::vector<NodeId> shortest_path_to_trap(const PositionGraph& g, const TimingModel& timing,
                                          NodeId from, int trap) {
  if (g.trap_of(from) == trap) {
    return {from};
  }
  return dijkstra_path(
      g, timing, from, [&](NodeId n) { return g.trap_of(n) == trap; },
      [](NodeId) { return true; });
}

ShuttleResult resolve_congestion(NodeId p1, NodeId p2, std::span<const NodeId> path,
                                 const IonAssignment& phi, const PositionGraph& g, int depth,
                                 std::span<const QubitId> pinned) {
  ShuttleResult r{false, {}, phi};
  Shuttler sh(g, r.phi, r.moves);
  for (QubitId q : pinned) {
    sh.pin(q);
  }
  r.resolved = sh.resolve(p1, p2, path, depth);
  if (!r.resolved) {
    r.moves.clear();
    r.phi = phi;
  }
  return r;
}

ShuttleResult push_back(const IonAssignment& phi, const PositionGraph& g,
                        const TimingModel& timing) {
  ShuttleResult r{true, {}, phi};
  Shuttler sh(g, r.phi, r.moves);
  while (true) {
    std::vector<NodeId> best_path;
    double best_cost = kInfinity;
    for (const auto& s : g.segments()) {
      if (!r.phi.occupied(s.node)) {
        continue;
      }
      auto path = dijkstra_path(
          g, timing, s.node, [&](NodeId n) { return g.is_trap_slot(n); },
          [&](NodeId n) { return !r.phi.occupied(n); });
      if (path.empty()) {
        continue;
      }
      const double cost = path_cost(g, timing, path);
      if (cost < best_cost) {
        best_cost = cost;
        best_path = std::move(path);
      }
    }
    if (best_path.empty()) {
      break;
    }
    for (std::size_t i = 1; i < best_path.size(); ++i) {
      sh.step(best_path[i - 1], best_path[i]);
    }
    // Make room behind: walk the ion inward while the next slot is free.
    NodeId at = best_path.back();
    const Trap& t = g.traps()[g.trap_of(at)];
    const int dir = g.node(at).slot == 0 ? 1 : -1;
    while (true) {
      const int next = g.node(at).slot + dir;
      if (next < 0 || next >= t.capacity || r.phi.occupied(t.slot(next))) {
        break;
      }
      sh.step(at, t.slot(next));
      at = t.slot(next);
    }
  }
  return r;
}

namespace {

struct TrapChoice {
  int trap = -1;
  double cost = kInfinity;
};

double approach_cost(const IonAssignment& phi, const PositionGraph& g, const TimingModel& timing,
                     QubitId q, int trap) {
  const auto path = shortest_path_to_trap(g, timing, phi.position(q), trap);
  if (path.empty()) {
    return kInfinity;
  }
  return path_cost(g, timing, path) + timing.inner_swap * occupied_count(phi, path);
}

TrapChoice choose_trap(const Block& block, const IonAssignment& phi, const PositionGraph& g,
                       const TimingModel& timing) {
  TrapChoice best;
  for (std::size_t t = 0; t < g.traps().size(); ++t) {
    const auto& trap = g.traps()[t];
    if (!trap.executable() || trap.capacity < block.width()) {
      continue;
    }
    double cost = 0.0;
    for (QubitId q : block.qubits) {
      cost += approach_cost(phi, g, timing, q, static_cast<int>(t));
    }
    if (cost < best.cost) {
      best = {static_cast<int>(t), cost};
    }
  }
  return best;
}

/// Bring a non-pinned ion of the full trap to the entry slot and push it
/// onto the adjacent path node.
bool evict(Shuttler& sh, IonAssignment& phi, const Trap& trap,
           std::span<const NodeId> path, int depth) {
  const NodeId entry = path.back();
  const NodeId outside = path[path.size() - 2];
  NodeId victim = kNoNode;
  int best_gap = trap.capacity + 1;
  for (int s = 0; s < trap.capacity; ++s) {
    const QubitId q = phi.occupant(trap.slot(s));
    const int gap = std::abs(trap.slot(s) - entry);
    if (q != kNoQubit && !sh.pinned(q) && gap < best_gap) {
      best_gap = gap;
      victim = trap.slot(s);
    }
  }
  if (victim == kNoNode) {
    return false;
  }
  while (victim != entry) {
    const NodeId next = victim < entry ? victim + 1 : victim - 1;
    if (!sh.step(victim, next)) {
      return false;
    }
    victim = next;
  }
  return sh.resolve(entry, outside, path, depth, path.front());
}

} // namespace

ShuttleResult escape_local_minimum(const Block& block, const IonAssignment& phi,
                                   const PositionGraph& g, const DistanceMatrix& dist,
                                   const TimingModel& timing, const SearchConfig& cfg) {
  (void)dist;
  ShuttleResult r{false, {}, phi};
  if (executable_trap(r.phi, block.qubits, g)) {
    r.resolved = true;
    return r;
  }
  const int depth =
      cfg.max_depth > 0 ? cfg.max_depth : static_cast<int>(g.num_segment_nodes());
  if (segment_occupancy(r.phi, g) > cfg.pushback_threshold) {
    append(r, push_back(r.phi, g, timing));
  }
  const TrapChoice choice = choose_trap(block, r.phi, g, timing);
  if (choice.trap < 0 || choice.cost == kInfinity) {
    return r;
  }
  const Trap& target = g.traps()[choice.trap];

  std::vector<std::pair<double, QubitId>> order;
  for (QubitId q : block.qubits) {
    if (g.trap_of(r.phi.position(q)) != choice.trap) {
      order.emplace_back(approach_cost(r.phi, g, timing, q, choice.trap), q);
    }
  }
  std::sort(order.begin(), order.end());

  Shuttler sh(g, r.phi, r.moves);
  for (QubitId q : block.qubits) {
    if (g.trap_of(r.phi.position(q)) == choice.trap) {
      sh.pin(q);
    }
  }
  for (const auto& [cost, q] : order) {
    (void)cost;
    sh.pin(q);
    sh.set_mover(q);
    if (g.trap_of(r.phi.position(q)) == choice.trap) {
      continue;
    }
    auto path = shortest_path_to_trap(g, timing, r.phi.position(q), choice.trap);
    if (path.size() < 2) {
      return r;
    }
    if (free_slot_count(r.phi, target) == 0) {
      if (path.size() == 2) {
        // Standing right at the entry: step aside so the evicted ion has
        // somewhere to go.
        bool stepped = false;
        for (const auto& a : g.neighbors(path[0])) {
          if (a.node != path[1] && !r.phi.occupied(a.node) && sh.step(path[0], a.node)) {
            stepped = true;
            break;
          }
        }
        if (!stepped) {
          return r;
        }
        path = shortest_path_to_trap(g, timing, r.phi.position(q), choice.trap);
      }
      if (!evict(sh, r.phi, target, path, depth)) {
        return r;
      }
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
      const NodeId here = r.phi.position(q);
      if (here != path[i - 1]) {
        return r;
      }
      if (!sh.step(here, path[i]) && !sh.resolve(here, path[i], path, depth)) {
        return r;
      }
    }
  }
  r.resolved = executable_trap(r.phi, block.qubits, g).has_value();
  return r;
}

ShuttleResult gather_search(const Block& block, const IonAssignment& phi,
                            const PositionGraph& g, const DistanceMatrix& dist,
                            const TimingModel& timing, int budget) {
  ShuttleResult r{false, {}, phi};
  const std::size_t n = g.num_nodes();
  std::vector<int> eligible;
  for (std::size_t t = 0; t < g.traps().size(); ++t) {
    const auto& trap = g.traps()[t];
    if (trap.executable() && trap.capacity >= block.width()) {
      eligible.push_back(static_cast<int>(t));
    }
  }
  if (eligible.empty()) {
    return r;
  }
  // to_trap[k][v]: distance from node v to the closest slot of eligible[k].
  std::vector<std::vector<double>> to_trap(eligible.size(), std::vector<double>(n, kInfinity));
  for (std::size_t k = 0; k < eligible.size(); ++k) {
    const auto& trap = g.traps()[eligible[k]];
    for (std::size_t v = 0; v < n; ++v) {
      for (int s = 0; s < trap.capacity; ++s) {
        to_trap[k][v] = std::min(to_trap[k][v], dist(static_cast<NodeId>(v), trap.slot(s)));
      }
    }
  }

  using State = std::string; // per node: 0 empty, 1 other ion, 2+i block qubit i
  State start(n, '\0');
  for (QubitId q = 0; q < phi.num_qubits(); ++q) {
    start[phi.position(q)] = 1;
  }
  for (std::size_t i = 0; i < block.qubits.size(); ++i) {
    start[phi.position(block.qubits[i])] = static_cast<char>(2 + i);
  }

  // Block qubits' distances to the trap, plus one split for every other ion
  // that has to leave it to make room.
  const double leave_cost = std::min(timing.split, timing.merge);
  auto heuristic = [&](const State& s) {
    double best = kInfinity;
    for (std::size_t k = 0; k < eligible.size(); ++k) {
      double sum = 0.0;
      for (std::size_t v = 0; v < n; ++v) {
        if (s[v] >= 2) {
          sum += to_trap[k][v];
        }
      }
      const auto& trap = g.traps()[eligible[k]];
      int others = 0;
      for (int i = 0; i < trap.capacity; ++i) {
        others += s[trap.slot(i)] == 1 ? 1 : 0;
      }
      sum += leave_cost * std::max(0, others + block.width() - trap.capacity);
      best = std::min(best, sum);
    }
    return best;
  };
  auto is_goal = [&](const State& s) {
    int trap = -2;
    for (std::size_t v = 0; v < n; ++v) {
      if (s[v] >= 2) {
        const int t = g.trap_of(static_cast<NodeId>(v));
        if (t < 0 || (trap != -2 && t != trap)) {
          return false;
        }
        trap = t;
      }
    }
    return trap >= 0 && g.traps()[trap].executable();
  };

  struct Record {
    int parent;
    NodeId from;
    NodeId to;
    double cost;
  };
  std::vector<Record> records;
  std::vector<State> states;
  std::unordered_map<State, int> seen;
  using Entry = std::tuple<double, double, int>; // f, -g, record index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  records.push_back({-1, kNoNode, kNoNode, 0.0});
  states.push_back(start);
  seen.emplace(start, 0);
  // Weighted A*: any gathering plan will do, so trade optimality for speed.
  constexpr double kWeight = 4.0;
  open.emplace(kWeight * heuristic(start), 0.0, 0);

  int goal = -1;
  int expansions = 0;
  while (!open.empty() && expansions < budget) {
    const auto [f, neg_g, idx] = open.top();
    open.pop();
    const double cost = records[idx].cost;
    if (-neg_g > cost) {
      continue;
    }
    const State s = states[idx];
    if (is_goal(s)) {
      goal = idx;
      break;
    }
    ++expansions;
    for (const auto& e : g.edges()) {
      const char lu = s[e.u];
      const char lv = s[e.v];
      NodeId from = kNoNode;
      NodeId to = kNoNode;
      if (lu != 0 && lv == 0) {
        from = e.u;
        to = e.v;
      } else if (lv != 0 && lu == 0) {
        from = e.v;
        to = e.u;
      } else if (lu != 0 && lv != 0 && lu != lv && e.label == EdgeLabel::Swap) {
        from = e.u;
        to = e.v;
      } else {
        continue;
      }
      State next = s;
      std::swap(next[from], next[to]);
      const double step = transition_cost(g, timing, from, e);
      const double ncost = cost + step;
      const auto it = seen.find(next);
      if (it != seen.end() && records[it->second].cost <= ncost) {
        continue;
      }
      const int nidx = static_cast<int>(records.size());
      records.push_back({idx, from, to, ncost});
      const double h = heuristic(next);
      seen[next] = nidx;
      states.push_back(std::move(next));
      open.emplace(ncost + kWeight * h, -ncost, nidx);
    }
  }
  if (goal < 0) {
    return r;
  }
  std::vector<std::pair<NodeId, NodeId>> steps;
  for (int i = goal; records[i].parent >= 0; i = records[i].parent) {
    steps.emplace_back(records[i].from, records[i].to);
  }
  std::reverse(steps.begin(), steps.end());
  for (const auto& [from, to] : steps) {
    const auto mv = move_across(r.phi, g, from, to);
    apply_move_in_place(r.phi, *mv, g);
    r.moves.push_back(*mv);
  }
  r.resolved = executable_trap(r.phi, block.qubits, g).has_value();
  return r;
}

namespace {

constexpr int kQuickSearchBudget = 2000;

double total_cost(const std::vector<Move>& moves, const TimingModel& timing) {
  double c = 0.0;
  for (const auto& m : moves) {
    c += move_duration(m.kind, timing);
  }
  return c;
}

double pairwise_spread(const Block& b, const IonAssignment& phi, const DistanceMatrix& dist) {
  double total = 0.0;
  for (std::size_t i = 0; i < b.qubits.size(); ++i) {
    for (std::size_t j = i + 1; j < b.qubits.size(); ++j) {
      total += dist(phi.position(b.qubits[i]), phi.position(b.qubits[j]));
    }
  }
  return total;
}

/// Constructive escape (raced against a short search), push-back and one
/// retry, then the full gathering search.
ShuttleResult gather_block(const Block& block, const IonAssignment& phi, const PositionGraph& g,
                           const DistanceMatrix& dist, const TimingModel& timing,
                           const SearchConfig& cfg, RouteStats& stats) {
  ++stats.escapes;
  ShuttleResult r = escape_local_minimum(block, phi, g, dist, timing, cfg);
  // A short search often beats the constructive plan on small or sparse
  // devices; keep whichever is cheaper.
  ShuttleResult quick = gather_search(block, phi, g, dist, timing, kQuickSearchBudget);
  if (quick.resolved &&
      (!r.resolved || total_cost(quick.moves, timing) < total_cost(r.moves, timing))) {
    return quick;
  }
  if (r.resolved) {
    return r;
  }
  ++stats.pushbacks;
  append(r, push_back(r.phi, g, timing));
  const ShuttleResult retry = escape_local_minimum(block, r.phi, g, dist, timing, cfg);
  append(r, retry);
  if (retry.resolved) {
    r.resolved = true;
    return r;
  }
  ++stats.searches;
  logger()->debug("escape deadlocked on block {}, falling back to gathering search", block.id);
  const ShuttleResult found = gather_search(block, r.phi, g, dist, timing, cfg.search_budget);
  if (found.resolved) {
    append(r, found);
    r.resolved = true;
    return r;
  }
  // Retry the search from the untouched state before giving up.
  ShuttleResult fresh = gather_search(block, phi, g, dist, timing, cfg.search_budget);
  return fresh;
}

} // namespace

RouteResult route(const BlockDag& dag, const IonAssignment& phi0, const PositionGraph& g,
                  const DistanceMatrix& dist, const TimingModel& timing,
                  const SearchConfig& cfg, const BlockCostOracle& oracle) {
  cfg.validate();
  if (dag.max_width() > g.max_executable_capacity()) {
    throw CapacityError("block of width " + std::to_string(dag.max_width()) +
                        " exceeds the largest executable trap (" +
                        std::to_string(g.max_executable_capacity()) + ")");
  }
  if (phi0.num_qubits() < dag.num_qubits() || phi0.num_nodes() != g.num_nodes()) {
    throw std::invalid_argument("initial assignment does not match the circuit and device");
  }
  RouteResult out;
  out.final_phi = phi0;
  IonAssignment& phi = out.final_phi;
  FrontState fs = make_front_state(dag, cfg.lookahead);

  const std::size_t move_cap = 10000 * std::max<std::size_t>(1, dag.size());
  const int stall_limit = cfg.stall_limit > 0 ? cfg.stall_limit : static_cast<int>(g.num_nodes());
  std::deque<std::uint64_t> window;
  int stall = 0;
  std::size_t moves_emitted = 0;

  auto emit_moves = [&](const std::vector<Move>& moves) {
    for (const auto& m : moves) {
      out.instructions.emplace_back(m);
    }
    moves_emitted += moves.size();
  };

  while (!fs.done()) {
    bool executed = false;
    for (bool again = true; again;) {
      again = false;
      for (int b : fs.front) {
        const Block& blk = dag.block(b);
        const auto trap = executable_trap(phi, blk.qubits, g);
        if (!trap) {
          continue;
        }
        FrontState after = advance(fs, dag, b);
        const PermutationContext ctx{dag, after, dist, g, cfg.extended_weight};
        Permutation perm = select_permutation(blk, phi, oracle, ctx, cfg.permutation_enabled);
        phi.relabel(blk.qubits, perm);
        out.instructions.emplace_back(ExecuteBlock{b, *trap, std::move(perm)});
        fs = std::move(after);
        executed = again = true;
        break;
      }
    }
    if (executed) {
      window.clear();
      window.push_back(phi.hash());
      stall = 0;
      continue;
    }
    if (fs.done()) {
      break;
    }

    const double current =
        heuristic_score(dag, fs.front, fs.extended, phi, dist, g, cfg.extended_weight);
    std::optional<Move> best;
    double best_score = kInfinity;
    std::uint64_t best_hash = 0;
    for (const auto& m : legal_moves(phi, g)) {
      const IonAssignment next = apply_move(phi, m, g);
      const double score = heuristic_score(dag, fs.front, fs.extended, next, dist, g,
                                           cfg.extended_weight);
      if (score < best_score) {
        best_score = score;
        best = m;
        best_hash = next.hash();
      }
    }
    const bool repeated =
        best && std::find(window.begin(), window.end(), best_hash) != window.end();

    const bool improving = best && (best_score < current || current == kInfinity);
    if (!improving || repeated || stall >= stall_limit) {
      std::vector<int> stuck = fs.front;
      std::stable_sort(stuck.begin(), stuck.end(), [&](int a, int b) {
        return pairwise_spread(dag.block(a), phi, dist) < pairwise_spread(dag.block(b), phi, dist);
      });
      bool resolved = false;
      for (int b : stuck) {
        ShuttleResult esc = gather_block(dag.block(b), phi, g, dist, timing, cfg, out.stats);
        if (esc.resolved) {
          emit_moves(esc.moves);
          phi = std::move(esc.phi);
          resolved = true;
          break;
        }
      }
      if (!resolved) {
        throw RoutingError("no shuttling sequence co-locates any front-layer block");
      }
      window.clear();
      window.push_back(phi.hash());
      stall = 0;
    } else {
      apply_move_in_place(phi, *best, g);
      out.instructions.emplace_back(*best);
      ++moves_emitted;
      ++out.stats.greedy_moves;
      window.push_back(best_hash);
      while (static_cast<int>(window.size()) > cfg.cycle_window) {
        window.pop_front();
      }
      ++stall;
    }
    if (moves_emitted > move_cap) {
      throw RoutingError("nontermination guard: more than " + std::to_string(move_cap) +
                         " shuttles emitted");
    }
  }
  return out;
}

IonAssignment random_placement(int num_qubits, const PositionGraph& g, std::uint64_t seed) {
  std::vector<NodeId> slots;
  for (const auto& t : g.traps()) {
    for (int s = 0; s < t.capacity; ++s) {
      slots.push_back(t.slot(s));
    }
  }
  if (num_qubits > static_cast<int>(slots.size())) {
    throw CapacityError(std::to_string(num_qubits) + " qubits exceed " +
                        std::to_string(slots.size()) + " trap slots");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = slots.size(); i > 1; --i) {
    std::swap(slots[i - 1], slots[rng() % i]);
  }
  slots.resize(static_cast<std::size_t>(num_qubits));
  return IonAssignment(g.num_nodes(), std::move(slots));
}

IonAssignment refine_layout(const BlockDag& dag, const IonAssignment& start,
                            const PositionGraph& g, const DistanceMatrix& dist,
                            const TimingModel& timing, const SearchConfig& cfg,
                            const BlockCostOracle& oracle) {
  cfg.validate();
  IonAssignment phi = start;
  const BlockDag reverse = dag.reversed();
  for (int pass = 0; pass + 1 < cfg.passes; ++pass) {
    const bool forward = (cfg.passes - 1 - pass) % 2 == 0;
    try {
      phi = route(forward ? dag : reverse, phi, g, dist, timing, cfg, oracle).final_phi;
    } catch (const RoutingError& e) {
      logger()->info("layout pass {} stopped early: {}", pass, e.what());
      break;
    }
  }
  return phi;
}

IonAssignment initial_layout(const BlockDag& dag, const PositionGraph& g,
                             const DistanceMatrix& dist, const TimingModel& timing,
                             const SearchConfig& cfg, const BlockCostOracle& oracle) {
  const IonAssignment start = random_placement(dag.num_qubits(), g, cfg.seed);
  return refine_layout(dag, start, g, dist, timing, cfg, oracle);
}

IonAssignment replay(const InstructionList& instrs, const IonAssignment& phi0,
                     const BlockDag& dag, const PositionGraph& g) {
  IonAssignment phi = phi0;
  FrontState fs = make_front_state(dag, 0);
  for (std::size_t i = 0; i < instrs.size(); ++i) {
    if (const auto* m = std::get_if<Move>(&instrs[i])) {
      try {
        apply_move_in_place(phi, *m, g);
      } catch (const IllegalMoveError& e) {
        throw ReplayError(i, e.what());
      }
      continue;
    }
    const auto& ex = std::get<ExecuteBlock>(instrs[i]);
    if (ex.block < 0 || static_cast<std::size_t>(ex.block) >= dag.size()) {
      throw ReplayError(i, "unknown block " + std::to_string(ex.block));
    }
    if (!fs.in_front(ex.block)) {
      throw ReplayError(i, "block " + std::to_string(ex.block) +
                               " executed out of dependency order or twice");
    }
    const Block& blk = dag.block(ex.block);
    const auto trap = executable_trap(phi, blk.qubits, g);
    if (!trap || *trap != ex.trap) {
      throw ReplayError(i, "block " + std::to_string(ex.block) +
                               " is not co-located in executable trap index " +
                               std::to_string(ex.trap));
    }
    Permutation sorted = ex.perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != blk.qubits) {
      throw ReplayError(i, "permutation is not a bijection on the block's qubits");
    }
    phi.relabel(blk.qubits, ex.perm);
    fs = advance(fs, dag, ex.block);
  }
  if (!fs.done()) {
    throw ReplayError(instrs.size(), "not every block was executed");
  }
  return phi;
}

} // namespace ionroute
