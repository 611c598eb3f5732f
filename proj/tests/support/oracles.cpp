#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace oracle {

ArchitectureSpec random_spec(std::mt19937_64& rng, const SpecOptions& opts) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  for (;;) {
    ArchitectureSpec spec;
    spec.name = "random";
    const int traps = uni(1, opts.max_traps);
    for (int t = 0; t < traps; ++t) {
      TrapSpec ts;
      ts.id = t;
      ts.capacity = uni(opts.min_capacity, opts.max_capacity);
      ts.kind = coin(opts.storage_probability) ? TrapKind::Storage : TrapKind::Executable;
      spec.traps.push_back(ts);
    }
    if (std::none_of(spec.traps.begin(), spec.traps.end(),
                     [](const TrapSpec& t) { return t.kind == TrapKind::Executable; })) {
      spec.traps[0].kind = TrapKind::Executable;
    }
    if (traps == 1) {
      return spec;
    }
    int next_segment = 0;
    auto new_segment = [&] {
      spec.segments.push_back({next_segment});
      return next_segment++;
    };
    const int junctions = uni(1, 3);
    for (int j = 0; j < junctions; ++j) {
      spec.junctions.push_back({j, {}});
      if (j > 0) {
        const int s = new_segment();
        spec.junctions[j].segments.push_back(s);
        spec.junctions[uni(0, j - 1)].segments.push_back(s);
      }
    }
    for (auto& t : spec.traps) {
      const int ends = t.capacity > 1 && coin(0.3) ? 2 : 1;
      for (int e = 0; e < ends; ++e) {
        const int end = ends == 2 ? e : uni(0, 1);
        const int s = new_segment();
        t.ends[end] = s;
        spec.junctions[uni(0, junctions - 1)].segments.push_back(s);
      }
    }
    try {
      spec.validate();
      return spec;
    } catch (const std::exception&) {
    }
  }
}

namespace {

double weight(EdgeLabel label, const TimingModel& t) {
  if (label == EdgeLabel::Swap) {
    return t.inner_swap;
  }
  if (label == EdgeLabel::Move) {
    return t.move;
  }
  return t.split > t.merge ? t.split : t.merge;
}

} // namespace

std::vector<std::vector<double>> dijkstra_all(const PositionGraph& g, const TimingModel& t) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].emplace_back(e.v, weight(e.label, t));
    adj[e.v].emplace_back(e.u, weight(e.label, t));
  }
  std::vector<std::vector<double>> out(n, std::vector<double>(n, kInfinity));
  for (std::size_t s = 0; s < n; ++s) {
    auto& d = out[s];
    d[s] = 0;
    using E = std::pair<double, int>;
    std::priority_queue<E, std::vector<E>, std::greater<>> pq;
    pq.emplace(0.0, static_cast<int>(s));
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > d[u]) {
        continue;
      }
      for (auto [v, w] : adj[u]) {
        if (du + w < d[v]) {
          d[v] = du + w;
          pq.emplace(d[v], v);
        }
      }
    }
  }
  return out;
}

double direct_score(const BlockDag& dag, const std::vector<int>& front, const std::vector<int>& extended,
           const IonAssignment& phi, const PositionGraph& g,
           const std::vector<std::vector<double>>& dist, double we) {
  // d(p): nearest empty slot of any executable trap.
  auto d = [&](NodeId p) {
    double best = kInfinity;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      const Node& nd = g.node(static_cast<NodeId>(v));
      if (nd.kind != NodeKind::TrapSlot || g.traps()[nd.trap].kind != TrapKind::Executable) {
        continue;
      }
      if (phi.occupant(static_cast<NodeId>(v)) == kNoQubit) {
        best = std::min(best, dist[p][v]);
      }
    }
    return best;
  };
  auto term = [&](const std::vector<int>& layer) {
    double sum = 0;
    for (int b : layer) {
      const auto& qs = dag.block(b).qubits;
      double mx = 0;
      double near = 0;
      for (QubitId a : qs) {
        for (QubitId c : qs) {
          mx = std::max(mx, dist[phi.position(a)][phi.position(c)]);
        }
        near += d(phi.position(a));
      }
      sum += mx + near;
    }
    return sum / static_cast<double>(layer.size());
  };
  double h = front.empty() ? 0.0 : term(front);
  if (!extended.empty() && we > 0) {
    h += we * term(extended);
  }
  return h;
}

Circuit random_circuit(std::mt19937_64& rng, int n, int max_2q) {
  Circuit c;
  c.num_qubits = n;
  std::uniform_int_distribution<int> q(0, n - 1);
  const int two = n >= 2 ? std::uniform_int_distribution<int>(0, max_2q)(rng) : 0;
  int placed = 0;
  while (placed < two) {
    if (rng() % 4 == 0) {
      c.gates.push_back({"h", {}, {q(rng)}});
      continue;
    }
    const int a = q(rng);
    int b = q(rng);
    if (a == b) {
      continue;
    }
    c.gates.push_back({"cx", {}, {a, b}});
    ++placed;
  }
  return c;
}

IonAssignment random_state(std::mt19937_64& rng, const PositionGraph& g, int ions) {
  std::vector<NodeId> nodes(g.num_nodes());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = static_cast<NodeId>(i);
  }
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(static_cast<std::size_t>(ions));
  return IonAssignment(g.num_nodes(), nodes);
}

namespace {

bool goal(const PositionGraph& g, const IonAssignment& phi, const std::vector<QubitId>& qs) {
  return executable_trap(phi, qs, g).has_value();
}

struct Resources {
  std::vector<NodeId> nodes;
  int junction;
};

Resources resources_of(const PositionGraph& g, const Move& m) {
  int j = -1;
  if (m.kind == MoveKind::Move) {
    j = g.edge(*g.find_edge(m.from, m.to)).junction;
  }
  return {{m.from, m.to}, j};
}

} // namespace

int min_parallel_rounds(const PositionGraph& g, const IonAssignment& phi,
                        const std::vector<QubitId>& qubits) {
  std::map<std::vector<NodeId>, int> seen;
  std::queue<IonAssignment> q;
  seen[phi.positions()] = 0;
  q.push(phi);
  while (!q.empty()) {
    IonAssignment cur = q.front();
    q.pop();
    const int depth = seen[cur.positions()];
    if (goal(g, cur, qubits)) {
      return depth;
    }
    const auto moves = legal_moves(cur, g);
    const std::size_t m = moves.size();
    // Every nonempty subset of mutually compatible moves is one round.
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
      std::set<NodeId> nodes;
      std::set<int> junctions;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        if ((mask >> i & 1U) == 0) {
          continue;
        }
        const auto r = resources_of(g, moves[i]);
        for (NodeId v : r.nodes) {
          ok = ok && nodes.insert(v).second;
        }
        if (r.junction >= 0) {
          ok = ok && junctions.insert(r.junction).second;
        }
      }
      if (!ok) {
        continue;
      }
      IonAssignment next = cur;
      for (std::size_t i = 0; i < m; ++i) {
        if ((mask >> i & 1U) != 0) {
          apply_move_in_place(next, moves[i], g);
        }
      }
      if (seen.emplace(next.positions(), depth + 1).second) {
        q.push(next);
      }
    }
  }
  return -1;
}

int min_moves(const PositionGraph& g, const IonAssignment& phi,
              const std::vector<QubitId>& qubits) {
  std::map<std::vector<NodeId>, int> seen;
  std::queue<IonAssignment> q;
  seen[phi.positions()] = 0;
  q.push(phi);
  while (!q.empty()) {
    IonAssignment cur = q.front();
    q.pop();
    const int depth = seen[cur.positions()];
    if (goal(g, cur, qubits)) {
      return depth;
    }
    for (const auto& m : legal_moves(cur, g)) {
      IonAssignment next = apply_move(cur, m, g);
      if (seen.emplace(next.positions(), depth + 1).second) {
        q.push(next);
      }
    }
  }
  return -1;
}

} // namespace oracle
