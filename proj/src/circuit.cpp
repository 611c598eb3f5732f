#include "ionroute/circuit.hpp"

#include "ionroute/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ionroute {

int BlockDag::max_width() const {
  int w = 0;
  for (const auto& b : blocks_) {
    w = std::max(w, b.width());
  }
  return w;
}

void BlockDag::link() {
  preds_.assign(blocks_.size(), {});
  succs_.assign(blocks_.size(), {});
  std::vector<int> last(static_cast<std::size_t>(num_qubits_), -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (QubitId q : blocks_[b].qubits) {
      const int prev = last[q];
      if (prev >= 0) {
        auto& p = preds_[b];
        if (std::find(p.begin(), p.end(), prev) == p.end()) {
          p.push_back(prev);
          succs_[prev].push_back(static_cast<int>(b));
        }
      }
      last[q] = static_cast<int>(b);
    }
  }
  for (auto& p : preds_) {
    std::sort(p.begin(), p.end());
  }
  for (auto& s : succs_) {
    std::sort(s.begin(), s.end());
  }
}

BlockDag BlockDag::reversed() const {
  BlockDag r = *this;
  std::swap(r.preds_, r.succs_);
  for (auto& b : r.blocks_) {
    std::reverse(b.gates.begin(), b.gates.end());
  }
  return r;
}

std::string BlockDag::dump() const {
  nlohmann::json j;
  j["num_qubits"] = num_qubits_;
  auto& arr = j["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks_) {
    arr.push_back({{"id", b.id},
                   {"qubits", b.qubits},
                   {"gates", b.gates},
                   {"two_qubit_gates", b.two_qubit_gates},
                   {"predecessors", preds_[b.id]},
                   {"successors", succs_[b.id]}});
  }
  return j.dump(2);
}

BlockDag make_block_dag(int num_qubits, std::vector<Block> blocks) {
  BlockDag dag;
  dag.num_qubits_ = num_qubits;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].id = static_cast<int>(i);
    std::sort(blocks[i].qubits.begin(), blocks[i].qubits.end());
    for (QubitId q : blocks[i].qubits) {
      if (q < 0 || q >= num_qubits) {
        throw std::invalid_argument("block qubit out of range");
      }
    }
  }
  dag.blocks_ = std::move(blocks);
  dag.link();
  return dag;
}

BlockDag partition_blocks(const Circuit& c, int k) {
  if (k < 2) {
    throw std::invalid_argument("block width k must be >= 2");
  }
  c.validate();
  std::vector<Block> blocks;
  std::vector<char> frozen;
  std::vector<int> last(static_cast<std::size_t>(c.num_qubits), -1);

  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const Gate& g = c.gates[gi];
    int cand = -1;
    for (QubitId q : g.qubits) {
      cand = std::max(cand, last[q]);
    }
    bool joined = false;
    if (cand >= 0 && frozen[cand] == 0) {
      auto& blk = blocks[cand];
      std::vector<QubitId> merged = blk.qubits;
      for (QubitId q : g.qubits) {
        if (std::find(merged.begin(), merged.end(), q) == merged.end()) {
          merged.push_back(q);
        }
      }
      if (static_cast<int>(merged.size()) <= k) {
        for (QubitId q : g.qubits) {
          if (last[q] >= 0 && last[q] != cand) {
            frozen[last[q]] = 1;
          }
          last[q] = cand;
        }
        std::sort(merged.begin(), merged.end());
        blk.qubits = std::move(merged);
        blk.gates.push_back(gi);
        blk.two_qubit_gates += g.two_qubit() ? 1 : 0;
        joined = true;
      }
    }
    if (!joined) {
      const int id = static_cast<int>(blocks.size());
      Block blk;
      blk.id = id;
      blk.qubits = g.qubits;
      std::sort(blk.qubits.begin(), blk.qubits.end());
      blk.gates.push_back(gi);
      blk.two_qubit_gates = g.two_qubit() ? 1 : 0;
      blocks.push_back(std::move(blk));
      frozen.push_back(0);
      for (QubitId q : g.qubits) {
        if (last[q] >= 0) {
          frozen[last[q]] = 1;
        }
        last[q] = id;
      }
    }
  }
  return make_block_dag(c.num_qubits, std::move(blocks));
}

bool FrontState::in_front(int block) const {
  return std::binary_search(front.begin(), front.end(), block);
}

std::size_t FrontState::executed_count() const {
  return static_cast<std::size_t>(std::count(executed.begin(), executed.end(), 1));
}

namespace {

void compute_extended(FrontState& fs, const BlockDag& dag) {
  fs.extended.clear();
  if (fs.lookahead <= 0) {
    return;
  }
  std::vector<char> seen(dag.size(), 0);
  std::deque<int> queue;
  for (int b : fs.front) {
    seen[b] = 1;
    queue.push_back(b);
  }
  while (!queue.empty()) {
    const int b = queue.front();
    queue.pop_front();
    for (int s : dag.successors(b)) {
      if (seen[s] != 0 || fs.executed[s] != 0) {
        continue;
      }
      seen[s] = 1;
      fs.extended.push_back(s);
      if (static_cast<int>(fs.extended.size()) >= fs.lookahead) {
        return;
      }
      queue.push_back(s);
    }
  }
}

} // namespace

FrontState make_front_state(const BlockDag& dag, int lookahead) {
  FrontState fs;
  fs.lookahead = lookahead;
  fs.executed.assign(dag.size(), 0);
  fs.pending.resize(dag.size());
  for (std::size_t b = 0; b < dag.size(); ++b) {
    fs.pending[b] = static_cast<int>(dag.predecessors(static_cast<int>(b)).size());
    if (fs.pending[b] == 0) {
      fs.front.push_back(static_cast<int>(b));
    }
  }
  compute_extended(fs, dag);
  return fs;
}

FrontState advance(const FrontState& fs, const BlockDag& dag, int block) {
  if (!fs.in_front(block)) {
    throw std::invalid_argument("block " + std::to_string(block) +
                                " is not in the front layer");
  }
  FrontState next = fs;
  next.executed[block] = 1;
  next.front.erase(std::lower_bound(next.front.begin(), next.front.end(), block));
  for (int s : dag.successors(block)) {
    if (--next.pending[s] == 0) {
      next.front.insert(std::lower_bound(next.front.begin(), next.front.end(), s), s);
    }
  }
  compute_extended(next, dag);
  return next;
}

CircuitKind parse_circuit_kind(std::string_view name) {
  if (name == "qft") {
    return CircuitKind::Qft;
  }
  if (name == "qaoa_er") {
    return CircuitKind::QaoaEr;
  }
  if (name == "qv_like") {
    return CircuitKind::QvLike;
  }
  throw std::invalid_argument("unknown circuit kind '" + std::string(name) +
                              "' (expected qft, qaoa_er or qv_like)");
}

std::string_view to_string(CircuitKind kind) {
  switch (kind) {
  case CircuitKind::Qft:
    return "qft";
  case CircuitKind::QaoaEr:
    return "qaoa_er";
  case CircuitKind::QvLike:
    return "qv_like";
  }
  return "?";
}

namespace {

// Portable across standard libraries, unlike the <random> distributions.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void cx(Circuit& c, QubitId a, QubitId b) { c.gates.push_back({"cx", {}, {a, b}}); }

void u3(Circuit& c, QubitId q, std::mt19937_64& rng) {
  constexpr double tau = 2.0 * std::numbers::pi;
  c.gates.push_back({"u3", {tau * uniform01(rng), tau * uniform01(rng), tau * uniform01(rng)}, {q}});
}

Circuit qft(int n) {
  Circuit c;
  c.num_qubits = n;
  for (int j = 0; j < n; ++j) {
    c.gates.push_back({"h", {}, {j}});
    for (int k = j + 1; k < n; ++k) {
      const double theta = std::numbers::pi / std::ldexp(1.0, k - j);
      // controlled-phase(theta) with control k, target j
      c.gates.push_back({"u1", {theta / 2}, {k}});
      cx(c, k, j);
      c.gates.push_back({"u1", {-theta / 2}, {j}});
      cx(c, k, j);
      c.gates.push_back({"u1", {theta / 2}, {j}});
    }
  }
  for (int i = 0; i < n / 2; ++i) {
    const int a = i;
    const int b = n - 1 - i;
    cx(c, a, b);
    cx(c, b, a);
    cx(c, a, b);
  }
  return c;
}

Circuit qaoa_er(int n, std::uint64_t seed, const GeneratorParams& p) {
  std::mt19937_64 rng(seed);
  Circuit c;
  c.num_qubits = n;
  for (int q = 0; q < n; ++q) {
    c.gates.push_back({"h", {}, {q}});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p.edge_probability) {
        c.gates.push_back({"rzz", {2.0 * p.gamma}, {i, j}});
      }
    }
  }
  for (int q = 0; q < n; ++q) {
    c.gates.push_back({"rx", {2.0 * p.beta}, {q}});
  }
  return c;
}

Circuit qv_like(int n, std::uint64_t seed, const GeneratorParams& p) {
  std::mt19937_64 rng(seed);
  Circuit c;
  c.num_qubits = n;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int layer = 0; layer < std::max(1, p.depth); ++layer) {
    for (int i = 0; i < n; ++i) {
      perm[i] = i;
    }
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng() % static_cast<std::uint64_t>(i + 1)]);
    }
    for (int i = 0; i + 1 < n; i += 2) {
      const QubitId a = perm[i];
      const QubitId b = perm[i + 1];
      u3(c, a, rng);
      u3(c, b, rng);
      cx(c, a, b);
      u3(c, a, rng);
      u3(c, b, rng);
      cx(c, b, a);
      u3(c, a, rng);
      u3(c, b, rng);
      cx(c, a, b);
      u3(c, a, rng);
      u3(c, b, rng);
    }
  }
  return c;
}

} // namespace

Circuit generate(CircuitKind kind, int n, std::uint64_t seed, const GeneratorParams& params) {
  if (n < 2) {
    throw std::invalid_argument("generated circuits need at least 2 qubits");
  }
  switch (kind) {
  case CircuitKind::Qft:
    return qft(n);
  case CircuitKind::QaoaEr:
    return qaoa_er(n, seed, params);
  case CircuitKind::QvLike:
    return qv_like(n, seed, params);
  }
  throw std::invalid_argument("unknown circuit kind");
}

} // namespace ionroute
