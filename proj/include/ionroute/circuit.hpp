#pragma once

#include "ionroute/arch.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ionroute {

struct Gate {
  std::string name;
  std::vector<double> params; // radians
  std::vector<QubitId> qubits;

  [[nodiscard]] bool two_qubit() const { return qubits.size() == 2; }
  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;

  /// Throws ParseError on out-of-range or repeated operands.
  void validate() const;
  [[nodiscard]] std::size_t two_qubit_gate_count() const;

  bool operator==(const Circuit&) const = default;
};

/// OpenQASM 2.0 subset: one qreg, the gate set of `supported_gates()`,
/// creg/measure/barrier accepted and dropped. `swap` lowers to three cx.
[[nodiscard]] Circuit parse_qasm(std::string_view text);

/// Canonical text; parse_qasm(emit_qasm(c)) == c for swap-free circuits.
[[nodiscard]] std::string emit_qasm(const Circuit& c);

[[nodiscard]] const std::vector<std::string>& supported_gates();

struct Block {
  int id = 0;
  std::vector<QubitId> qubits; // sorted
  std::vector<std::size_t> gates;
  int two_qubit_gates = 0;

  [[nodiscard]] int width() const { return static_cast<int>(qubits.size()); }
};

/// Circuit cut into blocks of at most k qubits with per-qubit precedence edges.
class BlockDag {
public:
  BlockDag() = default;

  [[nodiscard]] std::size_t size() const { return blocks_.size(); }
  [[nodiscard]] bool empty() const { return blocks_.empty(); }
  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] const Block& block(int id) const { return blocks_[id]; }
  [[nodiscard]] const std::vector<int>& predecessors(int id) const { return preds_[id]; }
  [[nodiscard]] const std::vector<int>& successors(int id) const { return succs_[id]; }
  [[nodiscard]] int num_qubits() const { return num_qubits_; }
  [[nodiscard]] int max_width() const;

  /// Same blocks with every dependency edge flipped.
  [[nodiscard]] BlockDag reversed() const;

  /// Debug dump as JSON text.
  [[nodiscard]] std::string dump() const;

  friend BlockDag partition_blocks(const Circuit& c, int k);
  friend BlockDag make_block_dag(int num_qubits, std::vector<Block> blocks);

private:
  void link();

  int num_qubits_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
};

/// Greedy left-to-right: a gate joins the newest block touching its qubits
/// when that block is not frozen and stays within k qubits; otherwise a new
/// block opens. A block freezes once one of its qubits appears in a later
/// block.
[[nodiscard]] BlockDag partition_blocks(const Circuit& c, int k);

/// Build a dag from explicit blocks given in a valid execution order; edges
/// follow shared qubits. Gate lists may be empty.
[[nodiscard]] BlockDag make_block_dag(int num_qubits, std::vector<Block> blocks);

/// Execution frontier over a BlockDag. A value: advancing returns a copy.
struct FrontState {
  std::vector<char> executed;
  std::vector<int> pending; // unexecuted predecessor count
  std::vector<int> front;   // sorted block ids
  std::vector<int> extended;
  int lookahead = 20;

  [[nodiscard]] bool done() const { return front.empty(); }
  [[nodiscard]] bool in_front(int block) const;
  [[nodiscard]] std::size_t executed_count() const;
};

[[nodiscard]] FrontState make_front_state(const BlockDag& dag, int lookahead);

/// Throws std::invalid_argument if `block` is not in the front layer.
[[nodiscard]] FrontState advance(const FrontState& fs, const BlockDag& dag, int block);

enum class CircuitKind { Qft, QaoaEr, QvLike };

struct GeneratorParams {
  double edge_probability = 0.3; // qaoa_er
  double gamma = 0.7;            // qaoa_er cost angle
  double beta = 0.4;             // qaoa_er mixer angle
  int depth = 3;                 // qv_like layers
};

[[nodiscard]] CircuitKind parse_circuit_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(CircuitKind kind);

[[nodiscard]] Circuit generate(CircuitKind kind, int n, std::uint64_t seed,
                               const GeneratorParams& params = {});

} // namespace ionroute
