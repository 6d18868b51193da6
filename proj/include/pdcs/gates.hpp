#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdcs/errors.hpp"
#include "pdcs/rotor.hpp"
#include "pdcs/synthesis.hpp"

namespace pdcs {

/**
 * Dense matrix of a named gate. Controls come first (leftmost qubits), so
 * CNOT = |0><0| x I + |1><1| x X.
 *
 * Names (case-insensitive): H X Y Z S SDG T TDG CNOT CZ CS CSDG CT CTDG
 * CPHASE(theta) SWAP TOFFOLI CCZ FREDKIN C3NOT C3Z GROVER(n) QFT(n)
 * AQFT(n, degree). S = diag(1, i); GROVER(n) = 2|psi><psi| - I over the
 * uniform superposition; QFT entries are w^{jk}/sqrt(N), w = e^{2 pi i/N}.
 */
DenseOperator standard_gate(const std::string& name, const std::vector<double>& params = {});

/// Accepts "toffoli", "GROVER(3)", "grover3", "aqft(4,2)", "cphase(0.5)".
DenseOperator standard_gate_from_spec(const std::string& spec);

/// Qubit count implied by a gate name and its parameters.
int gate_qubit_count(const std::string& name, const std::vector<double>& params = {});

struct CircuitGate {
  std::string name;                      ///< standard gate name, or "UNITARY" with inline matrix
  std::vector<int> qubits;               ///< 1-based targets, in the gate's own qubit order
  std::vector<double> params;
  std::optional<DenseOperator> matrix;   ///< inline matrix for name == "UNITARY"

  DenseOperator unitary() const;
};

struct CircuitSpec {
  int n = 0;
  std::vector<CircuitGate> gates;

  /// Indices in range and distinct per gate; names resolvable; arity matches.
  void validate() const;
};

/// Applies gate (acting on the listed 1-based qubits) to every column of m in place.
void apply_gate(DenseOperator& m, const DenseOperator& gate, const std::vector<int>& qubits, int n);

/// Product of the embedded gates in application order (gates[0] first).
DenseOperator compose_circuit(const CircuitSpec& spec);

/// Re-embeds a Pauli on qubits.size() local qubits into an n-qubit register.
PauliString embed_pauli(const PauliString& local, const std::vector<int>& qubits, int n);

struct CircuitSynthesisOptions {
  /// Fuse consecutive gates into blocks when that yields fewer rotors than gate-by-gate synthesis.
  bool fuse_blocks = true;
  /// Largest block support in qubits; 0 means the widest single gate of the circuit.
  int max_block_qubits = 0;
  /// Merge adjacent rotors whose union commutes and stays within max_block_qubits.
  bool merge_rotors = true;
};

struct BlockDecomposition {
  std::size_t first_gate = 0;   ///< 0-based index of the first gate in the block
  std::size_t last_gate = 0;    ///< inclusive
  std::vector<int> qubits;      ///< block support, sorted
  Decomposition local;          ///< rotors on the block's own qubits
  SynthesisReport report;
};

struct CircuitDecomposition {
  std::vector<BlockDecomposition> blocks;
  /// All rotors re-embedded into the full register, in application order, after merging.
  Decomposition combined;
};

/// Raised when a block (identified by its first gate) cannot reach the fidelity threshold.
class BlockBudgetError : public ValidationError {
 public:
  BlockBudgetError(std::size_t gate, const std::string& what) : ValidationError(what), gate_index(gate) {}
  std::size_t gate_index;
};

/// Circuit-wise synthesis; throws BlockBudgetError naming the gate when a block exhausts its rotor budget.
CircuitDecomposition decompose_circuit(const CircuitSpec& spec, const SynthesisConfig& config,
                                       const CircuitSynthesisOptions& options = {});

/// Merges adjacent rotors whose union pairwise commutes and touches at most max_width qubits.
Decomposition merge_adjacent_rotors(const Decomposition& d, int max_width);

/// Number of qubits a rotor acts on.
int rotor_width(const Rotor& r);

/// Built-in circuits: qft2, aqft4, shor15, grover2, grover3.
CircuitSpec circuit_preset(const std::string& name);
std::vector<std::string> circuit_preset_names();

/// AQFT on n qubits keeping controlled phases R_k with k <= degree, followed by the reversal swaps.
CircuitSpec aqft_circuit(int n, int degree);

}  // namespace pdcs
