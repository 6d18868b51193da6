#pragma once

#include <map>
#include <string>
#include <vector>

#include "pdcs/pauli.hpp"
#include "pdcs/state.hpp"
#include "pdcs/subsets.hpp"

namespace pdcs {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/**
 * exp(-i sum_b phi_b P_b) over pairwise-commuting Pauli strings.
 *
 * Members keep the order they were given in; angles[i] belongs to members[i].
 */
struct Rotor {
  std::vector<PauliString> members;
  std::vector<double> angles;

  /// Validates sizes and pairwise commutation; wraps angles.
  static Rotor make(std::vector<PauliString> members, std::vector<double> angles);
  static Rotor zeros(const CommutingSubset& subset);

  int num_qubits() const { return members.empty() ? 0 : members.front().num_qubits(); }
  /// Union of member supports.
  std::uint64_t support() const;
};

/// W = V_m ... V_1 (rotors[0] is applied first).
struct Decomposition {
  int n = 0;
  std::vector<Rotor> rotors;
  double achieved_fidelity = 1.0;
  std::map<std::string, std::string> metadata;

  std::size_t num_angles() const;
  std::vector<double> angles() const;
  /// Overwrites every angle (flattened rotor-major) and wraps it.
  void set_angles(const std::vector<double>& flat);
  std::size_t num_members() const { return num_angles(); }
};

/// Dense rotor via the product of (cos I - i sin P) factors; throws ContractError on non-commuting members.
DenseOperator rotor_unitary(const Rotor& r);

/// Right-to-left product; an empty decomposition yields the identity of dimension 2^n.
DenseOperator decomposition_unitary(const Decomposition& d);

/// |Tr[target^dagger w]| / N.
double fidelity_unitary(const DenseOperator& target, const DenseOperator& w);

struct FidelityGradient {
  double fidelity = 0.0;
  std::vector<double> gradient;
  /// Set when |Tr[U^dagger W]| vanished; the gradient is then the zero subgradient.
  bool degenerate = false;
};

/// Value and analytic gradient of |Tr[target^dagger W]|/N with respect to every angle.
FidelityGradient fidelity_gradient(const DenseOperator& target, const Decomposition& d);

/**
 * For every angle (rotor-major order) the trace Tr[P_b A_j], where
 * A_m = seed and A_{j-1} = V_j^dagger A_j V_j. With seed = W U^dagger this
 * gives N * i * dc/dphi for c = Tr[U^dagger W]/N.
 */
std::vector<Complex> generator_traces(const Decomposition& d, DenseOperator seed);

QuantumState apply_to_state(const Rotor& r, const QuantumState& s);
QuantumState apply_to_state(const Decomposition& d, const QuantumState& s);

/// Applies every rotor of d to m from the left (m <- W m).
void apply_left(const Decomposition& d, DenseOperator& m);

}  // namespace pdcs
