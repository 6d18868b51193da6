#pragma once

#include <vector>

#include "pdcs/rotor.hpp"
#include "pdcs/synthesis.hpp"

namespace pdcs {

struct HamiltonianTerm {
  PauliString pauli;
  double coefficient = 0.0;  ///< rad/s
};

/// Weighted Pauli sum H = sum_k c_k P_k with coefficients in rad/s.
struct HamiltonianSpec {
  int n = 0;
  std::vector<HamiltonianTerm> terms;

  /// Shared qubit count, finite coefficients.
  void validate() const;
  DenseOperator dense(int max_qubits = kDefaultDenseCap) const;
  /// True when every pair of terms commutes.
  bool is_commuting() const;
};

/// e^{-iHt} by eigendecomposition of the dense Hermitian matrix.
DenseOperator exact_propagator(const HamiltonianSpec& h, double t);

/// The commuting group exponential e^{-i H_g dt} as a single rotor (angles c_k * dt).
Rotor group_rotor(const HamiltonianSpec& group, double dt);

/// [prod_g e^{-i H_g dt}]^steps, dt = t/steps, one rotor per factor in application order.
/// Factors whose group has no non-identity term are the identity and are left out.
Decomposition trotter1_decomposition(const std::vector<HamiltonianSpec>& groups, double t, int steps);

/// [e^{-i A dt/2} e^{-i B dt} e^{-i A dt/2}]^steps with adjacent half steps merged: 2*steps + 1 rotors
/// (fewer when a group has no non-identity term).
Decomposition trotter2_decomposition(const std::vector<HamiltonianSpec>& groups, double t, int steps);

DenseOperator trotter1(const std::vector<HamiltonianSpec>& groups, double t, int steps);
DenseOperator trotter2(const std::vector<HamiltonianSpec>& groups, double t, int steps);

/// Sum of the groups as one Hamiltonian.
HamiltonianSpec combine_groups(const std::vector<HamiltonianSpec>& groups);

struct TrotterComparisonRow {
  int m = 0;                  ///< rotor budget
  int trotter1_steps = 0;
  int trotter2_steps = 0;
  double f_trotter1 = 0.0;
  double f_trotter2 = 0.0;
  double f_pdcs = 0.0;
};

/**
 * Fidelity against e^{-iHt} as a function of rotor count m.
 *
 * Each Trotter column uses the largest step count whose merged rotor count
 * fits in m (k * steps for the first-order form, 2 * steps + 1 for the
 * symmetrized one), but never fewer than one step. The PDCS column runs
 * synthesis with max_rotors = m and an unreachable threshold.
 */
std::vector<TrotterComparisonRow> compare_decompositions(const std::vector<HamiltonianSpec>& groups,
                                                         double t, const std::vector<int>& m_values,
                                                         const SynthesisConfig& config);

}  // namespace pdcs
