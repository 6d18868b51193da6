#pragma once

#include <variant>

#include "pdcs/pauli.hpp"

namespace pdcs {

enum class StateKind {
  kStatevector,  ///< unit-norm ket
  kDensity,      ///< Hermitian PSD, unit trace
  kDeviation,    ///< traceless Hermitian NMR deviation matrix, any nonzero scale
};

const char* to_string(StateKind kind);
StateKind state_kind_from_string(const std::string& name);

/**
 * Statevector or density matrix. Validity is checked on construction:
 * statevectors are normalized to 1e-12, densities are Hermitian to 1e-12 with
 * unit trace and eigenvalues >= -1e-10, deviation matrices are Hermitian and
 * traceless.
 */
class QuantumState {
 public:
  static QuantumState statevector(Eigen::VectorXcd psi);
  static QuantumState density(DenseOperator rho);
  static QuantumState deviation(DenseOperator delta);

  /// Computational basis ket |bits>, qubit 1 is the leftmost character ("000").
  static QuantumState basis(const std::string& bits);

  StateKind kind() const { return kind_; }
  bool is_pure() const { return kind_ == StateKind::kStatevector; }
  Eigen::Index dim() const;
  int num_qubits() const;

  const Eigen::VectorXcd& vector() const;
  /// Density (or deviation) matrix; statevectors are expanded to |psi><psi|.
  DenseOperator matrix() const;

  /// Trace (norm squared for statevectors).
  double trace() const;

 private:
  QuantumState(StateKind kind, Eigen::VectorXcd psi, DenseOperator rho)
      : kind_(kind), psi_(std::move(psi)), rho_(std::move(rho)) {}

  StateKind kind_;
  Eigen::VectorXcd psi_;
  DenseOperator rho_;
};

/**
 * Uhlmann fidelity Tr sqrt(sqrt(a) b sqrt(a)); |<a|b>| for two kets.
 *
 * Deviation matrices are not states, so for them the normalized trace overlap
 * Tr[a b] / (||a||_F ||b||_F), clamped to [0, 1], is returned instead (the usual NMR correlation).
 */
double state_fidelity(const QuantumState& a, const QuantumState& b);

/// Principal square root of a Hermitian PSD matrix (negative eigenvalues clipped to 0).
DenseOperator psd_sqrt(const DenseOperator& m);

/// True when a density matrix has rank one within tol (largest eigenvalue ~ 1).
bool is_rank_one(const DenseOperator& rho, double tol = 1e-10);

/// Leading eigenvector of a Hermitian matrix.
Eigen::VectorXcd leading_eigenvector(const DenseOperator& rho);

}  // namespace pdcs
