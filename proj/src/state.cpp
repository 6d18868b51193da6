#include "pdcs/state.hpp"

#include <algorithm>
#include <cmath>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

void require_square_power_of_two(const DenseOperator& m, const char* what) {
  if (m.rows() != m.cols() || !is_power_of_two(m.rows())) {
    throw ValidationError(std::string(what) + ": matrix must be square with power-of-two dimension");
  }
}

void require_hermitian(const DenseOperator& m, const char* what) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian within 1e-12");
  }
}

}  // namespace

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::kStatevector: return "statevector";
    case StateKind::kDensity: return "density";
    case StateKind::kDeviation: return "deviation";
  }
  return "unknown";
}

StateKind state_kind_from_string(const std::string& name) {
  if (name == "statevector") return StateKind::kStatevector;
  if (name == "density") return StateKind::kDensity;
  if (name == "deviation") return StateKind::kDeviation;
  throw ParseError("unknown state kind \"" + name + "\"");
}

QuantumState QuantumState::statevector(Eigen::VectorXcd psi) {
  if (!is_power_of_two(psi.size())) {
    throw ValidationError("statevector length must be a power of two");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-12) {
    throw ValidationError("statevector is not normalized (norm " + std::to_string(psi.norm()) + ")");
  }
  return QuantumState(StateKind::kStatevector, std::move(psi), {});
}

QuantumState QuantumState::density(DenseOperator rho) {
  require_square_power_of_two(rho, "density");
  require_hermitian(rho, "density");
  if (std::abs(rho.trace().real() - 1.0) > 1e-12) {
    throw ValidationError("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
  return QuantumState(StateKind::kDensity, {}, std::move(rho));
}

QuantumState QuantumState::deviation(DenseOperator delta) {
  require_square_power_of_two(delta, "deviation");
  require_hermitian(delta, "deviation");
  if (std::abs(delta.trace()) > 1e-12) throw ValidationError("deviation matrix is not traceless");
  if (delta.norm() < 1e-12) throw ValidationError("deviation matrix is zero");
  return QuantumState(StateKind::kDeviation, {}, std::move(delta));
}

QuantumState QuantumState::basis(const std::string& bits) {
  if (bits.empty()) throw ParseError("empty basis label");
  Eigen::Index index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParseError("basis label must contain only 0/1: " + bits);
    index = (index << 1) | (c == '1' ? 1 : 0);
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << bits.size());
  psi(index) = 1.0;
  return statevector(std::move(psi));
}

Eigen::Index QuantumState::dim() const { return is_pure() ? psi_.size() : rho_.rows(); }

int QuantumState::num_qubits() const { return log2_dim(dim()); }

const Eigen::VectorXcd& QuantumState::vector() const {
  if (!is_pure()) throw ContractError("vector() called on a mixed state");
  return psi_;
}

DenseOperator QuantumState::matrix() const {
  if (is_pure()) return psi_ * psi_.adjoint();
  return rho_;
}

double QuantumState::trace() const {
  return is_pure() ? psi_.squaredNorm() : rho_.trace().real();
}

DenseOperator psd_sqrt(const DenseOperator& m) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(m);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

bool is_rank_one(const DenseOperator& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(rho, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return std::abs(ev(ev.size() - 1) - 1.0) < tol;
}

Eigen::VectorXcd leading_eigenvector(const DenseOperator& rho) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(rho);
  return eig.eigenvectors().col(rho.rows() - 1);
}

double state_fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw DimensionError("state_fidelity: dimension mismatch");
  const bool a_dev = a.kind() == StateKind::kDeviation;
  const bool b_dev = b.kind() == StateKind::kDeviation;
  if (a_dev || b_dev) {
    if (!(a_dev && b_dev)) {
      throw ValidationError("state_fidelity: cannot compare a deviation matrix with a state");
    }
    const DenseOperator& x = a.matrix();
    const DenseOperator& y = b.matrix();
    // Anti-aligned deviations count as fidelity 0, not as a negative value.
    return std::clamp((x.adjoint() * y).trace().real() / (x.norm() * y.norm()), 0.0, 1.0);
  }
  if (a.is_pure() && b.is_pure()) return std::min(1.0, std::abs(a.vector().dot(b.vector())));
  if (a.is_pure() || b.is_pure()) {
    const auto& psi = a.is_pure() ? a.vector() : b.vector();
    const DenseOperator rho = a.is_pure() ? b.matrix() : a.matrix();
    const double overlap = psi.dot(rho * psi).real();
    return std::min(1.0, std::sqrt(std::max(0.0, overlap)));
  }
  const DenseOperator root = psd_sqrt(a.matrix());
  const DenseOperator inner = root * b.matrix() * root;
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(0.5 * (inner + inner.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  return std::min(1.0, eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum());
}

}  // namespace pdcs
