#include "pdcs/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdcs/errors.hpp"

namespace pdcs {

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

Rotor Rotor::make(std::vector<PauliString> members, std::vector<double> angles) {
  if (members.size() != angles.size()) {
    throw ContractError("rotor has " + std::to_string(members.size()) + " members but " +
                        std::to_string(angles.size()) + " angles");
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].is_identity()) throw ContractError("identity string in rotor");
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!commutes(members[i], members[j])) {
        throw ContractError("rotor members " + members[i].to_label() + " and " +
                            members[j].to_label() + " do not commute");
      }
    }
  }
  for (auto& a : angles) a = wrap_angle(a);
  return Rotor{std::move(members), std::move(angles)};
}

Rotor Rotor::zeros(const CommutingSubset& subset) {
  return Rotor::make(subset.members, std::vector<double>(subset.members.size(), 0.0));
}

std::uint64_t Rotor::support() const {
  std::uint64_t s = 0;
  for (const auto& p : members) s |= p.support();
  return s;
}

std::size_t Decomposition::num_angles() const {
  std::size_t total = 0;
  for (const auto& r : rotors) total += r.angles.size();
  return total;
}

std::vector<double> Decomposition::angles() const {
  std::vector<double> flat;
  flat.reserve(num_angles());
  for (const auto& r : rotors) flat.insert(flat.end(), r.angles.begin(), r.angles.end());
  return flat;
}

void Decomposition::set_angles(const std::vector<double>& flat) {
  if (flat.size() != num_angles()) throw ContractError("set_angles: wrong angle count");
  std::size_t k = 0;
  for (auto& r : rotors) {
    for (auto& a : r.angles) a = wrap_angle(flat[k++]);
  }
}

DenseOperator rotor_unitary(const Rotor& r) {
  if (r.members.empty()) throw ContractError("rotor_unitary: rotor has no members");
  // Re-validates commutation so hand-assembled rotors cannot slip through.
  const Rotor checked = Rotor::make(r.members, r.angles);
  const auto dim = Eigen::Index{1} << checked.num_qubits();
  DenseOperator u = DenseOperator::Identity(dim, dim);
  for (std::size_t i = 0; i < checked.members.size(); ++i) {
    apply_pauli_rotation_left(u, checked.members[i], checked.angles[i]);
  }
  return u;
}

void apply_left(const Decomposition& d, DenseOperator& m) {
  for (const auto& r : d.rotors) {
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      apply_pauli_rotation_left(m, r.members[i], r.angles[i]);
    }
  }
}

DenseOperator decomposition_unitary(const Decomposition& d) {
  if (d.n < 1) throw ValidationError("decomposition has no qubit count");
  const auto dim = Eigen::Index{1} << d.n;
  for (const auto& r : d.rotors) {
    if (r.num_qubits() != d.n) throw DimensionError("rotor qubit count differs from decomposition");
  }
  DenseOperator w = DenseOperator::Identity(dim, dim);
  apply_left(d, w);
  return w;
}

double fidelity_unitary(const DenseOperator& target, const DenseOperator& w) {
  if (target.rows() != w.rows() || target.cols() != w.cols() || target.rows() != target.cols()) {
    throw DimensionError("fidelity_unitary: dimension mismatch");
  }
  const Complex overlap = (target.adjoint().cwiseProduct(w.transpose())).sum();
  // Rounding can push a perfect match a few ulps above one.
  return std::min(1.0, std::abs(overlap) / static_cast<double>(target.rows()));
}

std::vector<Complex> generator_traces(const Decomposition& d, DenseOperator seed) {
  std::vector<Complex> out(d.num_angles());
  std::size_t k = out.size();
  for (auto rit = d.rotors.rbegin(); rit != d.rotors.rend(); ++rit) {
    const Rotor& r = *rit;
    k -= r.members.size();
    for (std::size_t b = 0; b < r.members.size(); ++b) out[k + b] = pauli_trace(seed, r.members[b]);
    for (std::size_t b = 0; b < r.members.size(); ++b) {
      apply_pauli_rotation_left(seed, r.members[b], -r.angles[b]);
      apply_pauli_rotation_right(seed, r.members[b], r.angles[b]);
    }
  }
  return out;
}

FidelityGradient fidelity_gradient(const DenseOperator& target, const Decomposition& d) {
  const DenseOperator w = decomposition_unitary(d);
  if (w.rows() != target.rows()) throw DimensionError("fidelity_gradient: dimension mismatch");
  const double dim = static_cast<double>(target.rows());
  const Complex c = (target.adjoint().cwiseProduct(w.transpose())).sum() / dim;

  FidelityGradient out;
  out.fidelity = std::abs(c);
  out.gradient.assign(d.num_angles(), 0.0);
  if (out.fidelity < 1e-14) {
    out.degenerate = true;
    return out;
  }
  // dc/dphi = -i Tr[P A_j] / N with A_m = W U^dagger.
  const auto traces = generator_traces(d, w * target.adjoint());
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const Complex dc = Complex{0, -1} * traces[k] / dim;
    out.gradient[k] = (std::conj(c) * dc).real() / out.fidelity;
  }
  return out;
}

QuantumState apply_to_state(const Rotor& r, const QuantumState& s) {
  Decomposition d;
  d.n = r.num_qubits();
  d.rotors.push_back(r);
  return apply_to_state(d, s);
}

QuantumState apply_to_state(const Decomposition& d, const QuantumState& s) {
  if ((Eigen::Index{1} << d.n) != s.dim()) throw DimensionError("apply_to_state: dimension mismatch");
  if (s.is_pure()) {
    Eigen::VectorXcd psi = s.vector();
    for (const auto& r : d.rotors) {
      for (std::size_t i = 0; i < r.members.size(); ++i) {
        apply_pauli_rotation(psi, r.members[i], r.angles[i]);
      }
    }
    // Rotations are exactly unitary; renormalize away rounding drift.
    psi /= psi.norm();
    return QuantumState::statevector(std::move(psi));
  }
  DenseOperator rho = s.matrix();
  apply_left(d, rho);
  for (const auto& r : d.rotors) {
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      apply_pauli_rotation_right(rho, r.members[i], -r.angles[i]);
    }
  }
  rho = 0.5 * (rho + rho.adjoint());
  if (s.kind() == StateKind::kDeviation) return QuantumState::deviation(std::move(rho));
  return QuantumState::density(std::move(rho));
}

}  // namespace pdcs
