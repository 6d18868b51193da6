#include "pdcs/trotter.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "pdcs/errors.hpp"

namespace pdcs {

void HamiltonianSpec::validate() const {
  if (n < 1 || n > kMaxQubits) throw ValidationError("Hamiltonian qubit count out of range");
  for (const auto& term : terms) {
    if (term.pauli.num_qubits() != n) {
      throw DimensionError("Hamiltonian term " + term.pauli.to_label() + " does not act on " +
                           std::to_string(n) + " qubits");
    }
    if (!std::isfinite(term.coefficient)) {
      throw ValidationError("Hamiltonian term " + term.pauli.to_label() + " has a non-finite coefficient");
    }
  }
}

DenseOperator HamiltonianSpec::dense(int max_qubits) const {
  validate();
  if (n > max_qubits) throw CapacityError("Hamiltonian too large for dense realization");
  const Eigen::Index dim = Eigen::Index{1} << n;
  DenseOperator h = DenseOperator::Zero(dim, dim);
  for (const auto& term : terms) {
    const auto& p = term.pauli;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto col = static_cast<std::uint64_t>(c);
      h(static_cast<Eigen::Index>(col ^ p.x_bits()), c) += term.coefficient * detail::pauli_column_entry(p, col);
    }
  }
  return h;
}

bool HamiltonianSpec::is_commuting() const {
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      if (!commutes(terms[a].pauli, terms[b].pauli)) return false;
    }
  }
  return true;
}

DenseOperator exact_propagator(const HamiltonianSpec& h, double t) {
  const DenseOperator m = h.dense();
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(m);
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  Eigen::VectorXcd phases(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k) phases(k) = std::polar(1.0, -eig.eigenvalues()(k) * t);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

HamiltonianSpec combine_groups(const std::vector<HamiltonianSpec>& groups) {
  if (groups.empty()) throw ValidationError("at least one Hamiltonian group is required");
  HamiltonianSpec total{groups.front().n, {}};
  for (const auto& g : groups) {
    g.validate();
    if (g.n != total.n) throw DimensionError("Hamiltonian groups act on different qubit counts");
    total.terms.insert(total.terms.end(), g.terms.begin(), g.terms.end());
  }
  return total;
}

Rotor group_rotor(const HamiltonianSpec& group, double dt) {
  group.validate();
  if (!group.is_commuting()) {
    throw ValidationError("Trotter group terms must commute pairwise; split the group");
  }
  std::vector<PauliString> members;
  std::vector<double> angles;
  for (const auto& term : group.terms) {
    if (term.pauli.is_identity()) continue;  // global phase only
    const auto it = std::find(members.begin(), members.end(), term.pauli);
    if (it != members.end()) {
      angles[static_cast<std::size_t>(it - members.begin())] += term.coefficient * dt;
    } else {
      members.push_back(term.pauli);
      angles.push_back(term.coefficient * dt);
    }
  }
  return Rotor::make(std::move(members), std::move(angles));
}

namespace {

void push_nontrivial(Decomposition& d, const Rotor& r) {
  if (!r.members.empty()) d.rotors.push_back(r);
}

void check_steps(const std::vector<HamiltonianSpec>& groups, int steps) {
  if (steps < 1) throw ValidationError("Trotter step count must be >= 1");
  combine_groups(groups);  // validates shared qubit count
}

}  // namespace

Decomposition trotter1_decomposition(const std::vector<HamiltonianSpec>& groups, double t, int steps) {
  check_steps(groups, steps);
  const double dt = t / steps;
  std::vector<Rotor> factors;
  for (const auto& g : groups) factors.push_back(group_rotor(g, dt));
  Decomposition d;
  d.n = groups.front().n;
  for (int s = 0; s < steps; ++s) {
    for (const auto& f : factors) push_nontrivial(d, f);
  }
  return d;
}

Decomposition trotter2_decomposition(const std::vector<HamiltonianSpec>& groups, double t, int steps) {
  if (groups.size() != 2) throw ValidationError("the symmetrized Trotter form takes exactly two groups");
  check_steps(groups, steps);
  const double dt = t / steps;
  const Rotor half_a = group_rotor(groups[0], dt / 2);
  const Rotor full_a = group_rotor(groups[0], dt);
  const Rotor full_b = group_rotor(groups[1], dt);
  Decomposition d;
  d.n = groups.front().n;
  push_nontrivial(d, half_a);
  for (int s = 0; s < steps; ++s) {
    push_nontrivial(d, full_b);
    push_nontrivial(d, s + 1 < steps ? full_a : half_a);
  }
  return d;
}

DenseOperator trotter1(const std::vector<HamiltonianSpec>& groups, double t, int steps) {
  return decomposition_unitary(trotter1_decomposition(groups, t, steps));
}

DenseOperator trotter2(const std::vector<HamiltonianSpec>& groups, double t, int steps) {
  return decomposition_unitary(trotter2_decomposition(groups, t, steps));
}

std::vector<TrotterComparisonRow> compare_decompositions(const std::vector<HamiltonianSpec>& groups,
                                                         double t, const std::vector<int>& m_values,
                                                         const SynthesisConfig& config) {
  if (m_values.empty()) throw ValidationError("compare_decompositions needs at least one m");
  for (int m : m_values) {
    if (m < 1) throw ValidationError("rotor counts must be >= 1");
  }
  const DenseOperator exact = exact_propagator(combine_groups(groups), t);
  const int k = static_cast<int>(groups.size());

  // A budget-m run stops after step m, so one run at the largest budget
  // records every smaller budget's fidelity along the way.
  SynthesisConfig forced = config;
  forced.fidelity_threshold = 1.0;
  forced.max_rotors = *std::max_element(m_values.begin(), m_values.end());
  const auto pdcs = synthesize_unitary(exact, forced);
  const auto& steps = pdcs.report.iterations;

  std::vector<TrotterComparisonRow> rows;
  for (int m : m_values) {
    TrotterComparisonRow row;
    row.m = m;
    row.trotter1_steps = std::max(1, m / k);
    row.f_trotter1 = fidelity_unitary(exact, trotter1(groups, t, row.trotter1_steps));
    if (k == 2) {
      row.trotter2_steps = std::max(1, (m - 1) / 2);
      row.f_trotter2 = fidelity_unitary(exact, trotter2(groups, t, row.trotter2_steps));
    }
    if (steps.empty()) {
      row.f_pdcs = pdcs.decomposition.achieved_fidelity;
    } else {
      const auto last = std::min(static_cast<std::size_t>(m), steps.size());
      row.f_pdcs = steps[last - 1].fidelity;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pdcs
