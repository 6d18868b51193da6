#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "pdcs/errors.hpp"
#include "pdcs/simulation.hpp"
#include "support/oracles.hpp"

using namespace pdcs;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

SynthesisConfig quick_config() {
  SynthesisConfig c;
  c.restarts = 4;
  return c;
}

}  // namespace

TEST(ThreeBody, PresetTermsAndUnits) {
  const auto h = three_body_preset(5.0);
  ASSERT_EQ(h.n, 3);
  ASSERT_EQ(h.terms.size(), 4u);
  double zzz = 0.0;
  for (const auto& t : h.terms) {
    if (t.pauli.to_label() == "ZZZ") zzz = t.coefficient;
    else EXPECT_DOUBLE_EQ(t.coefficient, kTwoPi);
  }
  EXPECT_DOUBLE_EQ(zzz, 10 * std::numbers::pi);

  const auto groups = three_body_groups(5.0, 2.0);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].terms.size(), 3u);
  EXPECT_TRUE(groups[0].is_commuting());
  EXPECT_DOUBLE_EQ(groups[0].terms[0].coefficient, 2 * kTwoPi);
  EXPECT_FALSE(h.is_commuting());
  EXPECT_LT((combine_groups(groups).dense() - three_body_preset(5.0, 2.0).dense()).norm(), 1e-12);
}

TEST(ThreeBody, DecoupledPresetReducesToTheFieldGroup) {
  const auto groups = three_body_groups(0.0);
  EXPECT_TRUE(groups[0].is_commuting());
  EXPECT_LT((three_body_preset(0.0).dense() - groups[0].dense()).norm(), 1e-15);
}

TEST(Magnetization, TracelessHermitianSum) {
  const DenseOperator m = magnetization_x(3);
  EXPECT_NEAR(std::abs(m.trace()), 0.0, 1e-14);
  EXPECT_LT((m - m.adjoint()).norm(), 1e-14);
  const oracle::Matrix expected =
      0.5 * (oracle::pauli_matrix("XII") + oracle::pauli_matrix("IXI") + oracle::pauli_matrix("IIX"));
  EXPECT_LT((m - expected).norm(), 1e-14);
  EXPECT_LT((transverse_deviation(3).matrix() - expected).norm(), 1e-14);
}

TEST(EvolveSeries, ZeroStepsGivesInitialValue) {
  const auto rho0 = transverse_deviation(3);
  const DenseOperator step = exact_propagator(three_body_preset(5.0), 0.1);
  const auto s = evolve_series(step, rho0, magnetization_x(3), 0, 0.1);
  ASSERT_EQ(s.values.size(), 1u);
  EXPECT_NEAR(s.values[0], 6.0, 1e-12);
  EXPECT_EQ(s.times[0], 0.0);
}

TEST(EvolveSeries, MatchesDirectPowers) {
  std::mt19937_64 rng(3);
  const oracle::Matrix u = oracle::random_unitary(8, rng);
  const oracle::Matrix obs = oracle::random_hermitian(8, rng);
  const auto rho0 = transverse_deviation(3);
  const auto s = evolve_series(DenseOperator(u), rho0, obs, 6, 0.25);
  ASSERT_EQ(s.values.size(), 7u);
  oracle::Matrix rho = rho0.matrix();
  for (int k = 0; k <= 6; ++k) {
    EXPECT_NEAR(s.values[k], (rho * obs).trace().real(), 1e-10);
    EXPECT_DOUBLE_EQ(s.times[k], 0.25 * k);
    rho = u * rho * u.adjoint();
  }
}

TEST(EvolveSeries, PreservesTraceOfDensityStates) {
  std::mt19937_64 rng(4);
  const oracle::Matrix u = oracle::random_unitary(4, rng);
  const auto rho0 = QuantumState::density((DenseOperator::Identity(4, 4) + oracle::pauli_matrix("ZX") * 0.3) / 4.0);
  const auto s = evolve_series(DenseOperator(u), rho0, DenseOperator::Identity(4, 4), 10);
  for (double v : s.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(EvolveSeries, RejectsNonHermitianObservable) {
  DenseOperator obs = DenseOperator::Zero(2, 2);
  obs(0, 1) = Complex{0.0, 1.0};
  const Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(2, std::sqrt(0.5));
  EXPECT_THROW(evolve_series(DenseOperator(DenseOperator::Identity(2, 2)), QuantumState::statevector(plus), obs, 2),
               ValidationError);
  obs(0, 1) = 1.0;
  EXPECT_NO_THROW(evolve_series(DenseOperator(DenseOperator::Identity(2, 2)),
                                QuantumState::density(oracle::pauli_matrix("X") * 0.5 +
                                                      DenseOperator::Identity(2, 2) * 0.5),
                                obs, 2));
}

TEST(EvolveSeries, CyclicPermutationSymmetry) {
  // The preset is invariant under qubit cycling, so each spin carries a third of the signal.
  const auto h = three_body_preset(5.0);
  const DenseOperator step = exact_propagator(h, 0.05);
  const auto rho0 = transverse_deviation(3);
  std::vector<std::vector<double>> per_spin;
  for (const auto& label : {"XII", "IXI", "IIX"}) {
    per_spin.push_back(evolve_series(step, rho0, 0.5 * oracle::pauli_matrix(label), 12).values);
  }
  const auto total = evolve_series(step, rho0, magnetization_x(3), 12).values;
  for (std::size_t k = 0; k < total.size(); ++k) {
    EXPECT_NEAR(per_spin[0][k], per_spin[1][k], 1e-10);
    EXPECT_NEAR(per_spin[1][k], per_spin[2][k], 1e-10);
    EXPECT_NEAR(3 * per_spin[0][k], total[k], 1e-10);
  }
}

TEST(NormalizeToFirst, StartsAtOneAndRejectsZero) {
  const auto step = exact_propagator(three_body_preset(5.0), 0.1);
  const auto s = normalize_to_first(evolve_series(step, transverse_deviation(3), magnetization_x(3), 5, 0.1));
  EXPECT_DOUBLE_EQ(s.values[0], 1.0);
  for (double v : s.values) EXPECT_LE(std::abs(v), 1.0 + 1e-12);
  TimeSeries zero{{0.0, 1.0}, {0.0, 1.0}};
  EXPECT_THROW(normalize_to_first(zero), ValidationError);
}

TEST(PdcsStep, ZeroDurationNeedsNoRotors) {
  const auto r = pdcs_step_propagator(three_body_preset(5.0), 0.0, quick_config());
  EXPECT_TRUE(r.decomposition.rotors.empty());
}

TEST(PdcsStep, DecoupledPresetIsOneRotor) {
  const auto r = pdcs_step_propagator(three_body_preset(0.0), 0.3, quick_config());
  EXPECT_EQ(r.report.status, SynthesisStatus::kConverged);
  EXPECT_EQ(r.decomposition.rotors.size(), 1u);
}

TEST(PdcsStep, SeriesTracksExactEvolutionWithBoundedDrift) {
  const auto h = three_body_preset(5.0);
  const double tau = 0.05;
  const DenseOperator exact = exact_propagator(h, tau);
  const auto r = pdcs_step_propagator(h, tau, quick_config());
  ASSERT_EQ(r.report.status, SynthesisStatus::kConverged);
  const double gap = oracle::op_norm(exact - std::polar(1.0, -std::arg((exact.adjoint() *
                                                                        decomposition_unitary(r.decomposition))
                                                                           .trace())) *
                                                 decomposition_unitary(r.decomposition));
  const auto rho0 = transverse_deviation(3);
  const DenseOperator obs = magnetization_x(3);
  const auto a = evolve_series(exact, rho0, obs, 20, tau);
  const auto b = evolve_series(r.decomposition, rho0, obs, 20, tau);
  // |<O>_k - <O'>_k| <= 2 k ||U - W|| ||rho0||_1 ||O||.
  const double bound_scale = 2 * 6.0 * 1.5;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    EXPECT_LE(std::abs(a.values[k] - b.values[k]), bound_scale * static_cast<double>(k) * gap + 1e-12);
  }
}

TEST(StatePresets, AllPresetsAreConsistent) {
  for (const auto& name : state_preset_names()) {
    const auto [initial, target] = state_preset(name);
    EXPECT_EQ(initial.num_qubits(), target.num_qubits()) << name;
    EXPECT_NEAR(std::abs(initial.matrix().trace() - target.matrix().trace()), 0.0, 1e-12) << name;
  }
  EXPECT_THROW(state_preset("nope"), ValidationError);
}
