#include <gtest/gtest.h>

#include <random>

#include "pdcs/errors.hpp"
#include "pdcs/trotter.hpp"
#include "support/oracles.hpp"

using namespace pdcs;

namespace {

HamiltonianSpec single(const char* label, double c) {
  const auto p = parse_label(label);
  return HamiltonianSpec{p.num_qubits(), {{p, c}}};
}

std::vector<HamiltonianSpec> xz_pair() { return {single("X", 1.0), single("Z", 1.0)}; }

oracle::Matrix dense_oracle(const HamiltonianSpec& h) {
  oracle::Matrix m = oracle::Matrix::Zero(1 << h.n, 1 << h.n);
  for (const auto& t : h.terms) m += t.coefficient * oracle::pauli_matrix(t.pauli.to_label());
  return m;
}

}  // namespace

TEST(Hamiltonian, DenseIsHermitianWeightedSum) {
  HamiltonianSpec h{2, {{parse_label("XX"), 0.7}, {parse_label("ZI"), -1.2}, {parse_label("YZ"), 0.1}}};
  const DenseOperator m = h.dense();
  EXPECT_LT((m - m.adjoint()).norm(), 1e-12);
  EXPECT_LT((m - dense_oracle(h)).norm(), 1e-14);
  EXPECT_FALSE(h.is_commuting());
}

TEST(Hamiltonian, ValidationErrors) {
  HamiltonianSpec h{2, {{parse_label("X"), 1.0}}};
  EXPECT_THROW(h.validate(), DimensionError);
  h = {1, {{parse_label("X"), std::numeric_limits<double>::infinity()}}};
  EXPECT_THROW(h.validate(), ValidationError);
}

TEST(ExactPropagator, MatchesMatrixExponential) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    HamiltonianSpec h{3, {}};
    for (const auto& label : {"XII", "IYZ", "ZZZ", "XYI", "IIZ"}) h.terms.push_back({parse_label(label), g(rng)});
    const double t = 0.3 + trial * 0.2;
    const DenseOperator u = exact_propagator(h, t);
    EXPECT_LT((u - oracle::expm_hermitian(dense_oracle(h), t)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((u.adjoint() * u - DenseOperator::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExactPropagator, ZeroTimeDiagonalAndGroupProperty) {
  const auto h = single("Z", 2.5);
  EXPECT_LT((exact_propagator(h, 0.0) - DenseOperator::Identity(2, 2)).norm(), 1e-15);
  const DenseOperator u = exact_propagator(h, 0.4);
  EXPECT_LT(std::abs(u(0, 0) - std::polar(1.0, -1.0)), 1e-14);
  EXPECT_LT(std::abs(u(1, 1) - std::polar(1.0, 1.0)), 1e-14);
  EXPECT_LT(std::abs(u(0, 1)), 1e-15);

  const HamiltonianSpec mixed{2, {{parse_label("XY"), 0.8}, {parse_label("ZI"), 1.1}, {parse_label("IX"), -0.4}}};
  EXPECT_LT((exact_propagator(mixed, 0.3) * exact_propagator(mixed, 0.5) - exact_propagator(mixed, 0.8)).norm(),
            1e-10);
}

TEST(Trotter, CommutingSplitIsExact) {
  const std::vector<HamiltonianSpec> groups{single("ZI", 0.9), single("IZ", -1.7)};
  const DenseOperator exact = exact_propagator(combine_groups(groups), 1.3);
  EXPECT_NEAR(fidelity_unitary(exact, trotter1(groups, 1.3, 1)), 1.0, 1e-12);
  EXPECT_NEAR(fidelity_unitary(exact, trotter2(groups, 1.3, 1)), 1.0, 1e-12);
  EXPECT_LT((trotter1(groups, 1.3, 3) - trotter2(groups, 1.3, 3)).norm(), 1e-12);
}

TEST(Trotter, SingleGroupIsExact) {
  const std::vector<HamiltonianSpec> groups{HamiltonianSpec{2, {{parse_label("XX"), 0.4}, {parse_label("ZZ"), 1.1}}}};
  const DenseOperator exact = exact_propagator(groups[0], 2.0);
  for (int m : {1, 2, 5}) EXPECT_LT((trotter1(groups, 2.0, m) - exact).norm(), 1e-12);
}

TEST(Trotter, SymmetrizedWithEmptyFirstGroupIsExact) {
  const std::vector<HamiltonianSpec> groups{HamiltonianSpec{1, {}}, single("Z", 0.8)};
  EXPECT_LT((trotter2(groups, 1.5, 4) - exact_propagator(groups[1], 1.5)).norm(), 1e-12);
}

TEST(Trotter, ValidationErrors) {
  const std::vector<HamiltonianSpec> non_commuting{HamiltonianSpec{1, {{parse_label("X"), 1.0}, {parse_label("Z"), 1.0}}}};
  EXPECT_THROW(trotter1(non_commuting, 1.0, 2), ValidationError);
  const std::vector<HamiltonianSpec> three{single("X", 1), single("Y", 1), single("Z", 1)};
  EXPECT_THROW(trotter2(three, 1.0, 2), ValidationError);
  EXPECT_NO_THROW(trotter1(three, 1.0, 2));
  EXPECT_THROW(trotter1(xz_pair(), 1.0, 0), ValidationError);
}

TEST(Trotter, RotorCounts) {
  EXPECT_EQ(trotter1_decomposition(xz_pair(), 1.0, 3).rotors.size(), 6u);
  EXPECT_EQ(trotter2_decomposition(xz_pair(), 1.0, 3).rotors.size(), 7u);
}

TEST(Trotter, MatchesOracleProducts) {
  const auto groups = xz_pair();
  const double t = 1.0;
  const int m = 3;
  const double dt = t / m;
  const oracle::Matrix a = oracle::expm_hermitian(oracle::single_pauli('X'), dt);
  const oracle::Matrix b = oracle::expm_hermitian(oracle::single_pauli('Z'), dt);
  const oracle::Matrix half = oracle::expm_hermitian(oracle::single_pauli('X'), dt / 2);
  oracle::Matrix first = oracle::Matrix::Identity(2, 2);
  oracle::Matrix second = oracle::Matrix::Identity(2, 2);
  for (int s = 0; s < m; ++s) {
    first = b * a * first;
    second = half * b * half * second;
  }
  EXPECT_LT((trotter1(groups, t, m) - first).norm(), 1e-12);
  EXPECT_LT((trotter2(groups, t, m) - second).norm(), 1e-12);
}

TEST(Trotter, ErrorShrinksBetweenTenAndTwentySteps) {
  const auto groups = xz_pair();
  const DenseOperator exact = exact_propagator(combine_groups(groups), 1.0);
  const double e10 = oracle::op_norm(exact - trotter1(groups, 1.0, 10));
  const double e20 = oracle::op_norm(exact - trotter1(groups, 1.0, 20));
  EXPECT_NEAR(e10 / e20, 2.0, 0.2);
}

TEST(Trotter, LogLogErrorSlopes) {
  const auto groups = xz_pair();
  const DenseOperator exact = exact_propagator(combine_groups(groups), 1.0);
  std::vector<double> steps;
  std::vector<double> err1;
  std::vector<double> err2;
  for (int m : {4, 8, 16, 32, 64, 128}) {
    steps.push_back(m);
    err1.push_back(oracle::op_norm(exact - trotter1(groups, 1.0, m)));
    err2.push_back(oracle::op_norm(exact - trotter2(groups, 1.0, m)));
  }
  EXPECT_NEAR(oracle::loglog_slope(steps, err1), -1.0, 0.2);
  EXPECT_NEAR(oracle::loglog_slope(steps, err2), -2.0, 0.2);
}

TEST(CompareDecompositions, CommutingGroupingGivesUnitTrotterColumns) {
  const std::vector<HamiltonianSpec> groups{single("ZI", 0.9), single("IZ", -1.7)};
  SynthesisConfig c;
  c.restarts = 2;
  const auto rows = compare_decompositions(groups, 1.0, {1, 2, 3}, c);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.f_trotter1, 1.0, 1e-12);
    EXPECT_NEAR(r.f_trotter2, 1.0, 1e-12);
    EXPECT_GE(r.f_pdcs, 0.9999);
  }
}

TEST(CompareDecompositions, DeterministicAndAccountsRotors) {
  SynthesisConfig c;
  c.restarts = 2;
  c.seed = 5;
  const auto a = compare_decompositions(xz_pair(), 1.0, {1, 2, 3, 4, 5}, c);
  const auto b = compare_decompositions(xz_pair(), 1.0, {1, 2, 3, 4, 5}, c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].f_pdcs, b[k].f_pdcs);
    EXPECT_EQ(a[k].f_trotter1, b[k].f_trotter1);
    EXPECT_EQ(a[k].f_trotter2, b[k].f_trotter2);
    EXPECT_LE(2 * a[k].trotter1_steps, std::max(a[k].m, 2));
    EXPECT_LE(2 * a[k].trotter2_steps + 1, std::max(a[k].m, 3));
  }
  EXPECT_EQ(a[4].trotter1_steps, 2);
  EXPECT_EQ(a[4].trotter2_steps, 2);
  EXPECT_THROW(compare_decompositions(xz_pair(), 1.0, {}, c), ValidationError);
}

TEST(CompareDecompositions, LargeBudgetsApproachOne) {
  SynthesisConfig c;
  c.restarts = 2;
  const auto rows = compare_decompositions(xz_pair(), 0.5, {20}, c);
  EXPECT_GT(rows[0].f_trotter1, 0.999);
  EXPECT_GT(rows[0].f_trotter2, 0.999);
  EXPECT_GT(rows[0].f_pdcs, 0.999);
}
