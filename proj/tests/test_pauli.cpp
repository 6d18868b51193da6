#include <gtest/gtest.h>

#include <random>

#include "pdcs/errors.hpp"
#include "pdcs/pauli.hpp"
#include "support/oracles.hpp"

using namespace pdcs;

namespace {

std::string random_label(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s;
  for (int q = 0; q < n; ++q) s.push_back("IXYZ"[pick(rng)]);
  return s;
}

}  // namespace

TEST(ParseLabel, SingleX) {
  const auto p = parse_label("X");
  EXPECT_EQ(p.num_qubits(), 1);
  EXPECT_EQ(p.x_bits(), 1u);
  EXPECT_EQ(p.z_bits(), 0u);
}

TEST(ParseLabel, ZZZHasOnlyZBits) {
  const auto p = parse_label("ZZZ");
  EXPECT_EQ(p.x_bits(), 0u);
  EXPECT_EQ(p.z_bits(), 0b111u);
}

TEST(ParseLabel, ReportsOffendingPosition) {
  try {
    parse_label("XB");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("position 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_label(""), ParseError);
}

TEST(ParseLabel, RoundTripsRandomLabels) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string s = random_label(1 + trial % 9, rng);
    EXPECT_EQ(parse_label(s).to_label(), s);
  }
}

TEST(Dense, MatchesLiteralTensorProduct) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& label : oracle::all_labels(n, true)) {
      EXPECT_LT((dense(parse_label(label)) - oracle::pauli_matrix(label)).norm(), 1e-15) << label;
    }
  }
}

TEST(Dense, ExamplesFromDefinitions) {
  const Complex i{0, 1};
  DenseOperator z(2, 2);
  z << 1, 0, 0, -1;
  DenseOperator y(2, 2);
  y << 0, -i, i, 0;
  EXPECT_EQ(dense(parse_label("Z")), z);
  EXPECT_EQ(dense(parse_label("Y")), y);
  const DenseOperator xx = dense(parse_label("XX"));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_EQ(xx(r, c), Complex(r + c == 3 ? 1.0 : 0.0));
  }
}

TEST(Dense, HermitianUnitaryInvolutionWithPermutationStructure) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    const auto p = parse_label(random_label(n, rng));
    const DenseOperator m = dense(p);
    const auto id = DenseOperator::Identity(m.rows(), m.cols());
    EXPECT_LT((m - m.adjoint()).norm(), 1e-15);
    EXPECT_LT((m * m - id).norm(), 1e-15);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      int nonzero = 0;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const Complex v = m(r, c);
        if (v == Complex(0)) continue;
        ++nonzero;
        const bool unit = v == Complex(1) || v == Complex(-1) || v == Complex(0, 1) || v == Complex(0, -1);
        EXPECT_TRUE(unit);
      }
      EXPECT_EQ(nonzero, 1);
    }
  }
}

TEST(Dense, CapacityErrorAboveCap) {
  EXPECT_THROW(dense(parse_label("XXXXXXXX")), CapacityError);
  EXPECT_NO_THROW(dense(parse_label("XX"), 2));
  EXPECT_THROW(dense(parse_label("XXX"), 2), CapacityError);
}

TEST(Commutes, Examples) {
  EXPECT_TRUE(commutes(parse_label("XI"), parse_label("IX")));
  EXPECT_FALSE(commutes(parse_label("X"), parse_label("Z")));
  EXPECT_TRUE(commutes(parse_label("XX"), parse_label("ZZ")));
  EXPECT_THROW(commutes(parse_label("X"), parse_label("XX")), DimensionError);
}

TEST(Commutes, AgreesWithDenseCommutatorOnAllTwoQubitPairs) {
  const auto labels = oracle::all_labels(2, true);
  for (const auto& a : labels) {
    for (const auto& b : labels) {
      const bool dense_result = oracle::dense_commute(oracle::pauli_matrix(a), oracle::pauli_matrix(b));
      EXPECT_EQ(commutes(parse_label(a), parse_label(b)), dense_result) << a << " " << b;
    }
  }
}

TEST(Commutes, AgreesWithDenseCommutatorOnRandomPairs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 3;
    const std::string a = random_label(n, rng);
    const std::string b = random_label(n, rng);
    EXPECT_EQ(commutes(parse_label(a), parse_label(b)),
              oracle::dense_commute(oracle::pauli_matrix(a), oracle::pauli_matrix(b)))
        << a << " " << b;
  }
}

TEST(Multiply, Examples) {
  auto [xx, phase_xx] = multiply(parse_label("X"), parse_label("X"));
  EXPECT_TRUE(xx.is_identity());
  EXPECT_EQ(phase_xx.value(), Complex(1));

  auto [y, phase_y] = multiply(parse_label("X"), parse_label("Z"));
  EXPECT_EQ(y.to_label(), "Y");
  EXPECT_EQ(phase_y.value(), Complex(0, -1));

  auto [zx, phase_zx] = multiply(parse_label("ZI"), parse_label("IX"));
  EXPECT_EQ(zx.to_label(), "ZX");
  EXPECT_EQ(phase_zx.value(), Complex(1));
}

TEST(Multiply, MatchesDenseProduct) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 4;
    const std::string a = random_label(n, rng);
    const std::string b = random_label(n, rng);
    const auto [r, phase] = multiply(parse_label(a), parse_label(b));
    const oracle::Matrix expected = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
    EXPECT_LT((phase.value() * oracle::pauli_matrix(r.to_label()) - expected).norm(), 1e-14) << a << "*" << b;
    EXPECT_EQ(r.x_bits(), parse_label(a).x_bits() ^ parse_label(b).x_bits());
  }
}

TEST(PauliTrace, Examples) {
  EXPECT_LT(std::abs(pauli_trace(DenseOperator::Identity(2, 2), parse_label("X"))), 1e-15);
  EXPECT_LT(std::abs(pauli_trace(dense(parse_label("Z")), parse_label("Z")) - Complex(2)), 1e-15);
  DenseOperator h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  EXPECT_LT(std::abs(pauli_trace(h, parse_label("X")) - Complex(std::sqrt(2.0))), 1e-14);
  EXPECT_THROW(pauli_trace(h, parse_label("XX")), DimensionError);
}

TEST(PauliTrace, MatchesDenseTraceOnRandomMatrices) {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 4; ++n) {
    const oracle::Matrix a = oracle::random_unitary(1 << n, rng) + oracle::random_hermitian(1 << n, rng);
    for (int trial = 0; trial < 30; ++trial) {
      const std::string label = random_label(n, rng);
      const Complex expected = (a * oracle::pauli_matrix(label)).trace();
      EXPECT_LT(std::abs(pauli_trace(a, parse_label(label)) - expected), 1e-12) << label;
    }
  }
}

TEST(PauliTrace, ParsevalOverAllStrings) {
  // sum_P |Tr[A P]|^2 = N * ||A||_F^2 over all 4^n strings including identity.
  std::mt19937_64 rng(23);
  const int n = 3;
  const oracle::Matrix a = oracle::random_hermitian(8, rng);
  double sum = std::norm(a.trace());
  for (const auto& p : all_pauli_strings(n)) sum += std::norm(pauli_trace(a, p));
  EXPECT_NEAR(sum, 8.0 * a.squaredNorm(), 1e-9);
}

TEST(AllPauliStrings, CountAndOrder) {
  const auto strings = all_pauli_strings(2);
  ASSERT_EQ(strings.size(), 15u);
  EXPECT_EQ(strings.front().to_label(), "IX");
  EXPECT_EQ(strings.back().to_label(), "ZZ");
  for (std::size_t k = 1; k < strings.size(); ++k) EXPECT_LT(strings[k - 1], strings[k]);
  for (std::size_t k = 0; k < strings.size(); ++k) EXPECT_EQ(strings[k].order_key(), k + 1);
}

TEST(PauliRotation, InPlaceKernelsMatchDenseFormula) {
  std::mt19937_64 rng(8);
  const int n = 3;
  const oracle::Matrix m = oracle::random_unitary(8, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const std::string label = random_label(n, rng);
    const double angle = std::uniform_real_distribution<double>(-3, 3)(rng);
    const oracle::Matrix r = std::cos(angle) * oracle::Matrix::Identity(8, 8) -
                             Complex(0, std::sin(angle)) * oracle::pauli_matrix(label);
    DenseOperator left = m;
    apply_pauli_rotation_left(left, parse_label(label), angle);
    EXPECT_LT((left - r * m).norm(), 1e-13);
    DenseOperator right = m;
    apply_pauli_rotation_right(right, parse_label(label), angle);
    EXPECT_LT((right - m * r).norm(), 1e-13);
    Eigen::VectorXcd v = m.col(0);
    apply_pauli_rotation(v, parse_label(label), angle);
    EXPECT_LT((v - r * m.col(0)).norm(), 1e-13);
    EXPECT_LT((pauli_times(parse_label(label), m) - oracle::pauli_matrix(label) * m).norm(), 1e-13);
  }
}
