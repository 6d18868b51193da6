#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pdcs {

using Complex = std::complex<double>;

/// Dense complex square matrix of dimension 2^n.
using DenseOperator = Eigen::MatrixXcd;

/// Largest qubit count realized densely unless the caller overrides it.
inline constexpr int kDefaultDenseCap = 7;

/// Upper bound on qubits representable by the bit-mask encoding.
inline constexpr int kMaxQubits = 32;

/// One of {+1, -1, +i, -i}, stored as the exponent k of i^k.
struct PauliPhase {
  int power = 0;  // 0..3

  Complex value() const;
  friend bool operator==(PauliPhase, PauliPhase) = default;
};

/**
 * An n-qubit Pauli operator in symplectic form.
 *
 * Bit (n - q) of each mask belongs to qubit q (1-based), so the leftmost label
 * character is the most significant bit of the computational-basis index.
 * The dense realization is the literal tensor product of I/X/Y/Z with
 * Y = [[0, -i], [i, 0]]; no phase is stored.
 */
class PauliString {
 public:
  PauliString() = default;
  PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits);

  /// The identity string on n qubits.
  static PauliString identity(int n);

  int num_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Number of qubits acted on nontrivially.
  int weight() const;

  /// Mask of qubits acted on nontrivially (same bit convention as x/z).
  std::uint64_t support() const { return x_ | z_; }

  /// Character for qubit q (1-based): one of I, X, Y, Z.
  char at(int qubit) const;

  std::string to_label() const;

  /// Base-4 code (I=0, X=1, Y=2, Z=3, qubit 1 most significant); orders like the label.
  std::uint64_t order_key() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.order_key() <=> b.order_key();
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Parses a label such as "XIZ"; throws ParseError naming the 1-based offending position.
PauliString parse_label(std::string_view label);

/// Dense 2^n x 2^n realization; throws CapacityError when n exceeds max_qubits.
DenseOperator dense(const PauliString& p, int max_qubits = kDefaultDenseCap);

/// Symplectic commutation test, never touches dense matrices.
bool commutes(const PauliString& p, const PauliString& q);

/// dense(p) * dense(q) == phase * dense(result).
std::pair<PauliString, PauliPhase> multiply(const PauliString& p, const PauliString& q);

/// Tr[a * dense(p)] in O(2^n) using the single-nonzero-per-row structure of p.
Complex pauli_trace(const DenseOperator& a, const PauliString& p);

/// All 4^n - 1 non-identity strings in lexicographic label order (I < X < Y < Z).
std::vector<PauliString> all_pauli_strings(int n);

namespace detail {

/// Entry of dense(p) at (row ^ x, row): i^{popcount(x & z)} * (-1)^{popcount(row & z)}.
inline Complex pauli_column_entry(const PauliString& p, std::uint64_t column) {
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int y_count = __builtin_popcountll(p.x_bits() & p.z_bits());
  const int sign = __builtin_popcountll(column & p.z_bits()) & 1;
  return kIPow[(y_count + 2 * sign) & 3];
}

}  // namespace detail

/// out = (cos(angle) I - i sin(angle) P) * m, applied in place using the Pauli permutation structure.
void apply_pauli_rotation_left(DenseOperator& m, const PauliString& p, double angle);

/// m = m * (cos(angle) I - i sin(angle) P).
void apply_pauli_rotation_right(DenseOperator& m, const PauliString& p, double angle);

/// v = (cos(angle) I - i sin(angle) P) * v.
void apply_pauli_rotation(Eigen::VectorXcd& v, const PauliString& p, double angle);

/// Returns dense(p) * m without materializing dense(p).
DenseOperator pauli_times(const PauliString& p, const DenseOperator& m);

}  // namespace pdcs
