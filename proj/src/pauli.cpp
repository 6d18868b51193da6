#include "pdcs/pauli.hpp"

#include <algorithm>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

constexpr std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

std::uint64_t qubit_bit(int n, int qubit) { return std::uint64_t{1} << (n - qubit); }

void require_same_n(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw DimensionError("Pauli qubit-count mismatch: " + std::to_string(p.num_qubits()) +
                         " vs " + std::to_string(q.num_qubits()));
  }
}

}  // namespace

Complex PauliPhase::value() const {
  switch (power & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

PauliString::PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits)
    : n_(n), x_(x_bits), z_(z_bits) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("Pauli qubit count out of range: " + std::to_string(n));
  }
  if ((x_bits | z_bits) & ~low_mask(n)) {
    throw ValidationError("Pauli bits exceed qubit count " + std::to_string(n));
  }
}

PauliString PauliString::identity(int n) { return PauliString(n, 0, 0); }

int PauliString::weight() const { return __builtin_popcountll(support()); }

char PauliString::at(int qubit) const {
  const auto bit = qubit_bit(n_, qubit);
  const bool x = x_ & bit;
  const bool z = z_ & bit;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::to_label() const {
  std::string out(static_cast<std::size_t>(n_), 'I');
  for (int q = 1; q <= n_; ++q) out[static_cast<std::size_t>(q - 1)] = at(q);
  return out;
}

std::uint64_t PauliString::order_key() const {
  std::uint64_t key = 0;
  for (int q = 1; q <= n_; ++q) {
    const auto bit = qubit_bit(n_, q);
    const bool x = x_ & bit;
    const bool z = z_ & bit;
    const std::uint64_t digit = x ? (z ? 2 : 1) : (z ? 3 : 0);
    key = (key << 2) | digit;
  }
  return key;
}

PauliString parse_label(std::string_view label) {
  if (label.empty()) throw ParseError("empty Pauli label");
  if (label.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw ParseError("Pauli label longer than " + std::to_string(kMaxQubits) + " qubits");
  }
  const int n = static_cast<int>(label.size());
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int q = 1; q <= n; ++q) {
    const auto bit = qubit_bit(n, q);
    switch (label[static_cast<std::size_t>(q - 1)]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw ParseError("invalid Pauli character '" +
                         std::string(1, label[static_cast<std::size_t>(q - 1)]) +
                         "' at position " + std::to_string(q) + " in \"" + std::string(label) +
                         "\"");
    }
  }
  return PauliString(n, x, z);
}

DenseOperator dense(const PauliString& p, int max_qubits) {
  if (p.num_qubits() > max_qubits) {
    throw CapacityError("dense realization of " + std::to_string(p.num_qubits()) +
                        " qubits exceeds cap of " + std::to_string(max_qubits));
  }
  const std::uint64_t dim = std::uint64_t{1} << p.num_qubits();
  DenseOperator out = DenseOperator::Zero(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim));
  for (std::uint64_t c = 0; c < dim; ++c) {
    out(static_cast<Eigen::Index>(c ^ p.x_bits()), static_cast<Eigen::Index>(c)) =
        detail::pauli_column_entry(p, c);
  }
  return out;
}

bool commutes(const PauliString& p, const PauliString& q) {
  require_same_n(p, q);
  const auto form = (p.x_bits() & q.z_bits()) ^ (p.z_bits() & q.x_bits());
  return (__builtin_popcountll(form) & 1) == 0;
}

std::pair<PauliString, PauliPhase> multiply(const PauliString& p, const PauliString& q) {
  require_same_n(p, q);
  // Write each string as i^{y} X^x Z^z. Moving Z^{z_p} past X^{x_q} costs
  // (-1)^{|z_p & x_q|}, and the product's own Y count absorbs the rest.
  const int yp = __builtin_popcountll(p.x_bits() & p.z_bits());
  const int yq = __builtin_popcountll(q.x_bits() & q.z_bits());
  const auto x = p.x_bits() ^ q.x_bits();
  const auto z = p.z_bits() ^ q.z_bits();
  const int yr = __builtin_popcountll(x & z);
  const int swaps = __builtin_popcountll(p.z_bits() & q.x_bits());
  const int power = ((yp + yq - yr + 2 * swaps) % 4 + 4) % 4;
  return {PauliString(p.num_qubits(), x, z), PauliPhase{power}};
}

Complex pauli_trace(const DenseOperator& a, const PauliString& p) {
  const std::uint64_t dim = std::uint64_t{1} << p.num_qubits();
  if (static_cast<std::uint64_t>(a.rows()) != dim || a.cols() != a.rows()) {
    throw DimensionError("pauli_trace: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", Pauli needs dim " + std::to_string(dim));
  }
  // Sign pattern first, common i^y factor last.
  Complex sum{0, 0};
  const auto x = p.x_bits();
  const auto z = p.z_bits();
  for (std::uint64_t r = 0; r < dim; ++r) {
    const auto v = a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ x));
    if (__builtin_popcountll(r & z) & 1) {
      sum -= v;
    } else {
      sum += v;
    }
  }
  return sum * PauliPhase{__builtin_popcountll(x & z) & 3}.value();
}

std::vector<PauliString> all_pauli_strings(int n) {
  if (n < 1) throw ValidationError("all_pauli_strings: n must be >= 1");
  if (n > 12) throw CapacityError("all_pauli_strings: n = " + std::to_string(n) + " too large");
  // Per qubit digit 0..3 = I, X, Y, Z; counting in base 4 with qubit 1 most
  // significant yields lexicographic label order.
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  std::vector<PauliString> out;
  out.reserve(static_cast<std::size_t>(total - 1));
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (int q = 1; q <= n; ++q) {
      const auto digit = (code >> (2 * (n - q))) & 3;
      const auto bit = qubit_bit(n, q);
      if (digit == 1 || digit == 2) x |= bit;
      if (digit == 2 || digit == 3) z |= bit;
    }
    out.emplace_back(n, x, z);
  }
  return out;
}

void apply_pauli_rotation_left(DenseOperator& m, const PauliString& p, double angle) {
  const double c = std::cos(angle);
  const Complex mis{0, -std::sin(angle)};
  const auto x = p.x_bits();
  const auto dim = static_cast<std::uint64_t>(m.rows());
  if (x == 0) {
    for (std::uint64_t r = 0; r < dim; ++r) {
      m.row(static_cast<Eigen::Index>(r)) *= c + mis * detail::pauli_column_entry(p, r);
    }
    return;
  }
  // Rows r and r^x mix: new[r] = c m[r] - i s e(r^x) m[r^x].
  for (std::uint64_t r = 0; r < dim; ++r) {
    const auto partner = r ^ x;
    if (partner < r) continue;
    const auto ri = static_cast<Eigen::Index>(r);
    const auto pi = static_cast<Eigen::Index>(partner);
    const Complex to_r = mis * detail::pauli_column_entry(p, partner);
    const Complex to_partner = mis * detail::pauli_column_entry(p, r);
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      const Complex a = m(ri, col);
      const Complex b = m(pi, col);
      m(ri, col) = c * a + to_r * b;
      m(pi, col) = c * b + to_partner * a;
    }
  }
}

void apply_pauli_rotation_right(DenseOperator& m, const PauliString& p, double angle) {
  const double c = std::cos(angle);
  const Complex mis{0, -std::sin(angle)};
  const auto x = p.x_bits();
  const auto dim = static_cast<std::uint64_t>(m.cols());
  if (x == 0) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      m.col(static_cast<Eigen::Index>(col)) *= c + mis * detail::pauli_column_entry(p, col);
    }
    return;
  }
  // (m P)[:, c] = e(c) m[:, c^x].
  for (std::uint64_t col = 0; col < dim; ++col) {
    const auto partner = col ^ x;
    if (partner < col) continue;
    const auto ci = static_cast<Eigen::Index>(col);
    const auto pi = static_cast<Eigen::Index>(partner);
    const Complex from_partner = mis * detail::pauli_column_entry(p, col);
    const Complex from_col = mis * detail::pauli_column_entry(p, partner);
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
      const Complex a = m(row, ci);
      const Complex b = m(row, pi);
      m(row, ci) = c * a + from_partner * b;
      m(row, pi) = c * b + from_col * a;
    }
  }
}

void apply_pauli_rotation(Eigen::VectorXcd& v, const PauliString& p, double angle) {
  const double c = std::cos(angle);
  const Complex mis{0, -std::sin(angle)};
  const auto x = p.x_bits();
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t r = 0; r < dim; ++r) {
    const auto partner = r ^ x;
    if (x == 0) {
      v(static_cast<Eigen::Index>(r)) *= c + mis * detail::pauli_column_entry(p, r);
      continue;
    }
    if (partner < r) continue;
    const auto ri = static_cast<Eigen::Index>(r);
    const auto pi = static_cast<Eigen::Index>(partner);
    const Complex a = v(ri);
    const Complex b = v(pi);
    v(ri) = c * a + mis * detail::pauli_column_entry(p, partner) * b;
    v(pi) = c * b + mis * detail::pauli_column_entry(p, r) * a;
  }
}

DenseOperator pauli_times(const PauliString& p, const DenseOperator& m) {
  DenseOperator out(m.rows(), m.cols());
  const auto x = p.x_bits();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto src = static_cast<std::uint64_t>(r) ^ x;
    out.row(r) = detail::pauli_column_entry(p, src) * m.row(static_cast<Eigen::Index>(src));
  }
  return out;
}

}  // namespace pdcs
