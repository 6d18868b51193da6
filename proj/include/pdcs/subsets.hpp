#pragma once

#include <cstdint>
#include <vector>

#include "pdcs/pauli.hpp"

namespace pdcs {

/// Largest n handled by enumerate_maximal_subsets unless overridden (75,735 subsets at n = 5).
inline constexpr int kDefaultEnumerationCap = 5;

/// A set of pairwise-commuting non-identity Pauli strings, members sorted by label.
struct CommutingSubset {
  int n = 0;
  std::vector<PauliString> members;

  /// Builds a subset, sorting and validating members (pairwise commuting, distinct, no identity).
  static CommutingSubset from_members(int n, std::vector<PauliString> members);

  bool is_maximal() const { return members.size() == (std::size_t{1} << n) - 1; }

  /// Comma-separated labels, e.g. "IX,ZI,ZX".
  std::string to_string() const;

  friend bool operator==(const CommutingSubset&, const CommutingSubset&) = default;
};

/// Closed-form count prod_{k=1..n} (2^k + 1) of maximal commuting subsets.
std::uint64_t maximal_subset_count(int n);

/**
 * Every maximal commuting subset on n qubits, exactly once.
 *
 * Each subset is the nonzero part of a Lagrangian subspace of F_2^{2n}. The
 * subspaces are generated as reduced row-echelon bases (one per pivot pattern
 * and free-bit assignment, isotropy pruned row by row), which makes every
 * subspace appear once without a dedup table. Output is sorted
 * lexicographically by member labels.
 */
std::vector<CommutingSubset> enumerate_maximal_subsets(int n, int max_qubits = kDefaultEnumerationCap);

/// Sum of |Tr[r P]| over the members.
double subset_overlap(const DenseOperator& r, const CommutingSubset& s);

/// Per-Pauli overlap magnitudes |Tr[r P]| indexed by PauliString::order_key() - 1.
std::vector<double> pauli_overlap_table(const DenseOperator& r, int n);

/// Subset score from a precomputed overlap table.
double subset_overlap(const std::vector<double>& table, const CommutingSubset& s);

/// Candidate with the largest overlap; the earliest candidate wins ties.
const CommutingSubset& select_best_subset(const DenseOperator& r,
                                          const std::vector<CommutingSubset>& candidates);

/**
 * Up to k distinct maximal subsets grown greedily from the highest-overlap
 * Paulis.
 *
 * All non-identity Paulis are ranked by |Tr[r P]| (stable on label order).
 * Seed i starts from the i-th ranked string and admits every later-ranked
 * string that commutes with the current members; seeds are tried in rank order
 * until k distinct subsets are produced or seeds run out.
 */
std::vector<CommutingSubset> greedy_candidates(const DenseOperator& r, int n, int k);

/// Same as above but from a precomputed overlap table.
std::vector<CommutingSubset> greedy_candidates(const std::vector<double>& table, int n, int k);

}  // namespace pdcs
