#include "pdcs/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

// Scores closer than this (relative) are treated as tied.
constexpr double kTieTolerance = 1e-10;

bool strictly_better(double candidate, double incumbent) {
  return candidate > incumbent + kTieTolerance * std::max(1.0, std::abs(incumbent));
}

bool members_less(const std::vector<PauliString>& a, const std::vector<PauliString>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Symplectic vectors packed as (x << n) | z.
class LagrangianEnumerator {
 public:
  explicit LagrangianEnumerator(int n) : n_(n), z_mask_((std::uint64_t{1} << n) - 1) {}

  std::vector<std::vector<std::uint64_t>> run() {
    const int width = 2 * n_;
    for (std::uint64_t pivot_mask = 0; pivot_mask < (std::uint64_t{1} << width); ++pivot_mask) {
      if (__builtin_popcountll(pivot_mask) != n_) continue;
      pivots_.clear();
      for (int b = width - 1; b >= 0; --b) {
        if (pivot_mask & (std::uint64_t{1} << b)) pivots_.push_back(b);
      }
      pivot_mask_ = pivot_mask;
      rows_.assign(static_cast<std::size_t>(n_), 0);
      extend(0);
    }
    return std::move(bases_);
  }

 private:
  bool orthogonal(std::uint64_t u, std::uint64_t v) const {
    const auto ux = u >> n_;
    const auto uz = u & z_mask_;
    const auto vx = v >> n_;
    const auto vz = v & z_mask_;
    return (__builtin_popcountll((ux & vz) ^ (uz & vx)) & 1) == 0;
  }

  void extend(std::size_t k) {
    if (k == rows_.size()) {
      bases_.push_back(rows_);
      return;
    }
    const int pivot = pivots_[k];
    const std::uint64_t lead = std::uint64_t{1} << pivot;
    // Free positions: below the pivot and not another row's pivot.
    const std::uint64_t free = (lead - 1) & ~pivot_mask_;
    std::uint64_t sub = free;
    while (true) {
      const std::uint64_t row = lead | sub;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = orthogonal(row, rows_[i]);
      if (ok) {
        rows_[k] = row;
        extend(k + 1);
      }
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }

  int n_;
  std::uint64_t z_mask_;
  std::uint64_t pivot_mask_ = 0;
  std::vector<int> pivots_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::vector<std::uint64_t>> bases_;
};

}  // namespace

CommutingSubset CommutingSubset::from_members(int n, std::vector<PauliString> members) {
  for (const auto& p : members) {
    if (p.num_qubits() != n) throw DimensionError("subset member has wrong qubit count");
    if (p.is_identity()) throw ValidationError("identity string in commuting subset");
  }
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ValidationError("duplicate member in commuting subset");
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!commutes(members[i], members[j])) {
        throw ContractError("subset members " + members[i].to_label() + " and " +
                            members[j].to_label() + " do not commute");
      }
    }
  }
  return CommutingSubset{n, std::move(members)};
}

std::string CommutingSubset::to_string() const {
  std::string out;
  for (const auto& p : members) {
    if (!out.empty()) out += ',';
    out += p.to_label();
  }
  return out;
}

std::uint64_t maximal_subset_count(int n) {
  std::uint64_t count = 1;
  for (int k = 1; k <= n; ++k) count *= (std::uint64_t{1} << k) + 1;
  return count;
}

std::vector<CommutingSubset> enumerate_maximal_subsets(int n, int max_qubits) {
  if (n < 1) throw ValidationError("enumerate_maximal_subsets: n must be >= 1");
  if (n > max_qubits) {
    throw CapacityError("exhaustive subset enumeration capped at n = " +
                        std::to_string(max_qubits) + " (requested " + std::to_string(n) +
                        "); use greedy_candidates instead");
  }
  const auto bases = LagrangianEnumerator(n).run();
  const std::uint64_t z_mask = (std::uint64_t{1} << n) - 1;
  const std::uint64_t span = std::uint64_t{1} << n;

  std::vector<CommutingSubset> out;
  out.reserve(bases.size());
  for (const auto& basis : bases) {
    CommutingSubset s{n, {}};
    s.members.reserve(span - 1);
    for (std::uint64_t combo = 1; combo < span; ++combo) {
      std::uint64_t v = 0;
      for (int i = 0; i < n; ++i) {
        if (combo & (std::uint64_t{1} << i)) v ^= basis[static_cast<std::size_t>(i)];
      }
      s.members.emplace_back(n, v >> n, v & z_mask);
    }
    std::sort(s.members.begin(), s.members.end());
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const CommutingSubset& a, const CommutingSubset& b) {
    return members_less(a.members, b.members);
  });
  return out;
}

std::vector<double> pauli_overlap_table(const DenseOperator& r, int n) {
  const auto paulis = all_pauli_strings(n);
  std::vector<double> table(paulis.size());
  for (std::size_t i = 0; i < paulis.size(); ++i) table[i] = std::abs(pauli_trace(r, paulis[i]));
  return table;
}

double subset_overlap(const std::vector<double>& table, const CommutingSubset& s) {
  double f = 0.0;
  for (const auto& p : s.members) {
    const auto idx = p.order_key() - 1;
    if (idx >= table.size()) throw DimensionError("overlap table smaller than subset qubit count");
    f += table[idx];
  }
  return f;
}

double subset_overlap(const DenseOperator& r, const CommutingSubset& s) {
  double f = 0.0;
  for (const auto& p : s.members) f += std::abs(pauli_trace(r, p));
  return f;
}

const CommutingSubset& select_best_subset(const DenseOperator& r,
                                          const std::vector<CommutingSubset>& candidates) {
  if (candidates.empty()) throw ValidationError("select_best_subset: empty candidate list");
  const int n = candidates.front().n;
  const auto table = pauli_overlap_table(r, n);
  std::size_t best = 0;
  double best_score = subset_overlap(table, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double score = subset_overlap(table, candidates[i]);
    if (strictly_better(score, best_score)) {
      best = i;
      best_score = score;
    }
  }
  return candidates[best];
}

std::vector<CommutingSubset> greedy_candidates(const std::vector<double>& table, int n, int k) {
  if (n < 1 || k < 1) throw ValidationError("greedy_candidates: n and k must be >= 1");
  const auto paulis = all_pauli_strings(n);
  if (table.size() != paulis.size()) throw DimensionError("overlap table size mismatch");

  // Quantized so that floating-point noise cannot reorder tied overlaps.
  std::vector<long long> level(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) level[i] = std::llround(table[i] * 1e9);
  std::vector<std::size_t> rank(paulis.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return level[a] > level[b]; });

  std::vector<CommutingSubset> out;
  std::set<std::vector<std::uint64_t>> seen;
  for (std::size_t seed = 0; seed < rank.size() && out.size() < static_cast<std::size_t>(k);
       ++seed) {
    std::vector<PauliString> members{paulis[rank[seed]]};
    for (std::size_t idx : rank) {
      const auto& candidate = paulis[idx];
      if (candidate == members.front()) continue;
      const bool fits = std::all_of(members.begin(), members.end(), [&](const PauliString& m) {
        return commutes(m, candidate);
      });
      if (fits) members.push_back(candidate);
    }
    std::sort(members.begin(), members.end());
    std::vector<std::uint64_t> key;
    key.reserve(members.size());
    for (const auto& m : members) key.push_back(m.order_key());
    if (seen.insert(std::move(key)).second) out.push_back(CommutingSubset{n, std::move(members)});
  }
  return out;
}

std::vector<CommutingSubset> greedy_candidates(const DenseOperator& r, int n, int k) {
  return greedy_candidates(pauli_overlap_table(r, n), n, k);
}

}  // namespace pdcs
