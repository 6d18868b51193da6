#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pdcs/optimizer.hpp"
#include "pdcs/rotor.hpp"
#include "pdcs/state.hpp"
#include "pdcs/subsets.hpp"

namespace pdcs {

enum class SubsetMode { kExhaustive, kGreedy };

struct SynthesisConfig {
  double fidelity_threshold = 0.9999;
  int max_rotors = 16;
  double penalty_weight = 1e-3;          ///< lambda in F - lambda * sum(phi^2)
  double angle_prune_threshold = 1e-6;   ///< radians
  int restarts = 8;
  std::uint64_t seed = 0;
  SubsetMode subset_mode = SubsetMode::kExhaustive;
  int greedy_k = 32;
  /// Ranked candidate subsets tried per step when the best-scoring one cannot raise the fidelity.
  int max_candidate_trials = 32;
  /// Fidelity gain below which a candidate counts as not helping.
  double min_improvement = 1e-6;
  OptimizerTolerances optimizer;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

const char* to_string(SubsetMode mode);
/// "exhaustive", "greedy" or "greedy:<k>".
void parse_subset_mode(const std::string& text, SynthesisConfig& config);

enum class SynthesisStatus { kConverged, kRotorBudgetExhausted };
const char* to_string(SynthesisStatus status);

struct IterationRecord {
  int step = 0;                  ///< j, 1-based
  std::vector<std::string> subset;  ///< labels of the chosen subset (before pruning)
  double overlap = 0.0;          ///< f_j of the chosen subset
  double fidelity = 0.0;         ///< raw F_j after optimization and pruning
  int pruned = 0;                ///< members removed from the whole decomposition this step
  int candidates_tried = 0;
};

struct SynthesisReport {
  std::vector<IterationRecord> iterations;
  SynthesisStatus status = SynthesisStatus::kRotorBudgetExhausted;
  /// Set when a step found no candidate able to raise the fidelity.
  bool stalled = false;
};

struct SynthesisResult {
  Decomposition decomposition;
  SynthesisReport report;
};

/// Raw fidelity of a decomposition (with analytic gradient) for a unitary or a state target.
class FidelityObjective {
 public:
  virtual ~FidelityObjective() = default;
  virtual int num_qubits() const = 0;
  /// Raw fidelity; fills grad when non-null. Sets *degenerate for a vanishing-overlap subgradient.
  virtual double evaluate(const Decomposition& d, std::vector<double>* grad,
                          bool* degenerate = nullptr) const = 0;
  /// Fidelity reported and compared with the threshold; defaults to evaluate().
  virtual double reported_fidelity(const Decomposition& d) const { return evaluate(d, nullptr); }
  /// Per-Pauli overlap magnitudes for subset scoring, given the current decomposition.
  virtual std::vector<double> overlap_table(const Decomposition& d) const = 0;
};

/// |Tr[U^dagger W]| / N.
std::unique_ptr<FidelityObjective> make_unitary_objective(DenseOperator target);

/// Reports state_fidelity(W rho0 W^dagger, rhoT); two mixed states are steered by their Hilbert-Schmidt correlation.
std::unique_ptr<FidelityObjective> make_state_objective(QuantumState initial, QuantumState target);

/**
 * Multi-start local maximization of F - lambda * sum(phi^2).
 *
 * Run 0 starts at d's angles, with every exactly-zero angle jittered by up to
 * 1e-3; the remaining restarts draw all angles uniformly from (-pi, pi].
 * The run with the best penalized value wins (earliest on ties).
 * stream selects an independent random stream under config.seed.
 */
Decomposition optimize_angles(const FidelityObjective& objective, Decomposition d,
                              const SynthesisConfig& config, std::uint64_t stream = 0);

/// Left branch: greedy rotor-by-rotor decomposition of a unitary target.
SynthesisResult synthesize_unitary(const DenseOperator& target, const SynthesisConfig& config);

/// Right branch: rotors steering initial toward target under the state fidelity.
SynthesisResult synthesize_state(const QuantumState& initial, const QuantumState& target,
                                 const SynthesisConfig& config);

/// Mean fidelity of W(s * phi) against target with s ~ U[1 - epsilon, 1 + epsilon].
double robustness_score(const Decomposition& d, const DenseOperator& target, double epsilon,
                        int samples, std::uint64_t seed = 0);

/// True when m is unitary within tol (max-abs of U^dagger U - I).
bool is_unitary(const DenseOperator& m, double tol = 1e-10);

/// Deterministic uniform doubles in [0, 1) from (seed, stream).
class SeededUniform {
 public:
  SeededUniform(std::uint64_t seed, std::uint64_t stream);
  double next();

 private:
  std::mt19937_64 engine_;
};

}  // namespace pdcs
