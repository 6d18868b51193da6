#include "pdcs/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

constexpr double kJitter = 1e-3;

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw ValidationError("operator dimension " + std::to_string(dim) + " is not a power of two >= 2");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

class UnitaryObjective final : public FidelityObjective {
 public:
  explicit UnitaryObjective(DenseOperator target)
      : target_(std::move(target)), n_(qubits_for_dim(target_.rows())) {}

  int num_qubits() const override { return n_; }

  double evaluate(const Decomposition& d, std::vector<double>* grad,
                  bool* degenerate) const override {
    if (!grad) return fidelity_unitary(target_, decomposition_unitary(d));
    auto fg = fidelity_gradient(target_, d);
    *grad = std::move(fg.gradient);
    if (degenerate) *degenerate = fg.degenerate;
    return fg.fidelity;
  }

  std::vector<double> overlap_table(const Decomposition& d) const override {
    const DenseOperator residual = target_ * decomposition_unitary(d).adjoint();
    return pauli_overlap_table(residual, n_);
  }

 private:
  DenseOperator target_;
  int n_;
};

class StateObjective final : public FidelityObjective {
 public:
  StateObjective(QuantumState initial, QuantumState target)
      : initial_(std::move(initial)), target_(std::move(target)) {
    if (initial_.dim() != target_.dim()) throw DimensionError("state synthesis: dimension mismatch");
    const bool dev0 = initial_.kind() == StateKind::kDeviation;
    const bool dev1 = target_.kind() == StateKind::kDeviation;
    if (dev0 != dev1) {
      throw ValidationError("state synthesis: deviation matrices can only be steered to deviation matrices");
    }
    n_ = qubits_for_dim(initial_.dim());
    rho0_ = initial_.matrix();
    rho_target_ = target_.matrix();
    if (initial_.is_pure() || target_.is_pure()) {
      mode_ = Mode::kPureOverlap;
    } else {
      mode_ = dev0 ? Mode::kCorrelation : Mode::kHilbertSchmidt;
      scale_ = 1.0 / (rho0_.norm() * rho_target_.norm());
    }
  }

  int num_qubits() const override { return n_; }

  double evaluate(const Decomposition& d, std::vector<double>* grad,
                  bool* degenerate) const override {
    if (degenerate) *degenerate = false;
    const DenseOperator evolved = evolve(d);
    const DenseOperator seed = evolved * rho_target_;
    const double overlap = seed.trace().real();
    double value = 0.0;
    double chain = 0.0;  // dF/d(overlap)
    if (mode_ == Mode::kPureOverlap) {
      value = std::min(1.0, std::sqrt(std::max(0.0, overlap)));
      if (value < 1e-14) {
        if (grad) grad->assign(d.num_angles(), 0.0);
        if (degenerate) *degenerate = true;
        return value;
      }
      chain = 0.5 / value;
    } else {
      value = overlap * scale_;
      chain = scale_;
    }
    if (grad) {
      // d overlap / d phi = 2 Re(-i Tr[P A_j]) with A_m = W rho0 W^dagger rhoT.
      const auto traces = generator_traces(d, seed);
      grad->resize(traces.size());
      for (std::size_t k = 0; k < traces.size(); ++k) {
        (*grad)[k] = chain * 2.0 * (Complex{0, -1} * traces[k]).real();
      }
    }
    return value;
  }

  double reported_fidelity(const Decomposition& d) const override {
    if (mode_ == Mode::kPureOverlap) return evaluate(d, nullptr, nullptr);
    return state_fidelity(apply_to_state(d, initial_), target_);
  }

  std::vector<double> overlap_table(const Decomposition& d) const override {
    // Tr[rho_j P rhoT] = Tr[(rhoT rho_j) P].
    return pauli_overlap_table(rho_target_ * evolve(d), n_);
  }

 private:
  /// kHilbertSchmidt steers two mixed states by Tr[rho sigma] / (|rho| |sigma|), which is
  /// smooth everywhere, and reports the Uhlmann fidelity.
  enum class Mode { kPureOverlap, kCorrelation, kHilbertSchmidt };

  DenseOperator evolve(const Decomposition& d) const {
    const DenseOperator w = decomposition_unitary(d);
    return w * rho0_ * w.adjoint();
  }

  QuantumState initial_;
  QuantumState target_;
  DenseOperator rho0_;
  DenseOperator rho_target_;
  Mode mode_ = Mode::kPureOverlap;
  double scale_ = 1.0;
  int n_ = 0;
};

double penalty(const std::vector<double>& angles) {
  double sum = 0.0;
  for (double a : angles) {
    const double w = wrap_angle(a);
    sum += w * w;
  }
  return sum;
}

struct RunOutcome {
  std::vector<double> angles;
  double penalized = -std::numeric_limits<double>::infinity();
};

RunOutcome local_run(const FidelityObjective& objective, Decomposition& work,
                     std::vector<double> start, double lambda, const OptimizerTolerances& tol) {
  bool start_degenerate = false;
  std::vector<double> g;
  work.set_angles(start);
  objective.evaluate(work, &g, &start_degenerate);
  if (start_degenerate) return {};  // zero subgradient; left to the other restarts

  const SmoothObjective smooth = [&](const std::vector<double>& x, std::vector<double>& grad) {
    work.set_angles(x);
    const double f = objective.evaluate(work, &grad);
    for (std::size_t k = 0; k < x.size(); ++k) grad[k] -= 2.0 * lambda * wrap_angle(x[k]);
    return f - lambda * penalty(x);
  };
  const auto wrap_all = [](std::vector<double>& x) {
    for (auto& a : x) a = wrap_angle(a);
  };
  const auto result = maximize_bfgs(smooth, std::move(start), tol, wrap_all);
  return {result.x, result.value};
}

Decomposition polish(const FidelityObjective& objective, Decomposition d,
                     const OptimizerTolerances& tol) {
  Decomposition work = d;
  auto run = local_run(objective, work, d.angles(), 0.0, tol);
  if (run.angles.empty()) return d;
  d.set_angles(run.angles);
  return d;
}

/// Drops members with |angle| < threshold and rotors left empty; returns the number dropped.
int prune(Decomposition& d, double threshold) {
  int dropped = 0;
  std::vector<Rotor> kept;
  for (auto& r : d.rotors) {
    Rotor next;
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      if (std::abs(r.angles[i]) < threshold) {
        ++dropped;
      } else {
        next.members.push_back(r.members[i]);
        next.angles.push_back(r.angles[i]);
      }
    }
    if (!next.members.empty()) kept.push_back(std::move(next));
  }
  d.rotors = std::move(kept);
  return dropped;
}

struct Trial {
  Decomposition decomposition;
  double fidelity = -1.0;  ///< objective value
  double reported = -1.0;
  int pruned = 0;
};

/// Optimize prefix + new rotor, prune, then polish the raw fidelity.
Trial evaluate_candidate(const FidelityObjective& objective, const Decomposition& prefix,
                         const CommutingSubset& subset, const SynthesisConfig& config,
                         std::uint64_t stream) {
  Decomposition grown = prefix;
  grown.rotors.push_back(Rotor::zeros(subset));
  const Decomposition optimized = optimize_angles(objective, grown, config, stream);
  const double optimized_fidelity = objective.evaluate(optimized, nullptr);

  Trial trial;
  trial.decomposition = optimized;
  trial.pruned = prune(trial.decomposition, config.angle_prune_threshold);
  trial.decomposition = polish(objective, std::move(trial.decomposition), config.optimizer);
  trial.fidelity = objective.evaluate(trial.decomposition, nullptr);
  if (trial.pruned > 0 && trial.fidelity < optimized_fidelity - 1e-9) {
    // Pruning cost fidelity; keep every member instead.
    trial.decomposition = polish(objective, optimized, config.optimizer);
    trial.fidelity = objective.evaluate(trial.decomposition, nullptr);
    trial.pruned = 0;
  }
  trial.reported = objective.reported_fidelity(trial.decomposition);
  return trial;
}

std::uint64_t stream_id(int step, int trial) {
  return (static_cast<std::uint64_t>(step) << 20) | static_cast<std::uint64_t>(trial);
}

SynthesisResult run_pdcs(const FidelityObjective& objective, const SynthesisConfig& config) {
  config.validate();
  const int n = objective.num_qubits();

  SynthesisResult result;
  Decomposition& d = result.decomposition;
  d.n = n;
  double fidelity = objective.evaluate(d, nullptr);
  double reported = objective.reported_fidelity(d);

  std::vector<CommutingSubset> exhaustive;
  const bool use_exhaustive =
      config.subset_mode == SubsetMode::kExhaustive && n <= kDefaultEnumerationCap;
  if (use_exhaustive) exhaustive = enumerate_maximal_subsets(n);

  auto& report = result.report;
  for (int step = 1; step <= config.max_rotors && reported < config.fidelity_threshold; ++step) {
    const auto table = objective.overlap_table(d);
    const std::vector<CommutingSubset> candidates =
        use_exhaustive ? std::vector<CommutingSubset>{}
                       : greedy_candidates(table, n, config.greedy_k);
    const auto& pool = use_exhaustive ? exhaustive : candidates;

    std::vector<double> scores(pool.size());
    std::vector<long long> level(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      scores[i] = subset_overlap(table, pool[i]);
      level[i] = std::llround(scores[i] * 1e9);
    }
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return level[a] > level[b]; });

    // Walk tie groups in score order. Within a group the overlap cannot
    // discriminate, so every member is optimized and the best kept; later
    // groups are consulted only while no candidate has raised the fidelity.
    Trial best;
    std::size_t best_index = order.empty() ? 0 : order.front();
    int tried = 0;
    std::size_t pos = 0;
    while (pos < order.size() && tried < config.max_candidate_trials) {
      const long long group_level = level[order[pos]];
      for (; pos < order.size() && level[order[pos]] == group_level &&
             tried < config.max_candidate_trials;
           ++pos) {
        Trial trial = evaluate_candidate(objective, d, pool[order[pos]], config,
                                         stream_id(step, tried));
        ++tried;
        if (trial.fidelity > best.fidelity) {
          best = std::move(trial);
          best_index = order[pos];
        }
      }
      while (pos < order.size() && level[order[pos]] == group_level) ++pos;
      if (best.fidelity > fidelity + config.min_improvement) break;
    }

    IterationRecord record;
    record.step = step;
    record.candidates_tried = tried;
    if (!pool.empty()) {
      for (const auto& p : pool[best_index].members) record.subset.push_back(p.to_label());
      record.overlap = scores[best_index];
    }
    if (!(best.fidelity > fidelity)) {
      // Nothing raised the fidelity: W_{j-1} with the new rotor at zero is the best point.
      record.fidelity = reported;
      report.iterations.push_back(std::move(record));
      report.stalled = true;
      break;
    }
    d.rotors = std::move(best.decomposition.rotors);
    fidelity = best.fidelity;
    reported = best.reported;
    record.fidelity = reported;
    record.pruned = best.pruned;
    report.iterations.push_back(std::move(record));
  }

  d.achieved_fidelity = reported;
  report.status = reported >= config.fidelity_threshold ? SynthesisStatus::kConverged
                                                        : SynthesisStatus::kRotorBudgetExhausted;
  d.metadata["seed"] = std::to_string(config.seed);
  return result;
}

}  // namespace

void SynthesisConfig::validate() const {
  if (!(fidelity_threshold > 0.0 && fidelity_threshold <= 1.0)) {
    throw ValidationError("fidelity threshold must lie in (0, 1]");
  }
  if (max_rotors < 0) throw ValidationError("max_rotors must be nonnegative");
  if (penalty_weight < 0.0) throw ValidationError("penalty weight must be nonnegative");
  if (angle_prune_threshold < 0.0) throw ValidationError("prune threshold must be nonnegative");
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
  if (greedy_k < 1) throw ValidationError("greedy candidate count must be >= 1");
  if (max_candidate_trials < 1) throw ValidationError("max_candidate_trials must be >= 1");
  if (min_improvement < 0.0) throw ValidationError("min_improvement must be nonnegative");
  if (optimizer.gradient_norm < 0.0 || optimizer.max_iterations < 1) {
    throw ValidationError("invalid optimizer tolerances");
  }
}

const char* to_string(SubsetMode mode) {
  return mode == SubsetMode::kExhaustive ? "exhaustive" : "greedy";
}

void parse_subset_mode(const std::string& text, SynthesisConfig& config) {
  if (text == "exhaustive") {
    config.subset_mode = SubsetMode::kExhaustive;
    return;
  }
  if (text == "greedy") {
    config.subset_mode = SubsetMode::kGreedy;
    return;
  }
  const std::string prefix = "greedy:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(text.substr(prefix.size()), &used);
      if (used + prefix.size() != text.size() || k < 1) throw std::invalid_argument(text);
      config.subset_mode = SubsetMode::kGreedy;
      config.greedy_k = k;
      return;
    } catch (const std::exception&) {
      // fall through to the error below
    }
  }
  throw ValidationError("subset mode must be exhaustive, greedy or greedy:<k>, got \"" + text + "\"");
}

const char* to_string(SynthesisStatus status) {
  return status == SynthesisStatus::kConverged ? "converged" : "rotor_budget_exhausted";
}

SeededUniform::SeededUniform(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double SeededUniform::next() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::unique_ptr<FidelityObjective> make_unitary_objective(DenseOperator target) {
  return std::make_unique<UnitaryObjective>(std::move(target));
}

std::unique_ptr<FidelityObjective> make_state_objective(QuantumState initial, QuantumState target) {
  return std::make_unique<StateObjective>(std::move(initial), std::move(target));
}

Decomposition optimize_angles(const FidelityObjective& objective, Decomposition d,
                              const SynthesisConfig& config, std::uint64_t stream) {
  const std::size_t count = d.num_angles();
  if (count == 0) return d;
  const double lambda = config.penalty_weight;

  std::vector<RunOutcome> runs;
  Decomposition work = d;
  for (int run = 0; run < config.restarts; ++run) {
    SeededUniform rng(config.seed, stream * 1024 + static_cast<std::uint64_t>(run));
    std::vector<double> start(count);
    if (run == 0) {
      start = d.angles();
      for (auto& a : start) {
        if (a == 0.0) a = kJitter * (2.0 * rng.next() - 1.0);
      }
    } else {
      for (auto& a : start) a = std::numbers::pi - 2.0 * std::numbers::pi * rng.next();
    }
    runs.push_back(local_run(objective, work, std::move(start), lambda, config.optimizer));
  }

  const RunOutcome* best = nullptr;
  for (const auto& r : runs) {
    if (r.angles.empty()) continue;
    if (!best || r.penalized > best->penalized) best = &r;
  }
  if (best) d.set_angles(best->angles);
  return d;
}

bool is_unitary(const DenseOperator& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const DenseOperator gram = m.adjoint() * m;
  return (gram - DenseOperator::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

SynthesisResult synthesize_unitary(const DenseOperator& target, const SynthesisConfig& config) {
  config.validate();
  const int n = qubits_for_dim(target.rows());
  if (target.rows() != target.cols()) throw ValidationError("target matrix is not square");
  if (n > kDefaultDenseCap) {
    throw CapacityError("target on " + std::to_string(n) + " qubits exceeds dense cap of " +
                        std::to_string(kDefaultDenseCap));
  }
  if (!is_unitary(target)) throw ValidationError("target matrix is not unitary within 1e-10");

  // Global phase times identity: nothing to synthesize.
  const Complex phase = target(0, 0);
  const DenseOperator scaled_identity =
      phase * DenseOperator::Identity(target.rows(), target.cols());
  if ((target - scaled_identity).cwiseAbs().maxCoeff() <= 1e-12) {
    SynthesisResult result;
    result.decomposition.n = n;
    result.decomposition.achieved_fidelity = 1.0;
    result.decomposition.metadata["seed"] = std::to_string(config.seed);
    result.report.status = SynthesisStatus::kConverged;
    return result;
  }
  const UnitaryObjective objective(target);
  return run_pdcs(objective, config);
}

SynthesisResult synthesize_state(const QuantumState& initial, const QuantumState& target,
                                 const SynthesisConfig& config) {
  const StateObjective objective(initial, target);
  return run_pdcs(objective, config);
}

double robustness_score(const Decomposition& d, const DenseOperator& target, double epsilon,
                        int samples, std::uint64_t seed) {
  if (epsilon < 0.0) throw ValidationError("robustness epsilon must be nonnegative");
  if (samples < 1) throw ValidationError("robustness needs at least one sample");
  const auto nominal = d.angles();
  Decomposition scaled = d;
  SeededUniform rng(seed, 0x5eed);
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double factor = 1.0 + epsilon * (2.0 * rng.next() - 1.0);
    std::vector<double> angles(nominal.size());
    for (std::size_t k = 0; k < nominal.size(); ++k) angles[k] = factor * nominal[k];
    scaled.set_angles(angles);
    total += fidelity_unitary(target, decomposition_unitary(scaled));
  }
  return total / samples;
}

}  // namespace pdcs
