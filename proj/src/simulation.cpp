#include "pdcs/simulation.hpp"

#include <cmath>
#include <numbers>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PauliString single_site(int n, int q, char op) {
  std::string label(static_cast<std::size_t>(n), 'I');
  label[static_cast<std::size_t>(q - 1)] = op;
  return parse_label(label);
}

}  // namespace

std::vector<HamiltonianSpec> three_body_groups(double j123_hz, double omega_x_hz) {
  if (!std::isfinite(j123_hz) || !std::isfinite(omega_x_hz)) {
    throw ValidationError("three-body preset needs finite frequencies");
  }
  HamiltonianSpec x_part{3, {}};
  for (int q = 1; q <= 3; ++q) x_part.terms.push_back({single_site(3, q, 'X'), kTwoPi * omega_x_hz});
  HamiltonianSpec zzz{3, {{parse_label("ZZZ"), kTwoPi * j123_hz}}};
  return {x_part, zzz};
}

HamiltonianSpec three_body_preset(double j123_hz, double omega_x_hz) {
  return combine_groups(three_body_groups(j123_hz, omega_x_hz));
}

DenseOperator magnetization_x(int n) {
  if (n < 1) throw ValidationError("magnetization needs at least one qubit");
  HamiltonianSpec sum{n, {}};
  for (int q = 1; q <= n; ++q) sum.terms.push_back({single_site(n, q, 'X'), 0.5});
  return sum.dense();
}

QuantumState transverse_deviation(int n) { return QuantumState::deviation(magnetization_x(n)); }

TimeSeries evolve_series(const StepPropagator& step, const QuantumState& rho0, const DenseOperator& observable,
                         int k_max, double tau) {
  if (k_max < 0) throw ValidationError("k_max must be nonnegative");
  const DenseOperator s = std::holds_alternative<DenseOperator>(step)
                              ? std::get<DenseOperator>(step)
                              : decomposition_unitary(std::get<Decomposition>(step));
  if (s.rows() != rho0.dim() || s.cols() != rho0.dim() || observable.rows() != rho0.dim() ||
      observable.cols() != rho0.dim()) {
    throw DimensionError("step, state and observable dimensions differ");
  }
  TimeSeries out;
  DenseOperator rho = rho0.matrix();
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) rho = s * rho * s.adjoint();
    const Complex value = (rho * observable).trace();
    if (std::abs(value.imag()) > 1e-10) {
      throw ValidationError("observable expectation has imaginary part " + std::to_string(value.imag()));
    }
    out.times.push_back(k * tau);
    out.values.push_back(value.real());
  }
  return out;
}

TimeSeries normalize_to_first(TimeSeries series) {
  if (series.values.empty() || std::abs(series.values.front()) < 1e-300) {
    throw ValidationError("cannot normalize a series whose first value is zero");
  }
  const double first = series.values.front();
  for (double& v : series.values) v /= first;
  return series;
}

SynthesisResult pdcs_step_propagator(const HamiltonianSpec& h, double tau, const SynthesisConfig& config) {
  return synthesize_unitary(exact_propagator(h, tau), config);
}

std::vector<std::string> state_preset_names() { return {"bell", "ghz", "w", "inept"}; }

std::pair<QuantumState, QuantumState> state_preset(const std::string& name) {
  const double r2 = 1.0 / std::sqrt(2.0);
  if (name == "bell") {
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = bell(3) = r2;
    return {QuantumState::basis("00"), QuantumState::statevector(bell)};
  }
  if (name == "ghz") {
    Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
    ghz(0) = ghz(7) = r2;
    return {QuantumState::basis("000"), QuantumState::statevector(ghz)};
  }
  if (name == "w") {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(8);
    w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
    return {QuantumState::basis("000"), QuantumState::statevector(w)};
  }
  if (name == "inept") {
    // Polarization transfer between two spins: (I + ZI)/4 -> (I + IZ)/4.
    const DenseOperator id = DenseOperator::Identity(4, 4);
    return {QuantumState::density((id + dense(parse_label("ZI"))) / 4.0),
            QuantumState::density((id + dense(parse_label("IZ"))) / 4.0)};
  }
  throw ValidationError("unknown state preset \"" + name + "\"");
}

}  // namespace pdcs
