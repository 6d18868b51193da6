#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pdcs/state.hpp"
#include "pdcs/synthesis.hpp"
#include "pdcs/trotter.hpp"

namespace pdcs {

/**
 * Three-spin Hamiltonian XII + IXI + IIX + J ZZZ with Hz inputs converted to
 * rad/s: each X term carries 2 pi omega_x and ZZZ carries 2 pi j123.
 */
HamiltonianSpec three_body_preset(double j123_hz, double omega_x_hz = 1.0);

/// The preset split into its two commuting groups: {XII, IXI, IIX} then {ZZZ}.
std::vector<HamiltonianSpec> three_body_groups(double j123_hz, double omega_x_hz = 1.0);

/// sum_i X_i / 2 on n qubits.
DenseOperator magnetization_x(int n);

/// The deviation state (XII + IXI + IIX)/2, generalized to n qubits.
QuantumState transverse_deviation(int n);

struct TimeSeries {
  std::vector<double> times;   ///< seconds
  std::vector<double> values;
};

using StepPropagator = std::variant<DenseOperator, Decomposition>;

/**
 * values[k] = Tr[rho_k O] with rho_k = S^k rho0 (S^k)^dagger for k = 0..k_max,
 * times[k] = k * tau. Throws ValidationError when a value has an imaginary
 * part above 1e-10 (non-Hermitian observable).
 */
TimeSeries evolve_series(const StepPropagator& step, const QuantumState& rho0, const DenseOperator& observable,
                         int k_max, double tau = 1.0);

/// Divides every value by values[0]; throws ValidationError when values[0] vanishes.
TimeSeries normalize_to_first(TimeSeries series);

/// synthesize_unitary(exact_propagator(h, tau), config).
SynthesisResult pdcs_step_propagator(const HamiltonianSpec& h, double tau, const SynthesisConfig& config);

/// Built-in preparation problems: "bell", "ghz", "w", "inept". Returns (initial, target).
std::pair<QuantumState, QuantumState> state_preset(const std::string& name);
std::vector<std::string> state_preset_names();

}  // namespace pdcs
