#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdcs/gates.hpp"
#include "pdcs/state.hpp"
#include "pdcs/synthesis.hpp"
#include "pdcs/trotter.hpp"

namespace pdcs {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
/// Environment variable naming the default configuration file.
inline constexpr const char* kConfigEnvVar = "PDCS_CONFIG";

// Matrices: {"dim": N, "re": [[...]], "im": [[...]]}.
Json matrix_to_json(const DenseOperator& m);
/// Throws ParseError naming the offending field; ValidationError if require_unitary and U^dagger U != I within 1e-10.
DenseOperator matrix_from_json(const Json& j, bool require_unitary = false);
DenseOperator read_matrix(const std::string& path, bool require_unitary = false);
void write_matrix(const std::string& path, const DenseOperator& m);

// States: the matrix format plus "kind"; a statevector stores flat "re"/"im" arrays.
Json state_to_json(const QuantumState& s);
QuantumState state_from_json(const Json& j);
QuantumState read_state(const std::string& path);
void write_state(const std::string& path, const QuantumState& s);

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::map<std::string, std::string> flags;    ///< resolved flag values
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;  ///< input name -> SHA-256 hex
  std::string started_utc;
  std::string finished_utc;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

/// Current UTC time as ISO-8601 ("2024-01-01T00:00:00Z").
std::string utc_timestamp();

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

Json report_to_json(const SynthesisReport& r);
SynthesisReport report_from_json(const Json& j);

/// {"n", "fidelity", "rotors": [{"paulis", "angles"}], "report", "metadata"[, "manifest"]}.
Json decomposition_to_json(const Decomposition& d, const SynthesisReport& report,
                           const std::optional<RunManifest>& manifest = std::nullopt);
/// Rebuilds the rotors (revalidating commutation) and reads "report" when present.
Decomposition decomposition_from_json(const Json& j, SynthesisReport* report = nullptr);
void write_decomposition(const std::string& path, const Decomposition& d, const SynthesisReport& report,
                         const std::optional<RunManifest>& manifest = std::nullopt);
Decomposition read_decomposition(const std::string& path, SynthesisReport* report = nullptr);

/// Serialization without the manifest block; equal inputs and seed give equal bytes.
std::string canonical_decomposition_text(const Decomposition& d, const SynthesisReport& report);

/// A list of {"gate", "qubits", "params"[, "matrix"]}, or {"n": int, "gates": [...]}.
CircuitSpec circuit_from_json(const Json& j);
Json circuit_to_json(const CircuitSpec& spec);

/**
 * {"n": int, "units": "rad/s" | "Hz", "groups": [[{"pauli", "coefficient"}...]...]}
 * or with a flat "terms" list, grouped first-fit into commuting groups.
 * Hz coefficients are multiplied by 2 pi.
 */
std::vector<HamiltonianSpec> hamiltonian_groups_from_json(const Json& j);
Json hamiltonian_groups_to_json(const std::vector<HamiltonianSpec>& groups);

/// First-fit split of h's terms into pairwise-commuting groups, preserving term order.
std::vector<HamiltonianSpec> commuting_groups(const HamiltonianSpec& h);

/// Overrides config fields present in j (fidelity, max_rotors, penalty, prune, restarts, seed, subset_mode).
void apply_config_json(const Json& j, SynthesisConfig& config);
Json config_to_json(const SynthesisConfig& config);

Json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Locale-independent CSV: header line then one row per vector, doubles with round-trip precision.
std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Shortest decimal that parses back to exactly v.
std::string format_double(double v);

}  // namespace pdcs
