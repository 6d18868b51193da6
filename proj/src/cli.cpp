#include "pdcs/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pdcs/errors.hpp"
#include "pdcs/gates.hpp"
#include "pdcs/io.hpp"
#include "pdcs/simulation.hpp"
#include "pdcs/subsets.hpp"
#include "pdcs/synthesis.hpp"
#include "pdcs/trotter.hpp"

namespace pdcs {

namespace {

namespace fs = std::filesystem;

/// Synthesis flags shared by every subcommand that runs the optimizer.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> fidelity;
  std::optional<int> max_rotors;
  std::optional<double> penalty;
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
  std::string subset_mode;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file (default: $" + std::string(kConfigEnvVar) + ")");
    app->add_option("--fidelity", fidelity, "fidelity threshold in (0, 1]");
    app->add_option("--max-rotors", max_rotors, "rotor budget");
    app->add_option("--penalty", penalty, "angle penalty weight lambda");
    app->add_option("--restarts", restarts, "optimizer starts per step");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--subset-mode", subset_mode, "exhaustive | greedy | greedy:<k>");
  }

  SynthesisConfig resolve() const {
    SynthesisConfig config;
    std::string path = config_path;
    if (path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar); env != nullptr) path = env;
    }
    if (!path.empty()) apply_config_json(read_json(path), config);
    if (fidelity) config.fidelity_threshold = *fidelity;
    if (max_rotors) config.max_rotors = *max_rotors;
    if (penalty) config.penalty_weight = *penalty;
    if (restarts) config.restarts = *restarts;
    if (seed) config.seed = *seed;
    if (!subset_mode.empty()) parse_subset_mode(subset_mode, config);
    config.validate();
    return config;
  }
};

class Timer {
 public:
  Timer() : started_(utc_timestamp()), t0_(std::chrono::steady_clock::now()) {}

  RunManifest manifest(const std::string& command, const SynthesisConfig* config) const {
    RunManifest m;
    m.command = command;
    m.started_utc = started_;
    m.finished_utc = utc_timestamp();
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    if (config) {
      m.seed = config->seed;
      const Json resolved = config_to_json(*config);
      for (const auto& [key, value] : resolved.items()) {
        m.flags[key] = value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
    return m;
  }

 private:
  std::string started_;
  std::chrono::steady_clock::time_point t0_;
};

bool is_file(const std::string& s) { return !s.empty() && fs::is_regular_file(s); }

/// Writes text to path, or to out when path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

int finish_synthesis(const Decomposition& d, const SynthesisReport& report, RunManifest manifest,
                     const std::string& out_path, bool strict, std::ostream& out, std::ostream& err) {
  if (!out_path.empty()) manifest.outputs.push_back(out_path);
  emit(out_path, decomposition_to_json(d, report, manifest).dump(2) + "\n", out);
  if (!out_path.empty()) {
    out << "rotors=" << d.rotors.size() << " members=" << d.num_members()
        << " fidelity=" << format_double(d.achieved_fidelity) << " status=" << to_string(report.status) << "\n";
  }
  if (report.status != SynthesisStatus::kConverged) {
    err << "warning: rotor budget exhausted at fidelity " << format_double(d.achieved_fidelity) << "\n";
    if (strict) return kExitBudget;
  }
  return kExitOk;
}

QuantumState resolve_state(const std::string& spec, bool initial, std::map<std::string, std::string>& digests) {
  if (is_file(spec)) {
    digests[spec] = sha256_file(spec);
    return read_state(spec);
  }
  for (const auto& name : state_preset_names()) {
    if (spec == name) {
      auto pair = state_preset(name);
      return initial ? pair.first : pair.second;
    }
  }
  if (!spec.empty() && spec.find_first_not_of("01") == std::string::npos) return QuantumState::basis(spec);
  throw ValidationError("state \"" + spec + "\" is neither a file, a preset, nor a bit string");
}

std::vector<int> parse_m_range(const std::string& text) {
  std::vector<int> values;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("bad rotor count \"" + s + "\" in --m");
    }
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw ValidationError("--m range must satisfy 1 <= lo <= hi");
    for (int m = lo; m <= hi; ++m) values.push_back(m);
    return values;
  }
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) values.push_back(to_int(item));
  if (values.empty()) throw ValidationError("--m is empty");
  return values;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pauli-decomposition-over-commuting-subsets (PDCS) synthesis tool", "pdcs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // decompose
  auto* decompose = app.add_subcommand("decompose", "decompose a unitary (matrix file or named gate)");
  ConfigFlags decompose_cfg;
  std::string target;
  std::string decompose_out;
  bool strict = false;
  decompose->add_option("--target", target, "matrix JSON file or gate name (cnot, toffoli, grover3, qft2, ...)")
      ->required();
  decompose->add_option("--out", decompose_out, "output decomposition JSON (default: stdout)");
  decompose->add_flag("--strict", strict, "exit 3 when the rotor budget is exhausted");
  decompose_cfg.attach(decompose);

  // circuit
  auto* circuit = app.add_subcommand("circuit", "gate-by-gate synthesis of a circuit");
  ConfigFlags circuit_cfg;
  std::string circuit_src;
  std::string circuit_out;
  int max_block = 0;
  bool no_fuse = false;
  bool no_merge = false;
  circuit->add_option("--circuit", circuit_src, "circuit JSON file or preset (qft2, aqft4, shor15, grover2, grover3)")
      ->required();
  circuit->add_option("--max-block-qubits", max_block, "widest fused block (0: widest gate)");
  circuit->add_flag("--no-fuse", no_fuse, "synthesize every gate separately");
  circuit->add_flag("--no-merge", no_merge, "keep adjacent commuting rotors apart");
  circuit->add_option("--out", circuit_out, "output decomposition JSON (default: stdout)");
  circuit_cfg.attach(circuit);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "rotors steering an initial state to a target state");
  ConfigFlags prepare_cfg;
  std::string initial_spec;
  std::string target_spec;
  std::string preset;
  std::string prepare_out;
  bool prepare_strict = false;
  prepare->add_option("--preset", preset, "named problem: bell, ghz, w, inept");
  prepare->add_option("--initial", initial_spec, "state file, preset name, or bit string");
  prepare->add_option("--target", target_spec, "state file or preset name");
  prepare->add_option("--out", prepare_out, "output decomposition JSON (default: stdout)");
  prepare->add_flag("--strict", prepare_strict, "exit 3 when the rotor budget is exhausted");
  prepare_cfg.attach(prepare);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "stroboscopic magnetization series of the three-body model");
  ConfigFlags simulate_cfg;
  std::string sim_preset = "three-body";
  double j123 = 5.0;
  double omega_x = 1.0;
  double tau = 0.8;
  int steps = 20;
  std::string step_mode = "exact";
  std::string simulate_out;
  simulate->add_option("--preset", sim_preset, "model preset")->check(CLI::IsMember({"three-body"}));
  simulate->add_option("--j123", j123, "three-body coupling in Hz");
  simulate->add_option("--omega-x", omega_x, "transverse field in Hz");
  simulate->add_option("--tau", tau, "step duration in seconds");
  simulate->add_option("--steps", steps, "number of steps k_max")->check(CLI::NonNegativeNumber);
  simulate->add_option("--step-mode", step_mode, "exact | pdcs | trotter1:<m> | trotter2:<m>");
  simulate->add_option("--out", simulate_out, "output CSV (default: stdout)");
  simulate_cfg.attach(simulate);

  // compare-trotter
  auto* compare = app.add_subcommand("compare-trotter", "fidelity vs rotor count for PDCS and Trotter");
  ConfigFlags compare_cfg;
  std::string hamiltonian = "three-body";
  double compare_t = 0.8;
  std::string m_text = "1..6";
  std::string compare_out;
  double compare_j = 5.0;
  double compare_omega = 1.0;
  compare->add_option("--hamiltonian", hamiltonian, "Hamiltonian JSON file or three-body");
  compare->add_option("--j123", compare_j, "three-body coupling in Hz (preset only)");
  compare->add_option("--omega-x", compare_omega, "transverse field in Hz (preset only)");
  compare->add_option("--t", compare_t, "evolution time in seconds");
  compare->add_option("--m", m_text, "rotor counts: lo..hi or a comma list");
  compare->add_option("--out", compare_out, "output CSV (default: stdout)");
  compare_cfg.attach(compare);

  // subsets
  auto* subsets = app.add_subcommand("subsets", "maximal commuting Pauli subsets");
  int qubits = 1;
  bool count_only = false;
  int cap = kDefaultEnumerationCap;
  subsets->add_option("--qubits", qubits, "qubit count")->required()->check(CLI::PositiveNumber);
  subsets->add_flag("--count-only", count_only, "print only the number of subsets");
  subsets->add_option("--cap", cap, "largest n enumerated explicitly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return kExitOk;
    if (code != 0) err << app.help();
    return kExitValidation;
  }

  const Timer timer;
  try {
    if (*decompose) {
      const SynthesisConfig config = decompose_cfg.resolve();
      std::map<std::string, std::string> digests;
      DenseOperator u;
      if (is_file(target)) {
        digests[target] = sha256_file(target);
        u = read_matrix(target);
      } else {
        u = standard_gate_from_spec(target);
      }
      auto result = synthesize_unitary(u, config);
      result.decomposition.metadata["target"] = target;
      auto manifest = timer.manifest("decompose", &config);
      manifest.flags["target"] = target;
      manifest.input_digests = digests;
      return finish_synthesis(result.decomposition, result.report, manifest, decompose_out, strict, out, err);
    }

    if (*circuit) {
      const SynthesisConfig config = circuit_cfg.resolve();
      std::map<std::string, std::string> digests;
      CircuitSpec spec;
      if (is_file(circuit_src)) {
        digests[circuit_src] = sha256_file(circuit_src);
        spec = circuit_from_json(read_json(circuit_src));
      } else {
        spec = circuit_preset(circuit_src);
      }
      CircuitSynthesisOptions options;
      options.fuse_blocks = !no_fuse;
      options.merge_rotors = !no_merge;
      options.max_block_qubits = max_block;
      CircuitDecomposition result;
      try {
        result = decompose_circuit(spec, config, options);
      } catch (const BlockBudgetError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBudget;
      }
      result.combined.metadata["target"] = circuit_src;
      SynthesisReport report;
      report.status = SynthesisStatus::kConverged;
      Json blocks = Json::array();
      for (const auto& b : result.blocks) {
        blocks.push_back(Json{{"first_gate", b.first_gate},
                              {"last_gate", b.last_gate},
                              {"qubits", b.qubits},
                              {"rotors", b.local.rotors.size()},
                              {"fidelity", b.local.achieved_fidelity}});
      }
      auto manifest = timer.manifest("circuit", &config);
      manifest.flags["circuit"] = circuit_src;
      manifest.input_digests = digests;
      if (!circuit_out.empty()) manifest.outputs.push_back(circuit_out);
      Json j = decomposition_to_json(result.combined, report, manifest);
      j["blocks"] = blocks;
      emit(circuit_out, j.dump(2) + "\n", out);
      if (!circuit_out.empty()) {
        out << "blocks=" << result.blocks.size() << " rotors=" << result.combined.rotors.size()
            << " fidelity=" << format_double(result.combined.achieved_fidelity) << "\n";
      }
      return kExitOk;
    }

    if (*prepare) {
      const SynthesisConfig config = prepare_cfg.resolve();
      if (preset.empty() && (initial_spec.empty() || target_spec.empty())) {
        throw ValidationError("prepare needs --preset or both --initial and --target");
      }
      std::map<std::string, std::string> digests;
      const QuantumState initial = resolve_state(initial_spec.empty() ? preset : initial_spec, true, digests);
      const QuantumState goal = resolve_state(target_spec.empty() ? preset : target_spec, false, digests);
      auto result = synthesize_state(initial, goal, config);
      auto manifest = timer.manifest("prepare", &config);
      manifest.flags["initial"] = initial_spec.empty() ? preset : initial_spec;
      manifest.flags["target"] = target_spec.empty() ? preset : target_spec;
      manifest.input_digests = digests;
      return finish_synthesis(result.decomposition, result.report, manifest, prepare_out, prepare_strict, out,
                              err);
    }

    if (*simulate) {
      const SynthesisConfig config = simulate_cfg.resolve();
      const auto groups = three_body_groups(j123, omega_x);
      const HamiltonianSpec h = combine_groups(groups);
      StepPropagator step;
      if (step_mode == "exact") {
        step = exact_propagator(h, tau);
      } else if (step_mode == "pdcs") {
        auto result = pdcs_step_propagator(h, tau, config);
        err << "pdcs step: rotors=" << result.decomposition.rotors.size()
            << " fidelity=" << format_double(result.decomposition.achieved_fidelity) << "\n";
        step = result.decomposition;
      } else if (step_mode.rfind("trotter1:", 0) == 0 || step_mode.rfind("trotter2:", 0) == 0) {
        const int m = parse_m_range(step_mode.substr(9)).front();
        step = step_mode[7] == '1' ? trotter1_decomposition(groups, tau, m) : trotter2_decomposition(groups, tau, m);
      } else {
        throw ValidationError("unknown --step-mode \"" + step_mode + "\"");
      }
      const auto series =
          normalize_to_first(evolve_series(step, transverse_deviation(3), magnetization_x(3), steps, tau));
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < series.values.size(); ++k) {
        rows.push_back({static_cast<double>(k), series.times[k], series.values[k]});
      }
      emit(simulate_out, format_csv({"k", "t_seconds", "m_x"}, rows), out);
      err << "units: Hamiltonian coefficients in rad/s = 2*pi * Hz inputs (j123=" << format_double(j123)
          << " Hz, omega_x=" << format_double(omega_x) << " Hz)\n";
      return kExitOk;
    }

    if (*compare) {
      const SynthesisConfig config = compare_cfg.resolve();
      std::vector<HamiltonianSpec> groups;
      if (hamiltonian == "three-body") {
        groups = three_body_groups(compare_j, compare_omega);
      } else {
        groups = hamiltonian_groups_from_json(read_json(hamiltonian));
      }
      const auto table = compare_decompositions(groups, compare_t, parse_m_range(m_text), config);
      std::vector<std::vector<double>> rows;
      for (const auto& r : table) {
        rows.push_back({static_cast<double>(r.m), r.f_trotter1, r.f_trotter2, r.f_pdcs});
      }
      emit(compare_out, format_csv({"m", "f_trotter1", "f_trotter2", "f_pdcs"}, rows), out);
      return kExitOk;
    }

    if (*subsets) {
      if (count_only) {
        out << maximal_subset_count(qubits) << "\n";
        return kExitOk;
      }
      for (const auto& s : enumerate_maximal_subsets(qubits, cap)) out << s.to_string() << "\n";
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitValidation;
}

}  // namespace pdcs
