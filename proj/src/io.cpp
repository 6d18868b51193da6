#include "pdcs/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(where + ": missing field \"" + name + "\"");
  return j.at(name);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

Json rows_of(const DenseOperator& m, bool imaginary) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imaginary ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

int qubits_for_dim(Eigen::Index dim, const std::string& where) {
  if (dim < 2 || (dim & (dim - 1)) != 0) throw ValidationError(where + ": dimension must be a power of two >= 2");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

Json matrix_to_json(const DenseOperator& m) {
  return Json{{"dim", m.rows()}, {"re", rows_of(m, false)}, {"im", rows_of(m, true)}};
}

DenseOperator matrix_from_json(const Json& j, bool require_unitary) {
  const int dim = integer(field(j, "dim", "matrix"), "matrix.dim");
  if (dim < 1) throw ParseError("matrix.dim must be positive");
  const Json& re = field(j, "re", "matrix");
  const Json& im = field(j, "im", "matrix");
  for (const auto* part : {&re, &im}) {
    const char* name = part == &re ? "re" : "im";
    if (!part->is_array() || static_cast<int>(part->size()) != dim) {
      throw ParseError(std::string("matrix.") + name + ": expected " + std::to_string(dim) + " rows");
    }
    for (int r = 0; r < dim; ++r) {
      const Json& row = (*part)[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw ParseError(std::string("matrix.") + name + "[" + std::to_string(r) + "]: expected " +
                         std::to_string(dim) + " entries (matrix must be square)");
      }
    }
  }
  DenseOperator m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const std::string where = "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      m(r, c) = Complex(number(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], where),
                        number(im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], where));
    }
  }
  if (require_unitary && !is_unitary(m, 1e-10)) throw ValidationError("matrix is not unitary within 1e-10");
  return m;
}

DenseOperator read_matrix(const std::string& path, bool require_unitary) {
  return matrix_from_json(read_json(path), require_unitary);
}

void write_matrix(const std::string& path, const DenseOperator& m) {
  write_text(path, matrix_to_json(m).dump(2) + "\n");
}

Json state_to_json(const QuantumState& s) {
  if (s.is_pure()) {
    Json re = Json::array();
    Json im = Json::array();
    for (const auto& a : s.vector()) {
      re.push_back(a.real());
      im.push_back(a.imag());
    }
    return Json{{"kind", to_string(s.kind())}, {"dim", s.dim()}, {"re", re}, {"im", im}};
  }
  Json j = matrix_to_json(s.matrix());
  j["kind"] = to_string(s.kind());
  return j;
}

QuantumState state_from_json(const Json& j) {
  const StateKind kind = state_kind_from_string(text(field(j, "kind", "state"), "state.kind"));
  if (kind != StateKind::kStatevector) {
    DenseOperator m = matrix_from_json(j);
    qubits_for_dim(m.rows(), "state");
    return kind == StateKind::kDensity ? QuantumState::density(std::move(m))
                                       : QuantumState::deviation(std::move(m));
  }
  const int dim = integer(field(j, "dim", "state"), "state.dim");
  const Json& re = field(j, "re", "state");
  const Json& im = field(j, "im", "state");
  if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != dim ||
      static_cast<int>(im.size()) != dim) {
    throw ParseError("state: re/im must hold " + std::to_string(dim) + " amplitudes");
  }
  Eigen::VectorXcd psi(dim);
  for (int k = 0; k < dim; ++k) {
    const std::string where = "state[" + std::to_string(k) + "]";
    psi(k) = Complex(number(re[static_cast<std::size_t>(k)], where), number(im[static_cast<std::size_t>(k)], where));
  }
  return QuantumState::statevector(std::move(psi));
}

QuantumState read_state(const std::string& path) { return state_from_json(read_json(path)); }

void write_state(const std::string& path, const QuantumState& s) { write_text(path, state_to_json(s).dump(2) + "\n"); }

Json RunManifest::to_json() const {
  return Json{{"tool_version", tool_version}, {"command", command},   {"flags", flags},
              {"seed", seed},                 {"input_digests", input_digests},
              {"started_utc", started_utc},   {"finished_utc", finished_utc},
              {"wall_seconds", wall_seconds}, {"outputs", outputs}};
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  m.tool_version = j.value("tool_version", std::string());
  m.command = j.value("command", std::string());
  m.flags = j.value("flags", std::map<std::string, std::string>());
  m.seed = j.value("seed", std::uint64_t{0});
  m.input_digests = j.value("input_digests", std::map<std::string, std::string>());
  m.started_utc = j.value("started_utc", std::string());
  m.finished_utc = j.value("finished_utc", std::string());
  m.wall_seconds = j.value("wall_seconds", 0.0);
  m.outputs = j.value("outputs", std::vector<std::string>());
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(slurp(path)); }

Json report_to_json(const SynthesisReport& r) {
  Json iterations = Json::array();
  for (const auto& it : r.iterations) {
    iterations.push_back(Json{{"step", it.step},
                              {"subset", it.subset},
                              {"overlap", it.overlap},
                              {"fidelity", it.fidelity},
                              {"pruned", it.pruned},
                              {"candidates_tried", it.candidates_tried}});
  }
  return Json{{"status", to_string(r.status)}, {"stalled", r.stalled}, {"iterations", iterations}};
}

SynthesisReport report_from_json(const Json& j) {
  SynthesisReport r;
  const std::string status = text(field(j, "status", "report"), "report.status");
  if (status == to_string(SynthesisStatus::kConverged)) {
    r.status = SynthesisStatus::kConverged;
  } else if (status == to_string(SynthesisStatus::kRotorBudgetExhausted)) {
    r.status = SynthesisStatus::kRotorBudgetExhausted;
  } else {
    throw ParseError("report.status: unknown value \"" + status + "\"");
  }
  r.stalled = j.value("stalled", false);
  for (const auto& it : j.value("iterations", Json::array())) {
    IterationRecord rec;
    rec.step = integer(field(it, "step", "report.iterations"), "report.iterations.step");
    rec.subset = it.value("subset", std::vector<std::string>());
    rec.overlap = it.value("overlap", 0.0);
    rec.fidelity = it.value("fidelity", 0.0);
    rec.pruned = it.value("pruned", 0);
    rec.candidates_tried = it.value("candidates_tried", 0);
    r.iterations.push_back(std::move(rec));
  }
  return r;
}

Json decomposition_to_json(const Decomposition& d, const SynthesisReport& report,
                           const std::optional<RunManifest>& manifest) {
  Json rotors = Json::array();
  for (const auto& rotor : d.rotors) {
    Json paulis = Json::array();
    for (const auto& p : rotor.members) paulis.push_back(p.to_label());
    rotors.push_back(Json{{"paulis", paulis}, {"angles", rotor.angles}});
  }
  Json j{{"n", d.n},
         {"fidelity", d.achieved_fidelity},
         {"rotors", rotors},
         {"report", report_to_json(report)},
         {"metadata", d.metadata}};
  if (manifest) j["manifest"] = manifest->to_json();
  return j;
}

Decomposition decomposition_from_json(const Json& j, SynthesisReport* report) {
  Decomposition d;
  d.n = integer(field(j, "n", "decomposition"), "decomposition.n");
  if (d.n < 1 || d.n > kMaxQubits) throw ValidationError("decomposition.n out of range");
  d.achieved_fidelity = number(field(j, "fidelity", "decomposition"), "decomposition.fidelity");
  const Json& rotors = field(j, "rotors", "decomposition");
  if (!rotors.is_array()) throw ParseError("decomposition.rotors: expected an array");
  for (std::size_t k = 0; k < rotors.size(); ++k) {
    const std::string where = "decomposition.rotors[" + std::to_string(k) + "]";
    const Json& paulis = field(rotors[k], "paulis", where);
    const Json& angles = field(rotors[k], "angles", where);
    if (!paulis.is_array() || !angles.is_array() || paulis.size() != angles.size()) {
      throw ParseError(where + ": paulis and angles must be arrays of equal length");
    }
    std::vector<PauliString> members;
    std::vector<double> phis;
    for (std::size_t b = 0; b < paulis.size(); ++b) {
      members.push_back(parse_label(text(paulis[b], where + ".paulis")));
      if (members.back().num_qubits() != d.n) throw DimensionError(where + ": label length differs from n");
      phis.push_back(number(angles[b], where + ".angles"));
    }
    d.rotors.push_back(Rotor::make(std::move(members), std::move(phis)));
  }
  if (j.contains("metadata")) d.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  if (report && j.contains("report")) *report = report_from_json(j.at("report"));
  return d;
}

void write_decomposition(const std::string& path, const Decomposition& d, const SynthesisReport& report,
                         const std::optional<RunManifest>& manifest) {
  write_text(path, decomposition_to_json(d, report, manifest).dump(2) + "\n");
}

Decomposition read_decomposition(const std::string& path, SynthesisReport* report) {
  return decomposition_from_json(read_json(path), report);
}

std::string canonical_decomposition_text(const Decomposition& d, const SynthesisReport& report) {
  return decomposition_to_json(d, report).dump(2);
}

CircuitSpec circuit_from_json(const Json& j) {
  const Json* gates = &j;
  CircuitSpec spec;
  if (j.is_object()) {
    spec.n = integer(field(j, "n", "circuit"), "circuit.n");
    gates = &field(j, "gates", "circuit");
  }
  if (!gates->is_array()) throw ParseError("circuit: expected a list of gates");
  int widest = 0;
  for (std::size_t k = 0; k < gates->size(); ++k) {
    const Json& g = (*gates)[k];
    const std::string where = "circuit.gates[" + std::to_string(k) + "]";
    CircuitGate gate;
    gate.name = text(field(g, "gate", where), where + ".gate");
    const Json& qubits = field(g, "qubits", where);
    if (!qubits.is_array()) throw ParseError(where + ".qubits: expected an array");
    for (const auto& q : qubits) gate.qubits.push_back(integer(q, where + ".qubits"));
    if (g.contains("params")) {
      for (const auto& p : g.at("params")) gate.params.push_back(number(p, where + ".params"));
    }
    if (g.contains("matrix")) gate.matrix = matrix_from_json(g.at("matrix"), true);
    for (int q : gate.qubits) widest = std::max(widest, q);
    spec.gates.push_back(std::move(gate));
  }
  if (spec.n == 0) spec.n = widest;
  spec.validate();
  return spec;
}

Json circuit_to_json(const CircuitSpec& spec) {
  Json gates = Json::array();
  for (const auto& g : spec.gates) {
    Json item{{"gate", g.name}, {"qubits", g.qubits}, {"params", g.params}};
    if (g.matrix) item["matrix"] = matrix_to_json(*g.matrix);
    gates.push_back(std::move(item));
  }
  return Json{{"n", spec.n}, {"gates", gates}};
}

std::vector<HamiltonianSpec> commuting_groups(const HamiltonianSpec& h) {
  h.validate();
  std::vector<HamiltonianSpec> groups;
  for (const auto& term : h.terms) {
    bool placed = false;
    for (auto& g : groups) {
      const bool fits = std::all_of(g.terms.begin(), g.terms.end(),
                                    [&](const HamiltonianTerm& t) { return commutes(t.pauli, term.pauli); });
      if (fits) {
        g.terms.push_back(term);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back(HamiltonianSpec{h.n, {term}});
  }
  return groups;
}

std::vector<HamiltonianSpec> hamiltonian_groups_from_json(const Json& j) {
  const int n = integer(field(j, "n", "hamiltonian"), "hamiltonian.n");
  const std::string units = j.value("units", std::string("rad/s"));
  double scale = 1.0;
  if (units == "Hz") {
    scale = 2.0 * std::numbers::pi;
  } else if (units != "rad/s") {
    throw ParseError("hamiltonian.units must be \"rad/s\" or \"Hz\"");
  }
  auto read_terms = [&](const Json& list, const std::string& where) {
    if (!list.is_array()) throw ParseError(where + ": expected an array of terms");
    HamiltonianSpec h{n, {}};
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string item = where + "[" + std::to_string(k) + "]";
      h.terms.push_back({parse_label(text(field(list[k], "pauli", item), item + ".pauli")),
                         scale * number(field(list[k], "coefficient", item), item + ".coefficient")});
    }
    h.validate();
    return h;
  };
  if (j.contains("groups")) {
    std::vector<HamiltonianSpec> groups;
    const Json& list = j.at("groups");
    if (!list.is_array() || list.empty()) throw ParseError("hamiltonian.groups: expected a nonempty array");
    for (std::size_t g = 0; g < list.size(); ++g) {
      groups.push_back(read_terms(list[g], "hamiltonian.groups[" + std::to_string(g) + "]"));
      if (!groups.back().is_commuting()) {
        throw ValidationError("hamiltonian.groups[" + std::to_string(g) + "]: terms do not commute pairwise");
      }
    }
    return groups;
  }
  return commuting_groups(read_terms(field(j, "terms", "hamiltonian"), "hamiltonian.terms"));
}

Json hamiltonian_groups_to_json(const std::vector<HamiltonianSpec>& groups) {
  Json list = Json::array();
  for (const auto& g : groups) {
    Json terms = Json::array();
    for (const auto& t : g.terms) terms.push_back(Json{{"pauli", t.pauli.to_label()}, {"coefficient", t.coefficient}});
    list.push_back(std::move(terms));
  }
  return Json{{"n", groups.empty() ? 0 : groups.front().n}, {"units", "rad/s"}, {"groups", list}};
}

void apply_config_json(const Json& j, SynthesisConfig& config) {
  if (!j.is_object()) throw ParseError("config: expected an object");
  if (j.contains("fidelity")) config.fidelity_threshold = number(j.at("fidelity"), "config.fidelity");
  if (j.contains("max_rotors")) config.max_rotors = integer(j.at("max_rotors"), "config.max_rotors");
  if (j.contains("penalty")) config.penalty_weight = number(j.at("penalty"), "config.penalty");
  if (j.contains("prune")) config.angle_prune_threshold = number(j.at("prune"), "config.prune");
  if (j.contains("restarts")) config.restarts = integer(j.at("restarts"), "config.restarts");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ParseError("config.seed: expected a nonnegative integer");
    config.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("subset_mode")) parse_subset_mode(text(j.at("subset_mode"), "config.subset_mode"), config);
  if (j.contains("max_candidate_trials")) {
    config.max_candidate_trials = integer(j.at("max_candidate_trials"), "config.max_candidate_trials");
  }
  config.validate();
}

Json config_to_json(const SynthesisConfig& config) {
  std::string mode = to_string(config.subset_mode);
  if (config.subset_mode == SubsetMode::kGreedy) mode += ":" + std::to_string(config.greedy_k);
  return Json{{"fidelity", config.fidelity_threshold},
              {"max_rotors", config.max_rotors},
              {"penalty", config.penalty_weight},
              {"prune", config.angle_prune_threshold},
              {"restarts", config.restarts},
              {"seed", config.seed},
              {"subset_mode", mode},
              {"max_candidate_trials", config.max_candidate_trials}};
}

Json read_json(const std::string& path) {
  const std::string content = slurp(path);
  try {
    return Json::parse(content);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
    out += '\n';
  }
  return out;
}

}  // namespace pdcs
