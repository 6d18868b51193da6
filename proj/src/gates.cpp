#include "pdcs/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "pdcs/errors.hpp"

namespace pdcs {

namespace {

using std::numbers::pi;

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

DenseOperator single(Complex a, Complex b, Complex c, Complex d) {
  DenseOperator m(2, 2);
  m << a, b, c, d;
  return m;
}

DenseOperator controlled(const DenseOperator& u, int controls) {
  const Eigen::Index block = u.rows();
  const Eigen::Index dim = block << controls;
  DenseOperator m = DenseOperator::Identity(dim, dim);
  m.bottomRightCorner(block, block) = u;
  return m;
}

DenseOperator phase_gate(double theta) {
  return single(1, 0, 0, std::polar(1.0, theta));
}

DenseOperator grover(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return 2.0 * psi * psi.adjoint() - DenseOperator::Identity(dim, dim);
}

DenseOperator qft(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  DenseOperator m(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      // Reduce jk mod N before scaling to keep the phase exact for large products.
      const auto e = static_cast<double>((j * k) % dim);
      m(j, k) = std::polar(norm, 2.0 * pi * e / static_cast<double>(dim));
    }
  }
  return m;
}

int require_int_param(const std::vector<double>& params, std::size_t index, const std::string& name,
                      int minimum) {
  if (params.size() <= index) throw ValidationError(name + " needs parameter " + std::to_string(index + 1));
  const double v = params[index];
  if (v != std::floor(v) || v < minimum || v > kDefaultDenseCap) {
    throw ValidationError(name + ": bad integer parameter " + std::to_string(v));
  }
  return static_cast<int>(v);
}

const std::set<std::string>& one_qubit_names() {
  static const std::set<std::string> names{"H", "X", "Y", "Z", "S", "SDG", "T", "TDG"};
  return names;
}

const std::set<std::string>& two_qubit_names() {
  static const std::set<std::string> names{"CNOT", "CZ", "CS", "CSDG", "CT", "CTDG", "CPHASE", "SWAP"};
  return names;
}

const std::set<std::string>& three_qubit_names() {
  static const std::set<std::string> names{"TOFFOLI", "CCZ", "FREDKIN"};
  return names;
}

std::vector<int> sorted_support(const std::vector<int>& a, const std::set<int>& acc) {
  std::set<int> s = acc;
  s.insert(a.begin(), a.end());
  return {s.begin(), s.end()};
}

}  // namespace

int gate_qubit_count(const std::string& raw_name, const std::vector<double>& params) {
  const std::string name = upper(raw_name);
  if (one_qubit_names().count(name)) return 1;
  if (two_qubit_names().count(name)) return 2;
  if (three_qubit_names().count(name)) return 3;
  if (name == "C3NOT" || name == "C3Z") return 4;
  if (name == "GROVER" || name == "QFT" || name == "AQFT") {
    return require_int_param(params, 0, name, 1);
  }
  throw ValidationError("unknown gate \"" + raw_name + "\"");
}

DenseOperator standard_gate(const std::string& raw_name, const std::vector<double>& params) {
  const std::string name = upper(raw_name);
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i{0, 1};
  if (name == "H") return single(r, r, r, -r);
  if (name == "X") return single(0, 1, 1, 0);
  if (name == "Y") return single(0, -i, i, 0);
  if (name == "Z") return single(1, 0, 0, -1);
  if (name == "S") return phase_gate(pi / 2);
  if (name == "SDG") return phase_gate(-pi / 2);
  if (name == "T") return phase_gate(pi / 4);
  if (name == "TDG") return phase_gate(-pi / 4);
  if (name == "CNOT") return controlled(standard_gate("X"), 1);
  if (name == "CZ") return controlled(standard_gate("Z"), 1);
  if (name == "CS") return controlled(standard_gate("S"), 1);
  if (name == "CSDG") return controlled(standard_gate("SDG"), 1);
  if (name == "CT") return controlled(standard_gate("T"), 1);
  if (name == "CTDG") return controlled(standard_gate("TDG"), 1);
  if (name == "CPHASE") {
    if (params.size() != 1 || !std::isfinite(params[0])) {
      throw ValidationError("CPHASE needs one finite angle parameter");
    }
    return controlled(phase_gate(params[0]), 1);
  }
  if (name == "SWAP") {
    DenseOperator m = DenseOperator::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
  }
  if (name == "TOFFOLI") return controlled(standard_gate("X"), 2);
  if (name == "CCZ") return controlled(standard_gate("Z"), 2);
  if (name == "FREDKIN") return controlled(standard_gate("SWAP"), 1);
  if (name == "C3NOT") return controlled(standard_gate("X"), 3);
  if (name == "C3Z") return controlled(standard_gate("Z"), 3);
  if (name == "GROVER") return grover(require_int_param(params, 0, name, 1));
  if (name == "QFT") return qft(require_int_param(params, 0, name, 1));
  if (name == "AQFT") {
    const int n = require_int_param(params, 0, name, 1);
    const int degree = require_int_param(params, 1, name, 1);
    return compose_circuit(aqft_circuit(n, degree));
  }
  throw ValidationError("unknown gate \"" + raw_name + "\"");
}

DenseOperator standard_gate_from_spec(const std::string& spec) {
  std::string name;
  std::vector<double> params;
  const auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') throw ParseError("gate spec \"" + spec + "\" is missing ')'");
    name = spec.substr(0, open);
    std::stringstream args(spec.substr(open + 1, spec.size() - open - 2));
    args.imbue(std::locale::classic());
    std::string item;
    while (std::getline(args, item, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(item, &used));
      } catch (const std::exception&) {
        throw ParseError("bad gate parameter \"" + item + "\" in \"" + spec + "\"");
      }
    }
  } else {
    // Trailing digits on grover/qft/aqft name the qubit count: "grover3", "qft2".
    std::size_t cut = spec.size();
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(spec[cut - 1]))) --cut;
    const std::string stem = upper(spec.substr(0, cut));
    if (cut < spec.size() && (stem == "GROVER" || stem == "QFT" || stem == "AQFT")) {
      name = stem;
      params.push_back(std::stod(spec.substr(cut)));
      if (stem == "AQFT") params.push_back(2);
    } else {
      name = spec;
    }
  }
  return standard_gate(name, params);
}

DenseOperator CircuitGate::unitary() const {
  if (upper(name) == "UNITARY") {
    if (!matrix) throw ValidationError("UNITARY gate without an inline matrix");
    return *matrix;
  }
  return standard_gate(name, params);
}

void CircuitSpec::validate() const {
  if (n < 1 || n > kDefaultDenseCap) {
    throw ValidationError("circuit qubit count must be in 1.." + std::to_string(kDefaultDenseCap));
  }
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const auto& gate = gates[g];
    const std::string where = "gate " + std::to_string(g) + " (" + gate.name + ")";
    std::set<int> seen;
    for (int q : gate.qubits) {
      if (q < 1 || q > n) throw ValidationError(where + ": qubit index " + std::to_string(q) + " out of range");
      if (!seen.insert(q).second) throw ValidationError(where + ": qubit " + std::to_string(q) + " repeated");
    }
    int arity = 0;
    if (upper(gate.name) == "UNITARY") {
      if (!gate.matrix) throw ValidationError(where + ": missing inline matrix");
      const auto dim = gate.matrix->rows();
      if (gate.matrix->cols() != dim || dim != (Eigen::Index{1} << gate.qubits.size())) {
        throw ValidationError(where + ": inline matrix size does not match qubit list");
      }
      arity = static_cast<int>(gate.qubits.size());
    } else {
      arity = gate_qubit_count(gate.name, gate.params);
    }
    if (arity != static_cast<int>(gate.qubits.size())) {
      throw ValidationError(where + ": expects " + std::to_string(arity) + " qubits, got " +
                            std::to_string(gate.qubits.size()));
    }
  }
}

void apply_gate(DenseOperator& m, const DenseOperator& gate, const std::vector<int>& qubits, int n) {
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index local_dim = Eigen::Index{1} << k;
  if (gate.rows() != local_dim || gate.cols() != local_dim) {
    throw DimensionError("apply_gate: gate size does not match its qubit list");
  }
  // offsets[l] = full-register index bits for local index l.
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(local_dim), 0);
  Eigen::Index gate_mask = 0;
  for (Eigen::Index l = 0; l < local_dim; ++l) {
    for (int i = 1; i <= k; ++i) {
      if (l & (Eigen::Index{1} << (k - i))) {
        offsets[static_cast<std::size_t>(l)] |= Eigen::Index{1} << (n - qubits[static_cast<std::size_t>(i - 1)]);
      }
    }
  }
  for (int q : qubits) gate_mask |= Eigen::Index{1} << (n - q);

  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd in(local_dim);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index base = 0; base < dim; ++base) {
      if (base & gate_mask) continue;
      for (Eigen::Index l = 0; l < local_dim; ++l) in(l) = m(base | offsets[static_cast<std::size_t>(l)], col);
      const Eigen::VectorXcd out = gate * in;
      for (Eigen::Index l = 0; l < local_dim; ++l) m(base | offsets[static_cast<std::size_t>(l)], col) = out(l);
    }
  }
}

DenseOperator compose_circuit(const CircuitSpec& spec) {
  spec.validate();
  const Eigen::Index dim = Eigen::Index{1} << spec.n;
  DenseOperator u = DenseOperator::Identity(dim, dim);
  for (const auto& gate : spec.gates) apply_gate(u, gate.unitary(), gate.qubits, spec.n);
  return u;
}

PauliString embed_pauli(const PauliString& local, const std::vector<int>& qubits, int n) {
  const int k = local.num_qubits();
  if (k != static_cast<int>(qubits.size())) throw DimensionError("embed_pauli: qubit list size mismatch");
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int i = 1; i <= k; ++i) {
    const auto local_bit = std::uint64_t{1} << (k - i);
    const auto full_bit = std::uint64_t{1} << (n - qubits[static_cast<std::size_t>(i - 1)]);
    if (local.x_bits() & local_bit) x |= full_bit;
    if (local.z_bits() & local_bit) z |= full_bit;
  }
  return PauliString(n, x, z);
}

int rotor_width(const Rotor& r) { return __builtin_popcountll(r.support()); }

Decomposition merge_adjacent_rotors(const Decomposition& d, int max_width) {
  Decomposition out = d;
  out.rotors.clear();
  for (const auto& next : d.rotors) {
    if (out.rotors.empty()) {
      out.rotors.push_back(next);
      continue;
    }
    Rotor& current = out.rotors.back();
    bool compatible = (__builtin_popcountll(current.support() | next.support()) <= max_width);
    for (std::size_t a = 0; compatible && a < current.members.size(); ++a) {
      for (const auto& q : next.members) {
        if (!commutes(current.members[a], q)) {
          compatible = false;
          break;
        }
      }
    }
    if (!compatible) {
      out.rotors.push_back(next);
      continue;
    }
    for (std::size_t b = 0; b < next.members.size(); ++b) {
      const auto it = std::find(current.members.begin(), current.members.end(), next.members[b]);
      if (it != current.members.end()) {
        auto& angle = current.angles[static_cast<std::size_t>(it - current.members.begin())];
        angle = wrap_angle(angle + next.angles[b]);
      } else {
        current.members.push_back(next.members[b]);
        current.angles.push_back(next.angles[b]);
      }
    }
  }
  return out;
}

namespace {

struct LocalSynthesis {
  Decomposition local;
  SynthesisReport report;
};

LocalSynthesis synthesize_block(const CircuitSpec& spec, std::size_t first, std::size_t last,
                                const std::vector<int>& support, const SynthesisConfig& config) {
  CircuitSpec local;
  local.n = static_cast<int>(support.size());
  for (std::size_t g = first; g <= last; ++g) {
    CircuitGate gate = spec.gates[g];
    for (int& q : gate.qubits) {
      q = static_cast<int>(std::find(support.begin(), support.end(), q) - support.begin()) + 1;
    }
    local.gates.push_back(std::move(gate));
  }
  auto result = synthesize_unitary(compose_circuit(local), config);
  return {std::move(result.decomposition), std::move(result.report)};
}

std::string gate_cache_key(const CircuitGate& gate) {
  std::ostringstream key;
  key.imbue(std::locale::classic());
  key.precision(17);
  key << upper(gate.name);
  for (double p : gate.params) key << ',' << p;
  return key.str();
}

}  // namespace

CircuitDecomposition decompose_circuit(const CircuitSpec& spec, const SynthesisConfig& config,
                                       const CircuitSynthesisOptions& options) {
  spec.validate();
  config.validate();
  int widest = 1;
  for (const auto& g : spec.gates) widest = std::max(widest, static_cast<int>(g.qubits.size()));
  const int limit = options.max_block_qubits > 0 ? options.max_block_qubits : widest;

  // Gate-by-gate syntheses, shared between identical named gates.
  std::map<std::string, LocalSynthesis> cache;
  std::vector<LocalSynthesis> per_gate;
  for (std::size_t g = 0; g < spec.gates.size(); ++g) {
    const auto& gate = spec.gates[g];
    const bool cacheable = upper(gate.name) != "UNITARY";
    const std::string key = gate_cache_key(gate);
    if (cacheable) {
      if (auto it = cache.find(key); it != cache.end()) {
        per_gate.push_back(it->second);
        continue;
      }
    }
    std::vector<int> own(gate.qubits.size());
    for (std::size_t i = 0; i < own.size(); ++i) own[i] = static_cast<int>(i) + 1;
    CircuitSpec single_gate{static_cast<int>(own.size()), {gate}};
    single_gate.gates[0].qubits = own;
    auto local = synthesize_block(single_gate, 0, 0, own, config);
    if (cacheable) cache.emplace(key, local);
    per_gate.push_back(std::move(local));
  }

  CircuitDecomposition out;
  auto add_gate_block = [&](std::size_t g) {
    BlockDecomposition block;
    block.first_gate = block.last_gate = g;
    block.qubits = spec.gates[g].qubits;  // the local rotors use the gate's own qubit order
    block.local = per_gate[g].local;
    block.report = per_gate[g].report;
    out.blocks.push_back(std::move(block));
  };

  std::size_t g = 0;
  while (g < spec.gates.size()) {
    std::set<int> support(spec.gates[g].qubits.begin(), spec.gates[g].qubits.end());
    std::size_t end = g;
    if (options.fuse_blocks) {
      while (end + 1 < spec.gates.size() &&
             static_cast<int>(sorted_support(spec.gates[end + 1].qubits, support).size()) <= limit) {
        ++end;
        support.insert(spec.gates[end].qubits.begin(), spec.gates[end].qubits.end());
      }
    }
    if (end == g) {
      add_gate_block(g);
      ++g;
      continue;
    }
    std::size_t separate_rotors = 0;
    for (std::size_t k = g; k <= end; ++k) separate_rotors += per_gate[k].local.rotors.size();
    bool fused_ok = false;
    if (separate_rotors > 1) {
      SynthesisConfig fused_config = config;
      fused_config.max_rotors =
          std::min(config.max_rotors, static_cast<int>(separate_rotors) - 1);
      const std::vector<int> qubits(support.begin(), support.end());
      auto fused = synthesize_block(spec, g, end, qubits, fused_config);
      if (fused.report.status == SynthesisStatus::kConverged &&
          fused.local.rotors.size() < separate_rotors) {
        BlockDecomposition block;
        block.first_gate = g;
        block.last_gate = end;
        block.qubits = qubits;
        block.local = std::move(fused.local);
        block.report = std::move(fused.report);
        out.blocks.push_back(std::move(block));
        fused_ok = true;
      }
    }
    if (!fused_ok) {
      for (std::size_t k = g; k <= end; ++k) add_gate_block(k);
    }
    g = end + 1;
  }

  for (const auto& block : out.blocks) {
    if (block.report.status != SynthesisStatus::kConverged) {
      throw BlockBudgetError(block.first_gate,
                             "gate " + std::to_string(block.first_gate) + " (" +
                                 spec.gates[block.first_gate].name +
                                 "): rotor budget exhausted at fidelity " +
                                 std::to_string(block.local.achieved_fidelity));
    }
  }

  out.combined.n = spec.n;
  for (const auto& block : out.blocks) {
    for (const auto& rotor : block.local.rotors) {
      Rotor embedded;
      for (const auto& p : rotor.members) embedded.members.push_back(embed_pauli(p, block.qubits, spec.n));
      embedded.angles = rotor.angles;
      out.combined.rotors.push_back(std::move(embedded));
    }
  }
  if (options.merge_rotors) out.combined = merge_adjacent_rotors(out.combined, limit);
  out.combined.achieved_fidelity =
      fidelity_unitary(compose_circuit(spec), decomposition_unitary(out.combined));
  out.combined.metadata["seed"] = std::to_string(config.seed);
  return out;
}

CircuitSpec aqft_circuit(int n, int degree) {
  if (n < 1 || n > kDefaultDenseCap) throw ValidationError("AQFT: bad qubit count");
  if (degree < 1) throw ValidationError("AQFT: degree must be >= 1");
  CircuitSpec spec{n, {}};
  for (int q = 1; q <= n; ++q) {
    spec.gates.push_back({"H", {q}, {}, std::nullopt});
    for (int c = q + 1; c <= n; ++c) {
      const int order = c - q + 1;  // R_order = diag(1, e^{2 pi i / 2^order})
      if (order > degree) continue;
      if (order == 2) {
        spec.gates.push_back({"CS", {c, q}, {}, std::nullopt});
      } else if (order == 3) {
        spec.gates.push_back({"CT", {c, q}, {}, std::nullopt});
      } else {
        spec.gates.push_back({"CPHASE", {c, q}, {2.0 * pi / std::ldexp(1.0, order)}, std::nullopt});
      }
    }
  }
  for (int q = 1; q <= n / 2; ++q) spec.gates.push_back({"SWAP", {q, n + 1 - q}, {}, std::nullopt});
  return spec;
}

std::vector<std::string> circuit_preset_names() {
  return {"qft2", "aqft4", "shor15", "grover2", "grover3"};
}

CircuitSpec circuit_preset(const std::string& raw) {
  const std::string name = upper(raw);
  if (name == "QFT2") return aqft_circuit(2, 2);
  if (name == "AQFT4") return aqft_circuit(4, 2);
  if (name == "GROVER2") return CircuitSpec{2, {{"GROVER", {1, 2}, {2}, std::nullopt}}};
  if (name == "GROVER3") return CircuitSpec{3, {{"GROVER", {1, 2, 3}, {3}, std::nullopt}}};
  if (name == "SHOR15") {
    // Order finding for a = 7 mod 15. Qubits 1-3 hold x (qubit 3 least
    // significant), qubits 4-7 the work register prepared in |0001>.
    CircuitSpec spec{7, {}};
    auto add = [&](const char* gate, std::vector<int> qubits) {
      spec.gates.push_back({gate, std::move(qubits), {}, std::nullopt});
    };
    add("H", {1});
    add("H", {2});
    add("H", {3});
    // x_3 controls multiplication by 7: |1> -> |7>.
    add("CNOT", {3, 5});
    add("CNOT", {3, 6});
    // x_2 controls multiplication by 7^2 = 4 mod 15: a cyclic shift by two bits.
    add("FREDKIN", {2, 4, 6});
    add("FREDKIN", {2, 5, 7});
    // x_1 would multiply by 7^4 = 1 mod 15: nothing to do.
    // Inverse QFT on qubits 1-3.
    add("SWAP", {1, 3});
    add("H", {3});
    add("CSDG", {3, 2});
    add("H", {2});
    add("CTDG", {3, 1});
    add("CSDG", {2, 1});
    add("H", {1});
    return spec;
  }
  throw ValidationError("unknown circuit preset \"" + raw + "\"");
}

}  // namespace pdcs
