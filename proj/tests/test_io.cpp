#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "pdcs/errors.hpp"
#include "pdcs/io.hpp"
#include "pdcs/simulation.hpp"
#include "support/oracles.hpp"

using namespace pdcs;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("pdcs_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::create_directories(dir);
  return dir;
}

SynthesisResult small_result() {
  SynthesisConfig c;
  c.restarts = 2;
  return synthesize_unitary(standard_gate("CNOT"), c);
}

}  // namespace

TEST(MatrixJson, RoundTripIsBitExact) {
  std::mt19937_64 rng(10);
  const oracle::Matrix u = oracle::random_unitary(8, rng);
  const Json j = matrix_to_json(u);
  EXPECT_EQ(j.at("dim"), 8);
  const DenseOperator back = matrix_from_json(Json::parse(j.dump()), true);
  EXPECT_TRUE(back == u);

  const auto path = scratch_dir() / "u.json";
  write_matrix(path.string(), u);
  EXPECT_TRUE(read_matrix(path.string(), true) == u);
}

TEST(MatrixJson, ReportsBadFields) {
  Json j = matrix_to_json(DenseOperator::Identity(2, 2));
  j["dim"] = 4;
  EXPECT_THROW(matrix_from_json(j), ParseError);
  j = matrix_to_json(DenseOperator::Identity(2, 2));
  j["re"][1] = Json::array({0.0});
  try {
    matrix_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("re"), std::string::npos);
  }
  j = matrix_to_json(DenseOperator::Identity(2, 2));
  j.erase("im");
  EXPECT_THROW(matrix_from_json(j), ParseError);

  DenseOperator skew = DenseOperator::Identity(2, 2);
  skew(0, 1) = 0.1;
  EXPECT_NO_THROW(matrix_from_json(matrix_to_json(skew)));
  EXPECT_THROW(matrix_from_json(matrix_to_json(skew), true), ValidationError);
  EXPECT_THROW(read_matrix((scratch_dir() / "missing.json").string()), Error);
}

TEST(StateJson, RoundTripsEveryKind) {
  const auto [initial, target] = state_preset("w");
  for (const auto& s : {initial, target, QuantumState::deviation(dense(parse_label("ZI"))),
                        QuantumState::density(DenseOperator::Identity(4, 4) / 4.0)}) {
    const auto back = state_from_json(Json::parse(state_to_json(s).dump()));
    EXPECT_EQ(back.kind(), s.kind());
    EXPECT_TRUE(back.matrix() == s.matrix());
  }
  EXPECT_THROW(state_from_json(Json{{"kind", "wavefunction"}}), ParseError);
}

TEST(DecompositionJson, RoundTripPreservesRotorsAndReport) {
  const auto r = small_result();
  RunManifest manifest;
  manifest.command = "decompose";
  manifest.seed = 0;
  manifest.flags["target"] = "cnot";
  const Json j = decomposition_to_json(r.decomposition, r.report, manifest);
  EXPECT_EQ(j.at("manifest").at("tool_version"), kToolVersion);
  SynthesisReport report;
  const auto back = decomposition_from_json(Json::parse(j.dump()), &report);
  ASSERT_EQ(back.rotors.size(), r.decomposition.rotors.size());
  for (std::size_t k = 0; k < back.rotors.size(); ++k) {
    EXPECT_EQ(back.rotors[k].members, r.decomposition.rotors[k].members);
    EXPECT_EQ(back.rotors[k].angles, r.decomposition.rotors[k].angles);
  }
  EXPECT_EQ(back.achieved_fidelity, r.decomposition.achieved_fidelity);
  EXPECT_EQ(report.status, r.report.status);
  EXPECT_EQ(report.iterations.size(), r.report.iterations.size());
  EXPECT_EQ(canonical_decomposition_text(back, report), canonical_decomposition_text(r.decomposition, r.report));
  EXPECT_NEAR(fidelity_unitary(standard_gate("CNOT"), decomposition_unitary(back)), back.achieved_fidelity, 1e-12);
}

TEST(DecompositionJson, EmptyDecompositionHasEmptyRotorList) {
  Decomposition d;
  d.n = 2;
  const Json j = decomposition_to_json(d, {});
  EXPECT_TRUE(j.at("rotors").is_array());
  EXPECT_TRUE(j.at("rotors").empty());
  EXPECT_EQ(decomposition_from_json(j).rotors.size(), 0u);
}

TEST(DecompositionJson, RejectsNonCommutingRotor) {
  Json j = decomposition_to_json(small_result().decomposition, {});
  j["rotors"][0]["paulis"] = Json::array({"XI", "ZI"});
  j["rotors"][0]["angles"] = Json::array({0.1, 0.2});
  EXPECT_THROW(decomposition_from_json(j), Error);
}

TEST(DecompositionJson, CanonicalTextIgnoresManifest) {
  const auto r = small_result();
  RunManifest a;
  a.started_utc = "2020-01-01T00:00:00Z";
  const std::string text = canonical_decomposition_text(r.decomposition, r.report);
  EXPECT_EQ(text.find("manifest"), std::string::npos);
  EXPECT_NE(decomposition_to_json(r.decomposition, r.report, a).dump().find("manifest"), std::string::npos);
}

TEST(Manifest, RoundTrip) {
  RunManifest m;
  m.command = "prepare";
  m.flags = {{"preset", "bell"}, {"seed", "3"}};
  m.seed = 3;
  m.input_digests["target"] = sha256_hex("x");
  m.started_utc = utc_timestamp();
  m.finished_utc = m.started_utc;
  m.wall_seconds = 0.5;
  m.outputs = {"out.json"};
  const auto back = RunManifest::from_json(Json::parse(m.to_json().dump()));
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.flags, m.flags);
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(back.input_digests, m.input_digests);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.wall_seconds, 0.5);
  EXPECT_EQ(m.started_utc.size(), 20u);
  EXPECT_EQ(m.started_utc.back(), 'Z');
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const auto path = scratch_dir() / "abc.txt";
  write_text(path.string(), "abc");
  EXPECT_EQ(sha256_file(path.string()), sha256_hex("abc"));
}

TEST(CircuitJson, ListAndObjectForms) {
  const Json list = Json::parse(R"([{"gate": "H", "qubits": [1]}, {"gate": "CNOT", "qubits": [1, 2]},
                                    {"gate": "CPHASE", "qubits": [2, 1], "params": [0.5]}])");
  const auto spec = circuit_from_json(list);
  EXPECT_EQ(spec.n, 2);
  ASSERT_EQ(spec.gates.size(), 3u);
  EXPECT_EQ(spec.gates[2].params, std::vector<double>{0.5});
  const auto again = circuit_from_json(circuit_to_json(spec));
  EXPECT_EQ(again.n, 2);
  EXPECT_LT((compose_circuit(again) - compose_circuit(spec)).norm(), 1e-15);

  const Json wide = Json::parse(R"({"n": 3, "gates": [{"gate": "X", "qubits": [3]}]})");
  EXPECT_EQ(circuit_from_json(wide).n, 3);
  EXPECT_THROW(circuit_from_json(Json::parse(R"([{"gate": "CNOT", "qubits": [1]}])")), ValidationError);
  EXPECT_THROW(circuit_from_json(Json::parse(R"([{"qubits": [1]}])")), ParseError);
}

TEST(CircuitJson, InlineUnitaryGate) {
  Json gate{{"gate", "UNITARY"}, {"qubits", {2}}, {"matrix", matrix_to_json(standard_gate("H"))}};
  const auto spec = circuit_from_json(Json{{"n", 2}, {"gates", {gate}}});
  const oracle::Matrix h = (oracle::pauli_matrix("X") + oracle::pauli_matrix("Z")) / std::sqrt(2.0);
  const oracle::Matrix expected = Eigen::kroneckerProduct(oracle::Matrix::Identity(2, 2), h).eval();
  EXPECT_LT((compose_circuit(spec) - expected).norm(), 1e-14);
}

TEST(HamiltonianJson, GroupsTermsAndUnits) {
  const Json hz = Json::parse(R"({"n": 1, "units": "Hz", "terms": [{"pauli": "X", "coefficient": 1.0},
                                   {"pauli": "Z", "coefficient": 0.5}]})");
  const auto groups = hamiltonian_groups_from_json(hz);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_DOUBLE_EQ(groups[0].terms[0].coefficient, 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(groups[1].terms[0].coefficient, std::numbers::pi);

  const auto preset = three_body_groups(5.0);
  const auto back = hamiltonian_groups_from_json(Json::parse(hamiltonian_groups_to_json(preset).dump()));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t g = 0; g < 2; ++g) {
    ASSERT_EQ(back[g].terms.size(), preset[g].terms.size());
    for (std::size_t t = 0; t < back[g].terms.size(); ++t) {
      EXPECT_EQ(back[g].terms[t].pauli, preset[g].terms[t].pauli);
      EXPECT_EQ(back[g].terms[t].coefficient, preset[g].terms[t].coefficient);
    }
  }
  EXPECT_THROW(hamiltonian_groups_from_json(Json::parse(
                   R"({"n": 1, "groups": [[{"pauli": "X", "coefficient": 1}, {"pauli": "Z", "coefficient": 1}]]})")),
               ValidationError);
  EXPECT_THROW(hamiltonian_groups_from_json(Json::parse(R"({"n": 1, "units": "eV", "terms": []})")), ParseError);
}

TEST(CommutingGroups, FirstFitPreservesOrder) {
  HamiltonianSpec h{2, {{parse_label("XI"), 1}, {parse_label("ZI"), 2}, {parse_label("IX"), 3}, {parse_label("ZZ"), 4}}};
  const auto groups = commuting_groups(h);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].terms.size(), 2u);
  EXPECT_EQ(groups[0].terms[1].pauli.to_label(), "IX");
  EXPECT_EQ(groups[1].terms[1].pauli.to_label(), "ZZ");
  for (const auto& g : groups) EXPECT_TRUE(g.is_commuting());
}

TEST(ConfigJson, OverridesOnlyPresentKeys) {
  SynthesisConfig c;
  apply_config_json(Json::parse(R"({"fidelity": 0.99, "seed": 11, "subset_mode": "greedy:5"})"), c);
  EXPECT_EQ(c.fidelity_threshold, 0.99);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.subset_mode, SubsetMode::kGreedy);
  EXPECT_EQ(c.greedy_k, 5);
  EXPECT_EQ(c.max_rotors, SynthesisConfig{}.max_rotors);
  SynthesisConfig d;
  apply_config_json(config_to_json(c), d);
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_THROW(apply_config_json(Json::parse(R"({"restarts": "many"})"), c), ParseError);
  EXPECT_THROW(apply_config_json(Json::parse(R"({"restarts": 0})"), c), ValidationError);
}

TEST(Csv, HeaderRowsAndRoundTripDoubles) {
  const double third = 1.0 / 3.0;
  const std::string csv = format_csv({"k", "value"}, {{0, third}, {1, 1e-300}});
  EXPECT_EQ(csv, "k,value\n0," + format_double(third) + "\n1,1e-300\n");
  EXPECT_EQ(std::stod(format_double(third)), third);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(CircuitPresetFiles, MatchBuiltInCircuits) {
  for (const auto& name : circuit_preset_names()) {
    const auto path = fs::path(PDCS_PRESET_DIR) / (name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    const Json j = read_json(path.string());
    EXPECT_TRUE(j.contains("description")) << name;
    const CircuitSpec from_file = circuit_from_json(j);
    const CircuitSpec built_in = circuit_preset(name);
    EXPECT_EQ(circuit_to_json(from_file), circuit_to_json(built_in)) << name;
  }
}
