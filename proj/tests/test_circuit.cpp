#include <doctest.h>

#include <numbers>

#include "grsp/circuit.hpp"
#include "grsp/errors.hpp"

using namespace grsp;
using std::numbers::pi;

TEST_CASE("single rotation CNOT counts") {
  CHECK(single_rotation_cnots(0) == 0);
  CHECK(single_rotation_cnots(1) == 2);
  CHECK(single_rotation_cnots(2) == 8);
  CHECK(single_rotation_cnots(4) == 40);
  CHECK_THROWS_AS(single_rotation_cnots(-1), Error);
}

TEST_CASE("layer cost decision") {
  GateLayer example(2);
  example.insert_gate(ControlPattern::from_trits("00"), pi);
  example.insert_gate(ControlPattern::from_trits("e1"), pi);
  auto cost = layer_cost_decision(example);
  CHECK(cost.singles_cnots == 10);
  CHECK(cost.mode == LayerMode::ucr);
  CHECK(cost.cnots == 4);

  GateLayer tie(1);
  tie.insert_gate(ControlPattern::from_trits("0"), pi / 3);
  cost = layer_cost_decision(tie);
  CHECK(cost.singles_cnots == 2);
  CHECK(cost.mode == LayerMode::ucr); // not strictly smaller than 2^1
  CHECK(cost.cnots == 2);

  cost = layer_cost_decision(GateLayer(3));
  CHECK(cost.mode == LayerMode::singles);
  CHECK(cost.cnots == 0);

  GateLayer root(0);
  root.insert_gate(ControlPattern(), 1.0);
  cost = layer_cost_decision(root);
  CHECK(cost.cnots == 0);
}

TEST_CASE("layer insertion enforces the invariants") {
  GateLayer layer(2);
  layer.insert_gate(ControlPattern::from_trits("0e"), 1.0);
  CHECK_THROWS_AS(layer.insert_gate(ControlPattern::from_trits("0e"), 2.0), Error);
  CHECK_THROWS_AS(layer.insert_gate(ControlPattern::from_trits("01"), 2.0), Error);
  CHECK_THROWS_AS(layer.insert_gate(ControlPattern::from_trits("ee"), 2.0), Error);
  CHECK_THROWS_AS(layer.insert_gate(ControlPattern::from_trits("111"), 2.0), Error);
  CHECK_THROWS_AS(layer.insert_gate(ControlPattern::from_trits("10"), 0.0), Error);
  CHECK_THROWS_AS(layer.insert_gate(ControlPattern::from_trits("10"), 4.0), Error);
  layer.insert_gate(ControlPattern::from_trits("1e"), 2.0);
  CHECK(layer.size() == 2);
}

TEST_CASE("circuit JSON round trip") {
  const auto state = normalize_and_validate(3, {{0b001, 1.0}, {0b011, 1.0}, {0b100, 1.0}});
  const auto circuit = to_circuit(compute_baseline_angles(build_preparation_tree(state)));
  const auto parsed = parse_circuit(serialize_circuit(circuit));
  CHECK(parsed.n == circuit.n);
  for (int k = 0; k < circuit.n; ++k)
    CHECK(parsed.layers[static_cast<std::size_t>(k)].gates() ==
          circuit.layers[static_cast<std::size_t>(k)].gates());
  // Serialization is deterministic.
  CHECK(serialize_circuit(parsed) == serialize_circuit(circuit));
}

TEST_CASE("circuit JSON rejects invalid structure") {
  CHECK_THROWS_AS(parse_circuit("not json"), Error);
  CHECK_THROWS_AS(parse_circuit(R"({"n": 1})"), Error);
  // overlapping regions 0e and 01
  const char* overlapping = R"({"n": 2, "layers": [
    {"k": 0, "gates": []},
    {"k": 1, "gates": [{"pattern": "0e", "theta": 1.0}, {"pattern": "01", "theta": 1.0}]}
  ]})";
  CHECK_THROWS_AS(parse_circuit(overlapping), Error);
  const char* malformed = R"({"n": 1, "layers": [{"k": 0, "gates": [{"pattern": "x", "theta": 1.0}]}]})";
  CHECK_THROWS_AS(parse_circuit(malformed), Error);
  const char* duplicate = R"({"n": 2, "layers": [
    {"k": 0, "gates": []},
    {"k": 1, "gates": [{"pattern": "0", "theta": 1.0}, {"pattern": "0", "theta": 0.5}]}
  ]})";
  CHECK_THROWS_AS(parse_circuit(duplicate), Error);
}

TEST_CASE("empty circuit is valid and serializable") {
  const Circuit empty(1);
  const auto parsed = parse_circuit(serialize_circuit(empty));
  CHECK(parsed.n == 1);
  CHECK(parsed.layers[0].empty());
}

TEST_CASE("ucr-only cost skips all-zero layers") {
  // |100>: layer 1 has only the zero angle at prefix 1, layer 2 only at 10.
  const auto state = normalize_and_validate(3, {{0b100, 1.0}});
  const auto baseline = compute_baseline_angles(build_preparation_tree(state));
  CHECK(ucr_only_cnots(baseline) == 1); // just layer 0
}
