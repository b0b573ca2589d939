#include "grsp/circuit.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "grsp/errors.hpp"

namespace grsp {

void GateLayer::insert_gate(const ControlPattern& pattern, double theta) {
  if (pattern.length() != depth_)
    fail(ErrorCategory::length_mismatch,
         "pattern \"" + pattern.trits() + "\" has length " + std::to_string(pattern.length()) +
             ", layer depth is " + std::to_string(depth_));
  if (!std::isfinite(theta) || !is_active_angle(theta) || theta > std::numbers::pi + 1e-9)
    fail(ErrorCategory::invalid_argument,
         "gate angle must lie in (0, pi], got " + std::to_string(theta));
  theta = std::min(theta, std::numbers::pi);
  if (gates_.count(pattern))
    fail(ErrorCategory::duplicate_pattern, "duplicate pattern \"" + pattern.trits() + "\"");
  if (pattern.is_concrete()) {
    // Concrete-concrete overlap is exact equality, already excluded above.
    for (const auto& wild : wild_)
      if (pattern.overlaps(wild))
        fail(ErrorCategory::region_overlap,
             "patterns \"" + pattern.trits() + "\" and \"" + wild.trits() + "\" overlap");
  } else {
    for (const auto& [existing, angle] : gates_) {
      (void)angle;
      if (pattern.overlaps(existing))
        fail(ErrorCategory::region_overlap,
             "patterns \"" + pattern.trits() + "\" and \"" + existing.trits() + "\" overlap");
    }
    wild_.push_back(pattern);
  }
  gates_.emplace(pattern, theta);
}

Circuit to_circuit(const BaselineCircuit& baseline) {
  Circuit circuit(baseline.n);
  for (int k = 0; k < baseline.n; ++k)
    for (const auto& [prefix, theta] : baseline.layer(k))
      if (is_active_angle(theta))
        circuit.layers[static_cast<std::size_t>(k)].insert_gate(ControlPattern::concrete(k, prefix), theta);
  return circuit;
}

long single_rotation_cnots(int n_controls) {
  if (n_controls < 0)
    fail(ErrorCategory::invalid_argument, "control count must be nonnegative");
  if (n_controls == 0) return 0;
  if (n_controls == 1) return 2;
  return 16L * n_controls - 24L;
}

LayerCost layer_cost_decision(const GateLayer& layer) {
  LayerCost cost;
  for (const auto& [pattern, theta] : layer.gates()) {
    (void)theta;
    cost.singles_cnots += single_rotation_cnots(pattern.control_count());
  }
  const long ucr = layer.depth() >= 63 ? 0 : (1L << layer.depth());
  if (layer.empty() || cost.singles_cnots < ucr) {
    cost.mode = LayerMode::singles;
    cost.cnots = cost.singles_cnots;
  } else {
    cost.mode = LayerMode::ucr;
    cost.cnots = ucr;
  }
  return cost;
}

CostReport circuit_cost(const Circuit& circuit) {
  CostReport report;
  report.per_layer.reserve(circuit.layers.size());
  for (const auto& layer : circuit.layers) {
    report.per_layer.push_back(layer_cost_decision(layer));
    report.total_cnots += report.per_layer.back().cnots;
    report.total_singles_cnots += report.per_layer.back().singles_cnots;
  }
  return report;
}

long ucr_only_cnots(const BaselineCircuit& baseline) {
  long total = 0;
  for (int k = 0; k < baseline.n; ++k) {
    bool active = false;
    for (const auto& [prefix, theta] : baseline.layer(k)) {
      (void)prefix;
      if (is_active_angle(theta)) {
        active = true;
        break;
      }
    }
    if (active) total += 1L << k;
  }
  return total;
}

std::string serialize_circuit(const Circuit& circuit) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : circuit.layers) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& [pattern, theta] : layer.gates())
      gates.push_back({{"pattern", pattern.trits()}, {"theta", theta}});
    layers.push_back({{"k", layer.depth()}, {"gates", gates}});
  }
  return nlohmann::json{{"n", circuit.n}, {"layers", layers}}.dump(2) + "\n";
}

Circuit parse_circuit(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::parse_error, std::string("invalid circuit JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("layers"))
    fail(ErrorCategory::parse_error, "circuit JSON must contain \"n\" and \"layers\"");
  const int n = doc.at("n").get<int>();
  if (n < 1 || n > 63)
    fail(ErrorCategory::parse_error, "circuit qubit count must be in [1, 63]");
  Circuit circuit(n);
  const auto& layers = doc.at("layers");
  if (static_cast<int>(layers.size()) != n)
    fail(ErrorCategory::parse_error,
         "expected " + std::to_string(n) + " layers, got " + std::to_string(layers.size()));
  for (int k = 0; k < n; ++k) {
    const auto& layer = layers.at(static_cast<std::size_t>(k));
    if (layer.at("k").get<int>() != k)
      fail(ErrorCategory::parse_error, "layers must be ordered with k = 0.." + std::to_string(n - 1));
    for (const auto& gate : layer.at("gates")) {
      const auto pattern = ControlPattern::from_trits(gate.at("pattern").get<std::string>());
      circuit.layers[static_cast<std::size_t>(k)].insert_gate(pattern, gate.at("theta").get<double>());
    }
  }
  return circuit;
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io_error, "cannot open circuit file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_circuit(buffer.str());
}

void write_circuit_file(const Circuit& circuit, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io_error, "cannot write circuit file: " + path);
  out << serialize_circuit(circuit);
}

} // namespace grsp
