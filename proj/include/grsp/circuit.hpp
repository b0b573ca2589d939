#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grsp/pattern.hpp"
#include "grsp/state.hpp"

namespace grsp {

/// Angles at or below this magnitude are treated as zero; such gates are
/// never materialized as active gates.
inline constexpr double kZeroAngleTol = 1e-12;

inline bool is_active_angle(double theta) { return theta > kZeroAngleTol; }

/// One layer of controlled y-rotations at depth k: patterns of length k
/// (controls on qubits 1..k) acting on qubit k+1. Regions of distinct gates
/// are pairwise disjoint; insert_gate enforces this.
class GateLayer {
public:
  GateLayer() = default;
  explicit GateLayer(int depth) : depth_(depth) {}

  int depth() const { return depth_; }
  const std::map<ControlPattern, double>& gates() const { return gates_; }
  bool empty() const { return gates_.empty(); }
  std::size_t size() const { return gates_.size(); }

  /// Throws length_mismatch / invalid_argument / duplicate_pattern /
  /// region_overlap. Zero angles are rejected (inactive gates are implicit).
  void insert_gate(const ControlPattern& pattern, double theta);

private:
  int depth_ = 0;
  std::map<ControlPattern, double> gates_;
  std::vector<ControlPattern> wild_; // gates with at least one 'e'
};

struct Circuit {
  int n = 0;
  std::vector<GateLayer> layers; // size n, layer k at index k

  explicit Circuit(int qubits = 0) : n(qubits) {
    layers.reserve(static_cast<std::size_t>(qubits));
    for (int k = 0; k < qubits; ++k) layers.emplace_back(k);
  }
};

/// Active gates of the baseline as a layered circuit (concrete patterns).
Circuit to_circuit(const BaselineCircuit& baseline);

/// CNOT count of one multi-controlled y-rotation decomposed on its own:
/// 0 / 2 / 16 N - 24 for N = 0 / 1 / >1 controls.
long single_rotation_cnots(int n_controls);

enum class LayerMode { singles, ucr };

struct LayerCost {
  LayerMode mode = LayerMode::singles;
  long cnots = 0;
  long singles_cnots = 0; // cost if every rotation is decomposed on its own
};

/// Per-layer decision: keep the merged single rotations iff their total
/// CNOT count is strictly smaller than the 2^k CNOTs of a uniformly
/// controlled rotation; ties resolve to UCR.
LayerCost layer_cost_decision(const GateLayer& layer);

struct CostReport {
  std::vector<LayerCost> per_layer;
  long total_cnots = 0;
  long total_singles_cnots = 0;
};

CostReport circuit_cost(const Circuit& circuit);

/// Sum of 2^k over the layers that carry at least one active gate.
long ucr_only_cnots(const BaselineCircuit& baseline);

// --- JSON format -------------------------------------------------------------
// {"n": int, "layers": [{"k": int, "gates": [{"pattern": "<trits>",
//  "theta": float}]}]} with gates ordered by pattern ('0' < '1' < 'e').

std::string serialize_circuit(const Circuit& circuit);
Circuit parse_circuit(std::string_view text);

Circuit read_circuit_file(const std::string& path);
void write_circuit_file(const Circuit& circuit, const std::string& path);

} // namespace grsp
