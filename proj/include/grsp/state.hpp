#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grsp/basis.hpp"
#include "grsp/pattern.hpp"

namespace grsp {

/// Normalized sparse state with real, strictly positive amplitudes keyed by
/// n-bit basis indices. Zero entries are never stored.
struct SparseState {
  int n = 0;
  std::map<basis_t, double> entries;

  std::size_t support_size() const { return entries.size(); }
  double amplitude(basis_t index) const {
    auto it = entries.find(index);
    return it == entries.end() ? 0.0 : it->second;
  }
};

/// Validates raw (index, amplitude) pairs, drops zeros and normalizes.
/// Throws duplicate_index / negative_amplitude / index_out_of_range /
/// empty_support / invalid_argument.
SparseState normalize_and_validate(int n, const std::vector<std::pair<basis_t, double>>& raw);

/// Coarse-grained amplitudes per depth: level k maps each supported k-bit
/// prefix to the 2-norm of the leaf amplitudes below it. Level 0 holds the
/// single root value 1; level n equals the state itself.
struct PreparationTree {
  int n = 0;
  std::vector<std::map<basis_t, double>> levels; // size n+1

  const std::map<basis_t, double>& level(int k) const { return levels[static_cast<std::size_t>(k)]; }
  double amplitude(int k, basis_t prefix) const {
    const auto& l = level(k);
    auto it = l.find(prefix);
    return it == l.end() ? 0.0 : it->second;
  }
};

/// Bottom-up construction over the d leaves; O(d n) node visits.
PreparationTree build_preparation_tree(const SparseState& state);

/// Rotation angles for every supported prefix, including zero angles
/// (kept for estimator bookkeeping; an angle is active iff > 1e-12).
/// Layer k maps k-bit prefixes in S_k to theta in [0, pi].
struct BaselineCircuit {
  int n = 0;
  std::vector<std::map<basis_t, double>> layers; // size n

  const std::map<basis_t, double>& layer(int k) const { return layers[static_cast<std::size_t>(k)]; }
};

BaselineCircuit compute_baseline_angles(const PreparationTree& tree);

/// Probability mass of the pattern's region at its depth:
/// sum of squared level-k amplitudes over S_k ∩ B(pattern).
double prefix_probability(const PreparationTree& tree, const ControlPattern& pattern);

// --- text / JSON formats ---------------------------------------------------

/// Text format: header line "n=<int>", then "<n-bit string> <amplitude>"
/// per entry. JSON form: {"n": int, "entries": [[index, amplitude], ...]}.
/// parse_state() auto-detects the two (JSON iff first non-space char is '{').
SparseState parse_state(std::string_view text);
std::string to_text(const SparseState& state);
std::string to_json_text(const SparseState& state);

SparseState read_state_file(const std::string& path);
void write_state_file(const SparseState& state, const std::string& path, bool json);

} // namespace grsp
