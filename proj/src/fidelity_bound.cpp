#include "grsp/fidelity_bound.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "grsp/errors.hpp"

namespace grsp {

namespace {

double branch_factor(double theta, int bit) {
  return bit == 0 ? std::cos(theta / 2.0) : std::sin(theta / 2.0);
}

// Covering-angle lookup over one layer, hashed concretes plus a wild scan.
struct FinalLayerIndex {
  std::unordered_map<basis_t, double> concrete;
  std::vector<std::pair<ControlPattern, double>> wild;

  explicit FinalLayerIndex(const GateLayer& layer) {
    for (const auto& [pattern, theta] : layer.gates()) {
      if (pattern.is_concrete())
        concrete.emplace(pattern.value(), theta);
      else
        wild.emplace_back(pattern, theta);
    }
  }

  double angle_for(basis_t prefix) const {
    if (auto it = concrete.find(prefix); it != concrete.end()) return it->second;
    for (const auto& [pattern, theta] : wild)
      if (pattern.matches(prefix)) return theta;
    return 0.0;
  }
};

} // namespace

double single_merge_overlap(double theta_x, double theta_y, double theta_c,
                            double prob_x, double prob_y) {
  return 1.0 - (1.0 - std::cos((theta_x - theta_c) / 2.0)) * prob_x -
         (1.0 - std::cos((theta_y - theta_c) / 2.0)) * prob_y;
}

AmplificationTable::AmplificationTable(int n, std::map<basis_t, std::vector<double>> rows)
    : n_(n), rows_(std::move(rows)) {
  for (const auto& [leaf, factors] : rows_)
    for (int k = 0; k <= n_; ++k)
      by_prefix_.emplace(std::make_pair(k, leaf >> (n_ - k)), factors[static_cast<std::size_t>(k)]);
}

double AmplificationTable::at(basis_t leaf, int depth) const {
  auto it = rows_.find(leaf);
  if (it == rows_.end())
    fail(ErrorCategory::invalid_argument, "leaf not in the supported set");
  return it->second.at(static_cast<std::size_t>(depth));
}

double AmplificationTable::prefix_factor(int depth, basis_t prefix) const {
  auto it = by_prefix_.find(std::make_pair(depth, prefix));
  if (it == by_prefix_.end())
    fail(ErrorCategory::invalid_argument, "prefix supports no leaf at this depth");
  return it->second;
}

AmplificationTable amplification_table(const BaselineCircuit& baseline,
                                       const Circuit& final_circuit,
                                       const SparseState& state) {
  if (baseline.n != final_circuit.n || baseline.n != state.n)
    fail(ErrorCategory::dimension_mismatch, "baseline, circuit and state sizes differ");
  const int n = state.n;

  std::vector<FinalLayerIndex> final_layers;
  final_layers.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    final_layers.emplace_back(final_circuit.layers[static_cast<std::size_t>(k)]);

  std::map<basis_t, std::vector<double>> rows;
  for (const auto& [leaf, amplitude] : state.entries) {
    (void)amplitude;
    std::vector<double> factors(static_cast<std::size_t>(n) + 1, 1.0);
    basis_t prefix = 0;
    for (int l = 1; l <= n; ++l) {
      const int bit = static_cast<int>((leaf >> (n - l)) & 1);
      const auto& angles = baseline.layer(l - 1);
      auto angle_it = angles.find(prefix);
      if (angle_it == angles.end())
        fail(ErrorCategory::internal, "supported leaf passes an unsupported prefix");
      const double base = branch_factor(angle_it->second, bit);
      if (base == 0.0)
        fail(ErrorCategory::internal, "supported leaf crosses a zero-amplitude branch");
      const double changed = branch_factor(final_layers[static_cast<std::size_t>(l - 1)].angle_for(prefix), bit);
      factors[static_cast<std::size_t>(l)] = factors[static_cast<std::size_t>(l - 1)] * changed / base;
      prefix = (prefix << 1) | static_cast<basis_t>(bit);
    }
    rows.emplace(leaf, std::move(factors));
  }
  return {n, std::move(rows)};
}

double lower_bound(const std::vector<std::map<ControlPattern, Cluster>>& clusters,
                   const AmplificationTable& table) {
  double penalty = 0.0;
  for (const auto& layer : clusters)
    for (const auto& [pattern, cluster] : layer) {
      (void)pattern;
      if (cluster.loss() == 0.0) continue;
      double amplification = 0.0;
      for (const auto& source : cluster.sources())
        amplification = std::max(
            amplification, table.prefix_factor(cluster.layer(), source.pattern.value()));
      penalty += amplification * cluster.loss();
    }
  return 1.0 - penalty;
}

} // namespace grsp
