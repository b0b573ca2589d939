#pragma once

#include <map>
#include <vector>

#include "grsp/approx_optimizer.hpp"
#include "grsp/circuit.hpp"
#include "grsp/state.hpp"

namespace grsp {

/// Overlap between the states before and after one merge of patterns x, y
/// into angle theta_C, given the current-circuit region probabilities:
///   1 - sum_w (1 - cos((theta_w - theta_C)/2)) P_w.
double single_merge_overlap(double theta_x, double theta_y, double theta_c,
                            double prob_x, double prob_y);

/// Amplification factors R at the entrance of each depth, per supported
/// leaf: products of final/baseline branch factors g(theta, bit) with
/// g(theta,0)=cos(theta/2), g(theta,1)=sin(theta/2) along the leaf's path.
class AmplificationTable {
public:
  AmplificationTable() = default;
  AmplificationTable(int n, std::map<basis_t, std::vector<double>> rows);

  int n() const { return n_; }
  const std::map<basis_t, std::vector<double>>& rows() const { return rows_; }

  double at(basis_t leaf, int depth) const;

  /// R for a supported depth-k prefix (read off any leaf extending it).
  double prefix_factor(int depth, basis_t prefix) const;

private:
  int n_ = 0;
  std::map<basis_t, std::vector<double>> rows_;
  std::map<std::pair<int, basis_t>, double> by_prefix_;
};

AmplificationTable amplification_table(const BaselineCircuit& baseline,
                                       const Circuit& final_circuit,
                                       const SparseState& state);

/// Rigorous post-hoc bound: 1 - sum_C R_C L_C with R_C the maximum
/// amplification over the cluster's stored sources at its layer.
double lower_bound(const std::vector<std::map<ControlPattern, Cluster>>& clusters,
                   const AmplificationTable& table);

} // namespace grsp
