#pragma once

#include <map>
#include <optional>
#include <vector>

#include "grsp/circuit.hpp"
#include "grsp/exact_optimizer.hpp"
#include "grsp/state.hpp"

namespace grsp {

/// Optimal merged angle 2*atan2(Y, X) for nonnegative accumulators
/// X = sum P cos(theta/2), Y = sum P sin(theta/2). Throws if both are zero.
double cluster_angle(double x_sum, double y_sum);

/// F' = F + L_A + L_B - L_C (neighbor merge) or F + L_A - L_C with L_B = 0
/// (control stripping).
double estimator_update(double f_est, double loss_a, double loss_b, double loss_c);

/// Thresholds F^(s) = 1 - s (1 - F_min) / M for s = 1..M.
std::vector<double> threshold_schedule(double f_min, int intervals);

struct ClusterSource {
  ControlPattern pattern; // concrete, length = layer depth
  double theta = 0.0;     // baseline angle
  double prob = 0.0;      // baseline probability, > 0 for stored sources
};

/// Set of baseline patterns absorbed into one active gate. Only sources
/// with positive baseline probability are stored; zero-weight absorbed
/// regions are implicit. The loss admits the closed form
///   L_C = sum P - (X cos(theta_C/2) + Y sin(theta_C/2)),
/// which set_angle() keeps cached.
class Cluster {
public:
  Cluster() = default;
  Cluster(int layer, std::vector<ClusterSource> sources, double theta);

  int layer() const { return layer_; }
  const std::vector<ClusterSource>& sources() const { return sources_; }
  double prob_sum() const { return prob_sum_; }
  double x_sum() const { return x_sum_; }
  double y_sum() const { return y_sum_; }
  double angle() const { return theta_; }
  double loss() const { return loss_; }

  double optimal_angle() const { return cluster_angle(x_sum_, y_sum_); }
  void set_angle(double theta);

  /// Loss recomputed term by term from the sources (test oracle path).
  double recompute_loss() const;

private:
  friend Cluster merge_clusters(const Cluster& a, const Cluster& b);
  friend Cluster strip_extend(const Cluster& a, const std::vector<ClusterSource>& absorbed);

  int layer_ = 0;
  std::vector<ClusterSource> sources_;
  double prob_sum_ = 0.0;
  double x_sum_ = 0.0;
  double y_sum_ = 0.0;
  double theta_ = 0.0;
  double loss_ = 0.0;
};

/// Joined cluster with re-optimized angle. Throws on cross-layer merge.
Cluster merge_clusters(const Cluster& a, const Cluster& b);

/// Cluster extended by absorbed sibling sources (baseline angle ~0); only
/// positive-probability entries are stored. Angle re-optimized.
Cluster strip_extend(const Cluster& a, const std::vector<ClusterSource>& absorbed);

struct Candidate {
  int layer = 0;
  MoveKind kind = MoveKind::neighbor;
  ControlPattern source_a;
  ControlPattern source_b; // neighbor merges only
  int strip_position = -1; // strips only
  ControlPattern result;
  double theta = 0.0;         // proposed merged angle
  double estimate = 0.0;      // estimated post-merge overlap
  double absorbed_prob = 0.0; // strips: weight of absorbed baseline entries
};

struct AcceptedMove {
  Candidate candidate;
  double f_est_after = 0.0;
};

struct ApproxOptions {
  int intervals = 20;                 // M; Fig-8 plateau default
  std::optional<int> only_layer;      // restrict moves to one layer (tests)
  bool verify_each_accept = false;    // re-derive the estimator after every accept
};

struct ApproxResult {
  Circuit optimized;
  std::vector<std::map<ControlPattern, Cluster>> clusters; // per layer
  double f_est = 1.0;
  CostReport cost;
  std::vector<AcceptedMove> accepted;
};

/// Greedy fidelity-budgeted merging on top of the exact optimization.
/// Candidate lists are generated once per threshold pass; every candidate is
/// re-evaluated against the current cluster state when it is reached.
class ApproxOptimizer {
public:
  ApproxOptimizer(const PreparationTree& tree, const BaselineCircuit& baseline,
                  ApproxOptions options = {});

  /// Derives clusters for an arbitrary active circuit: each gate absorbs
  /// every supported baseline entry inside its region, keeping the gate's
  /// own angle. Remaining zero-angle supported entries stay absorbable.
  void adopt(const Circuit& active);

  std::vector<Candidate> generate_candidates() const;

  /// One greedy sweep at a fixed threshold; returns the number of accepted
  /// moves. Candidates are sorted by decreasing estimate (ties by result
  /// pattern, then layer).
  int greedy_pass(double threshold);

  /// Threshold schedule followed by saturation passes at f_min.
  ApproxResult run_from(const Circuit& exact_circuit, double f_min);

  double estimator() const { return f_est_; }
  double recompute_estimator() const;
  const std::map<ControlPattern, Cluster>& layer_clusters(int k) const;
  Circuit current_circuit() const;
  const std::vector<AcceptedMove>& accepted() const { return accepted_; }

private:
  struct LayerState {
    std::map<ControlPattern, Cluster> active;
    std::map<basis_t, double> uncovered; // zero-angle supported entries not absorbed
  };

  void apply_neighbor(const Candidate& cand, const Cluster& merged);
  void apply_strip(const Candidate& cand, const Cluster& extended);
  void verify_consistency() const;

  const PreparationTree* tree_;
  const BaselineCircuit* baseline_;
  ApproxOptions options_;
  int n_ = 0;
  double f_est_ = 1.0;
  std::vector<LayerState> layers_;
  std::vector<AcceptedMove> accepted_;

  // Pass-local state: regions that grew and entries absorbed since the
  // candidate list of the running pass was generated.
  std::vector<std::vector<ControlPattern>> pass_added_regions_;
  std::vector<std::vector<std::pair<basis_t, double>>> pass_removed_uncovered_;
  mutable std::vector<Candidate> cached_candidates_;
  mutable bool cache_valid_ = false;
};

/// Full pipeline stage: exact optimization, then the threshold schedule.
/// Throws invalid_argument unless f_min in (0, 1] and intervals >= 1.
ApproxResult optimize_approx(const BaselineCircuit& baseline, const PreparationTree& tree,
                             double f_min, int intervals, ApproxOptions options = {});

} // namespace grsp
