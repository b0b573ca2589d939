#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grsp/approx_optimizer.hpp"
#include "grsp/exact_optimizer.hpp"
#include "grsp/state.hpp"

namespace grsp {

struct ResultRecord {
  std::uint64_t seed = 0;
  std::uint64_t d = 0;
  long cnots_unmerged_singles = 0; // baseline, single-rotation decomposition
  long cnots_exact_singles = 0;    // after exact merges, still singles
  long cnots_after_exact = 0;      // per-layer singles/UCR decision
  long cnots_ucr_only = 0;         // 2^k per nonempty layer
  long cnots_after_approx = 0;
  double f_est = 1.0;
  double f_true = 1.0;
  double f_lb = 1.0;
  double wall_seconds = 0.0;
};

/// Full pipeline: tree, baseline, exact + approximate optimization, lower
/// bound and simulator check. Enforces the record invariants
/// (f_true >= f_lb - 1e-10, cost monotonicities) and throws on violation.
ResultRecord run_pipeline(const SparseState& state, double f_min, int intervals);

enum class ExperimentId { merge_ratio, cost_comparison, estimator_gap, approx_vs_exact, m_sweep };

std::optional<ExperimentId> parse_experiment_id(const std::string& name);
const char* to_string(ExperimentId id);

/// Grid defaults follow the reference setups; any explicitly set field
/// replaces the default sweep (a single sparsity pins the whole sweep).
struct ExperimentConfig {
  ExperimentId id = ExperimentId::merge_ratio;
  int n = 20;
  std::optional<double> sparsity;  // D = d / 2^n
  std::optional<std::uint64_t> d;  // explicit support size wins over sparsity
  double f_min = 0.9;
  int intervals = 20;
  int repetitions = 20;
  std::uint64_t seed = 1;
  std::vector<double> sparsity_grid; // empty = experiment default
  std::vector<double> f_min_grid;    // empty = experiment default
  std::vector<int> interval_grid;    // m_sweep only; empty = default
};

std::uint64_t support_for_sparsity(int n, double sparsity);

/// Runs the experiment and returns the CSV text (comment header lines with
/// '#', then one row per parameter point with mean/min/max aggregates).
/// Deterministic: identical config produces byte-identical CSV.
std::string run_experiment(const ExperimentConfig& config);

} // namespace grsp
