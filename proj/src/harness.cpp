#include "grsp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "grsp/errors.hpp"
#include "grsp/fidelity_bound.hpp"
#include "grsp/random_instance.hpp"
#include "grsp/simulator.hpp"

namespace grsp {

namespace {

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

struct Aggregate {
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  long count = 0;

  void add(double value) {
    sum += value;
    min = std::min(min, value);
    max = std::max(max, value);
    ++count;
  }
  double mean() const { return count == 0 ? 0.0 : sum / count; }
};

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
  }
  return grid;
}

std::vector<double> effective_sparsities(const ExperimentConfig& config,
                                         std::vector<double> fallback) {
  if (config.d) return {static_cast<double>(*config.d) / static_cast<double>(basis_count(config.n))};
  if (config.sparsity) return {*config.sparsity};
  if (!config.sparsity_grid.empty()) return config.sparsity_grid;
  return fallback;
}

std::vector<double> effective_fmins(const ExperimentConfig& config, std::vector<double> fallback) {
  if (!config.f_min_grid.empty()) return config.f_min_grid;
  return fallback;
}

struct ExactStage {
  SparseState state;
  PreparationTree tree;
  BaselineCircuit baseline;
  ExactResult exact;
  long unmerged_singles = 0;
  long ucr_only = 0;
};

ExactStage run_exact_stage(int n, std::uint64_t d, std::uint64_t seed) {
  ExactStage stage;
  stage.state = random_instance(n, d, seed);
  stage.tree = build_preparation_tree(stage.state);
  stage.baseline = compute_baseline_angles(stage.tree);
  const Circuit baseline_circuit = to_circuit(stage.baseline);
  stage.unmerged_singles = circuit_cost(baseline_circuit).total_singles_cnots;
  stage.ucr_only = ucr_only_cnots(stage.baseline);
  stage.exact = optimize_exact(baseline_circuit, stage.tree);
  return stage;
}

void header(std::ostringstream& out, const ExperimentConfig& config, const std::string& columns) {
  out << "# grsp experiment=" << to_string(config.id) << " n=" << config.n
      << " reps=" << config.repetitions << " seed=" << config.seed
      << " intervals=" << config.intervals << " amplitude_dist=uniform(0,1]\n";
  out << "# columns: " << columns << "\n";
}

} // namespace

ResultRecord run_pipeline(const SparseState& state, double f_min, int intervals) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord record;
  record.d = state.support_size();

  const PreparationTree tree = build_preparation_tree(state);
  const BaselineCircuit baseline = compute_baseline_angles(tree);
  const Circuit baseline_circuit = to_circuit(baseline);
  record.cnots_unmerged_singles = circuit_cost(baseline_circuit).total_singles_cnots;
  record.cnots_ucr_only = ucr_only_cnots(baseline);

  const ExactResult exact = optimize_exact(baseline_circuit, tree);
  record.cnots_after_exact = exact.cost.total_cnots;
  record.cnots_exact_singles = exact.cost.total_singles_cnots;

  ApproxOptimizer optimizer(tree, baseline, ApproxOptions{.intervals = intervals});
  const ApproxResult approx = optimizer.run_from(exact.optimized, f_min);
  record.cnots_after_approx = approx.cost.total_cnots;
  record.f_est = approx.f_est;

  const AmplificationTable table = amplification_table(baseline, approx.optimized, state);
  record.f_lb = lower_bound(approx.clusters, table);
  record.f_true = overlap(simulate(approx.optimized), state);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (record.f_true < record.f_lb - 1e-10)
    fail(ErrorCategory::internal, "overlap " + fmt(record.f_true) +
                                      " fell below its lower bound " + fmt(record.f_lb));
  if (record.f_est < f_min)
    fail(ErrorCategory::internal, "estimator " + fmt(record.f_est) +
                                      " fell below the requested minimum " + fmt(f_min));
  if (record.cnots_after_exact > std::min(record.cnots_ucr_only, record.cnots_unmerged_singles))
    fail(ErrorCategory::internal, "exact optimization exceeded a pure strategy");
  if (record.cnots_after_approx > record.cnots_after_exact)
    fail(ErrorCategory::internal, "approximate optimization exceeded the exact cost");
  return record;
}

std::optional<ExperimentId> parse_experiment_id(const std::string& name) {
  if (name == "merge_ratio") return ExperimentId::merge_ratio;
  if (name == "cost_comparison") return ExperimentId::cost_comparison;
  if (name == "estimator_gap") return ExperimentId::estimator_gap;
  if (name == "approx_vs_exact") return ExperimentId::approx_vs_exact;
  if (name == "m_sweep") return ExperimentId::m_sweep;
  return std::nullopt;
}

const char* to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::merge_ratio: return "merge_ratio";
    case ExperimentId::cost_comparison: return "cost_comparison";
    case ExperimentId::estimator_gap: return "estimator_gap";
    case ExperimentId::approx_vs_exact: return "approx_vs_exact";
    case ExperimentId::m_sweep: return "m_sweep";
  }
  return "merge_ratio";
}

std::uint64_t support_for_sparsity(int n, double sparsity) {
  const double scaled = sparsity * static_cast<double>(basis_count(n));
  const auto rounded = static_cast<std::uint64_t>(std::llround(scaled));
  return std::clamp<std::uint64_t>(rounded, 1, basis_count(n));
}

namespace {

std::string run_merge_ratio(const ExperimentConfig& config) {
  std::ostringstream out;
  header(out, config, "D,d,mean_ratio,min_ratio,max_ratio");
  const auto sparsities = effective_sparsities(config, log_spaced(1e-5, 1e-2, 10));
  for (std::size_t point = 0; point < sparsities.size(); ++point) {
    const std::uint64_t d = config.d ? *config.d : support_for_sparsity(config.n, sparsities[point]);
    Aggregate ratio;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto stage = run_exact_stage(config.n, d, mix_seed(config.seed, point, rep));
      ratio.add(stage.unmerged_singles == 0
                    ? 1.0
                    : static_cast<double>(stage.exact.cost.total_singles_cnots) /
                          static_cast<double>(stage.unmerged_singles));
    }
    out << fmt(sparsities[point]) << "," << d << "," << fmt(ratio.mean()) << ","
        << fmt(ratio.min) << "," << fmt(ratio.max) << "\n";
  }
  return out.str();
}

std::string run_cost_comparison(const ExperimentConfig& config) {
  std::ostringstream out;
  header(out, config,
         "D,d,mean_ucr_cnots,mean_singles_cnots,mean_exact_cnots,min_exact_cnots,"
         "max_exact_cnots,mean_exact_over_ucr");
  const auto sparsities = effective_sparsities(config, log_spaced(1e-5, 1e-2, 10));
  for (std::size_t point = 0; point < sparsities.size(); ++point) {
    const std::uint64_t d = config.d ? *config.d : support_for_sparsity(config.n, sparsities[point]);
    Aggregate ucr, singles, exact, exact_over_ucr;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto stage = run_exact_stage(config.n, d, mix_seed(config.seed, point, rep));
      ucr.add(static_cast<double>(stage.ucr_only));
      singles.add(static_cast<double>(stage.exact.cost.total_singles_cnots));
      exact.add(static_cast<double>(stage.exact.cost.total_cnots));
      exact_over_ucr.add(stage.ucr_only == 0 ? 1.0
                                             : static_cast<double>(stage.exact.cost.total_cnots) /
                                                   static_cast<double>(stage.ucr_only));
    }
    out << fmt(sparsities[point]) << "," << d << "," << fmt(ucr.mean()) << ","
        << fmt(singles.mean()) << "," << fmt(exact.mean()) << "," << fmt(exact.min) << ","
        << fmt(exact.max) << "," << fmt(exact_over_ucr.mean()) << "\n";
  }
  return out.str();
}

std::string run_estimator_gap(const ExperimentConfig& config) {
  std::ostringstream out;
  header(out, config,
         "F_min,D,d,mean_est_gap,min_est_gap,max_est_gap,mean_lb_gap,min_lb_gap,"
         "max_lb_gap,frac_est_below_true");
  const auto sparsities = effective_sparsities(config, {1e-3, 3e-3, 1e-2});
  const auto fmins = effective_fmins(config, {0.80, 0.85, 0.90, 0.95, 0.99});
  for (std::size_t point = 0; point < sparsities.size(); ++point) {
    const std::uint64_t d = config.d ? *config.d : support_for_sparsity(config.n, sparsities[point]);
    std::vector<Aggregate> est_gap(fmins.size()), lb_gap(fmins.size());
    std::vector<long> est_below(fmins.size(), 0);
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto stage = run_exact_stage(config.n, d, mix_seed(config.seed, point, rep));
      for (std::size_t fi = 0; fi < fmins.size(); ++fi) {
        ApproxOptimizer optimizer(stage.tree, stage.baseline,
                                  ApproxOptions{.intervals = config.intervals});
        const ApproxResult approx = optimizer.run_from(stage.exact.optimized, fmins[fi]);
        const auto table = amplification_table(stage.baseline, approx.optimized, stage.state);
        const double f_lb = lower_bound(approx.clusters, table);
        const double f_true = overlap(simulate(approx.optimized), stage.state);
        est_gap[fi].add(approx.f_est - f_true);
        lb_gap[fi].add(f_true - f_lb);
        if (approx.f_est <= f_true + 1e-12) ++est_below[fi];
      }
    }
    for (std::size_t fi = 0; fi < fmins.size(); ++fi)
      out << fmt(fmins[fi]) << "," << fmt(sparsities[point]) << "," << d << ","
          << fmt(est_gap[fi].mean()) << "," << fmt(est_gap[fi].min) << ","
          << fmt(est_gap[fi].max) << "," << fmt(lb_gap[fi].mean()) << "," << fmt(lb_gap[fi].min)
          << "," << fmt(lb_gap[fi].max) << ","
          << fmt(static_cast<double>(est_below[fi]) / config.repetitions) << "\n";
  }
  return out.str();
}

std::string run_approx_vs_exact(const ExperimentConfig& config) {
  std::ostringstream out;
  header(out, config, "F_min,D,d,mean_ratio,min_ratio,max_ratio");
  const auto sparsities = effective_sparsities(config, log_spaced(1e-5, 1e-3, 10));
  const auto fmins = effective_fmins(config, {0.90, 0.95, 0.99});
  for (std::size_t point = 0; point < sparsities.size(); ++point) {
    const std::uint64_t d = config.d ? *config.d : support_for_sparsity(config.n, sparsities[point]);
    std::vector<Aggregate> ratio(fmins.size());
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto stage = run_exact_stage(config.n, d, mix_seed(config.seed, point, rep));
      for (std::size_t fi = 0; fi < fmins.size(); ++fi) {
        ApproxOptimizer optimizer(stage.tree, stage.baseline,
                                  ApproxOptions{.intervals = config.intervals});
        const ApproxResult approx = optimizer.run_from(stage.exact.optimized, fmins[fi]);
        ratio[fi].add(stage.exact.cost.total_cnots == 0
                          ? 1.0
                          : static_cast<double>(approx.cost.total_cnots) /
                                static_cast<double>(stage.exact.cost.total_cnots));
      }
    }
    for (std::size_t fi = 0; fi < fmins.size(); ++fi)
      out << fmt(fmins[fi]) << "," << fmt(sparsities[point]) << "," << d << ","
          << fmt(ratio[fi].mean()) << "," << fmt(ratio[fi].min) << "," << fmt(ratio[fi].max)
          << "\n";
  }
  return out.str();
}

std::string run_m_sweep(const ExperimentConfig& config) {
  std::ostringstream out;
  header(out, config, "M,F_min,D,d,mean_ratio,min_ratio,max_ratio");
  const double sparsity = config.d
                              ? static_cast<double>(*config.d) / static_cast<double>(basis_count(config.n))
                              : config.sparsity.value_or(5e-5);
  const std::uint64_t d = config.d ? *config.d : support_for_sparsity(config.n, sparsity);
  const std::vector<int> intervals =
      config.interval_grid.empty() ? std::vector<int>{1, 2, 5, 10, 20, 40} : config.interval_grid;
  std::vector<Aggregate> ratio(intervals.size());
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const auto stage = run_exact_stage(config.n, d, mix_seed(config.seed, 0, rep));
    for (std::size_t mi = 0; mi < intervals.size(); ++mi) {
      ApproxOptimizer optimizer(stage.tree, stage.baseline,
                                ApproxOptions{.intervals = intervals[mi]});
      const ApproxResult approx = optimizer.run_from(stage.exact.optimized, config.f_min);
      ratio[mi].add(stage.exact.cost.total_cnots == 0
                        ? 1.0
                        : static_cast<double>(approx.cost.total_cnots) /
                              static_cast<double>(stage.exact.cost.total_cnots));
    }
  }
  for (std::size_t mi = 0; mi < intervals.size(); ++mi)
    out << intervals[mi] << "," << fmt(config.f_min) << "," << fmt(sparsity) << "," << d << ","
        << fmt(ratio[mi].mean()) << "," << fmt(ratio[mi].min) << "," << fmt(ratio[mi].max) << "\n";
  return out.str();
}

} // namespace

std::string run_experiment(const ExperimentConfig& config) {
  if (config.repetitions < 1)
    fail(ErrorCategory::invalid_argument, "repetitions must be at least 1");
  switch (config.id) {
    case ExperimentId::merge_ratio: return run_merge_ratio(config);
    case ExperimentId::cost_comparison: return run_cost_comparison(config);
    case ExperimentId::estimator_gap: return run_estimator_gap(config);
    case ExperimentId::approx_vs_exact: return run_approx_vs_exact(config);
    case ExperimentId::m_sweep: return run_m_sweep(config);
  }
  fail(ErrorCategory::invalid_argument, "unknown experiment");
}

} // namespace grsp
