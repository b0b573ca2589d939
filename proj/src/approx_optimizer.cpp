#include "grsp/approx_optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "grsp/errors.hpp"

namespace grsp {

namespace {

double positive_or_zero(double value) {
  // Closed-form losses can land a few ulp below zero.
  return value < 0.0 ? 0.0 : value;
}

} // namespace

double cluster_angle(double x_sum, double y_sum) {
  x_sum = positive_or_zero(x_sum);
  y_sum = positive_or_zero(y_sum);
  if (x_sum == 0.0 && y_sum == 0.0)
    fail(ErrorCategory::invalid_argument, "cluster angle undefined for X = Y = 0");
  return 2.0 * std::atan2(y_sum, x_sum);
}

double estimator_update(double f_est, double loss_a, double loss_b, double loss_c) {
  return f_est + loss_a + loss_b - loss_c;
}

std::vector<double> threshold_schedule(double f_min, int intervals) {
  if (!(f_min > 0.0) || f_min > 1.0)
    fail(ErrorCategory::invalid_argument, "minimum overlap must lie in (0, 1]");
  if (intervals < 1)
    fail(ErrorCategory::invalid_argument, "interval count must be at least 1");
  std::vector<double> schedule;
  schedule.reserve(static_cast<std::size_t>(intervals));
  for (int s = 1; s <= intervals; ++s) {
    // Clamp against rounding: no threshold may dip below f_min itself.
    schedule.push_back(std::max(1.0 - s * (1.0 - f_min) / intervals, f_min));
  }
  return schedule;
}

Cluster::Cluster(int layer, std::vector<ClusterSource> sources, double theta)
    : layer_(layer), sources_(std::move(sources)) {
  if (sources_.empty())
    fail(ErrorCategory::invalid_argument, "cluster requires at least one positive-weight source");
  for (const auto& source : sources_) {
    prob_sum_ += source.prob;
    x_sum_ += source.prob * std::cos(source.theta / 2.0);
    y_sum_ += source.prob * std::sin(source.theta / 2.0);
  }
  set_angle(theta);
}

void Cluster::set_angle(double theta) {
  theta_ = theta;
  loss_ = positive_or_zero(prob_sum_ - (x_sum_ * std::cos(theta / 2.0) +
                                        y_sum_ * std::sin(theta / 2.0)));
}

double Cluster::recompute_loss() const {
  double loss = 0.0;
  for (const auto& source : sources_)
    loss += (1.0 - std::cos((source.theta - theta_) / 2.0)) * source.prob;
  return loss;
}

Cluster merge_clusters(const Cluster& a, const Cluster& b) {
  if (a.layer_ != b.layer_)
    fail(ErrorCategory::invalid_argument, "cannot merge clusters across layers");
  Cluster merged;
  merged.layer_ = a.layer_;
  merged.sources_.reserve(a.sources_.size() + b.sources_.size());
  merged.sources_.insert(merged.sources_.end(), a.sources_.begin(), a.sources_.end());
  merged.sources_.insert(merged.sources_.end(), b.sources_.begin(), b.sources_.end());
  merged.prob_sum_ = a.prob_sum_ + b.prob_sum_;
  merged.x_sum_ = a.x_sum_ + b.x_sum_;
  merged.y_sum_ = a.y_sum_ + b.y_sum_;
  merged.set_angle(cluster_angle(merged.x_sum_, merged.y_sum_));
  return merged;
}

Cluster strip_extend(const Cluster& a, const std::vector<ClusterSource>& absorbed) {
  Cluster extended = a;
  for (const auto& source : absorbed) {
    if (source.prob <= 0.0) continue; // zero-weight regions stay implicit
    extended.sources_.push_back(source);
    extended.prob_sum_ += source.prob;
    extended.x_sum_ += source.prob * std::cos(source.theta / 2.0);
    extended.y_sum_ += source.prob * std::sin(source.theta / 2.0);
  }
  extended.set_angle(cluster_angle(extended.x_sum_, extended.y_sum_));
  return extended;
}

ApproxOptimizer::ApproxOptimizer(const PreparationTree& tree, const BaselineCircuit& baseline,
                                 ApproxOptions options)
    : tree_(&tree), baseline_(&baseline), options_(options), n_(baseline.n) {
  if (options_.only_layer && (*options_.only_layer < 0 || *options_.only_layer >= n_))
    fail(ErrorCategory::invalid_argument, "restricted layer out of range");
  if (options_.intervals < 1)
    fail(ErrorCategory::invalid_argument, "interval count must be at least 1");
}

void ApproxOptimizer::adopt(const Circuit& active) {
  if (active.n != n_)
    fail(ErrorCategory::dimension_mismatch, "active circuit qubit count differs from baseline");
  layers_.assign(static_cast<std::size_t>(n_), {});
  accepted_.clear();
  cache_valid_ = false;
  double total_loss = 0.0;

  for (int k = 0; k < n_; ++k) {
    auto& state = layers_[static_cast<std::size_t>(k)];
    const auto& gates = active.layers[static_cast<std::size_t>(k)].gates();

    std::unordered_map<basis_t, const ControlPattern*> concrete;
    std::vector<const ControlPattern*> wild;
    std::map<ControlPattern, std::vector<ClusterSource>> sources;
    for (const auto& [pattern, theta] : gates) {
      (void)theta;
      sources.emplace(pattern, std::vector<ClusterSource>{});
      if (pattern.is_concrete())
        concrete.emplace(pattern.value(), &pattern);
      else
        wild.push_back(&pattern);
    }

    const auto& angles = baseline_->layer(k);
    for (const auto& [prefix, amplitude] : tree_->level(k)) {
      const double prob = amplitude * amplitude;
      auto angle_it = angles.find(prefix);
      if (angle_it == angles.end())
        fail(ErrorCategory::internal, "baseline misses a supported prefix");
      const double theta = angle_it->second;

      const ControlPattern* cover = nullptr;
      if (auto it = concrete.find(prefix); it != concrete.end()) cover = it->second;
      for (const auto* pattern : wild)
        if (pattern->matches(prefix)) cover = pattern;
      if (cover != nullptr) {
        sources[*cover].push_back({ControlPattern::concrete(k, prefix), theta, prob});
      } else if (!is_active_angle(theta)) {
        state.uncovered.emplace(prefix, prob);
      } else {
        fail(ErrorCategory::invalid_argument,
             "active circuit leaves supported rotation at prefix " +
                 to_bit_string(prefix, k) + " (layer " + std::to_string(k) + ") uncovered");
      }
    }

    for (const auto& [pattern, theta] : gates) {
      Cluster cluster(k, std::move(sources[pattern]), theta);
      total_loss += cluster.loss();
      state.active.emplace(pattern, std::move(cluster));
    }
  }
  f_est_ = 1.0 - total_loss;
}

std::vector<Candidate> ApproxOptimizer::generate_candidates() const {
  std::vector<Candidate> candidates;
  for (int k = 0; k < n_; ++k) {
    if (options_.only_layer && *options_.only_layer != k) continue;
    const auto& state = layers_[static_cast<std::size_t>(k)];
    const auto& active = state.active;
    if (active.empty()) continue;

    std::vector<const ControlPattern*> patterns;
    std::vector<const Cluster*> clusters;
    patterns.reserve(active.size());
    for (const auto& [pattern, cluster] : active) {
      patterns.push_back(&pattern);
      clusters.push_back(&cluster);
    }
    const std::size_t count = patterns.size();

    // Neighbor merges: identical 'e' positions, one differing concrete trit.
    for (std::size_t i = 0; i < count; ++i) {
      const ControlPattern& p = *patterns[i];
      const Cluster& a = *clusters[i];
      for (int t = 0; t < k; ++t) {
        if (!p.has_control_at(t)) continue;
        const ControlPattern q = p.flip(t);
        if (!(p < q)) continue; // count each pair once
        auto it = active.find(q);
        if (it == active.end()) continue;
        const Cluster& b = it->second;
        const double prob = a.prob_sum() + b.prob_sum();
        const double x = a.x_sum() + b.x_sum();
        const double y = a.y_sum() + b.y_sum();
        const double theta = cluster_angle(x, y);
        const double loss = positive_or_zero(prob - std::hypot(x, y));
        Candidate cand;
        cand.layer = k;
        cand.kind = MoveKind::neighbor;
        cand.source_a = p;
        cand.source_b = q;
        cand.result = p.strip(t);
        cand.theta = theta;
        cand.estimate = estimator_update(f_est_, a.loss(), b.loss(), loss);
        candidates.push_back(std::move(cand));
      }
    }

    // Positions whose sibling region hits another active gate's region:
    // for disjoint regions the masked disagreement word is nonzero, and the
    // flipped sibling of gate i at bit b touches gate j exactly when the
    // disagreement word is the single bit b.
    std::vector<basis_t> blocked(count, 0);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        const basis_t disagree = (patterns[i]->value() ^ patterns[j]->value()) &
                                 (patterns[i]->mask() & patterns[j]->mask());
        if (std::popcount(disagree) == 1) {
          blocked[i] |= disagree;
          blocked[j] |= disagree;
        }
      }

    // Absorbable baseline weight per (gate, strippable position).
    std::vector<std::vector<double>> absorbed(count);
    for (std::size_t i = 0; i < count; ++i) absorbed[i].assign(static_cast<std::size_t>(k), 0.0);
    for (const auto& [prefix, prob] : state.uncovered)
      for (std::size_t i = 0; i < count; ++i) {
        const basis_t disagree = (patterns[i]->value() ^ prefix) & patterns[i]->mask();
        if (std::popcount(disagree) == 1)
          absorbed[i][static_cast<std::size_t>(std::countr_zero(disagree))] += prob;
      }

    // Control stripping: enlarged region must contain active gates' regions
    // nowhere; absorbed zero-angle supported entries are permitted.
    for (std::size_t i = 0; i < count; ++i) {
      const ControlPattern& p = *patterns[i];
      const Cluster& a = *clusters[i];
      for (int t = 0; t < k; ++t) {
        if (!p.has_control_at(t)) continue;
        const int bit = k - 1 - t;
        if ((blocked[i] >> bit) & 1) continue;
        const double weight = absorbed[i][static_cast<std::size_t>(bit)];
        const double prob = a.prob_sum() + weight;
        const double x = a.x_sum() + weight; // absorbed entries sit at angle ~0
        const double y = a.y_sum();
        const double theta = cluster_angle(x, y);
        const double loss = positive_or_zero(prob - std::hypot(x, y));
        Candidate cand;
        cand.layer = k;
        cand.kind = MoveKind::strip;
        cand.source_a = p;
        cand.strip_position = t;
        cand.result = p.strip(t);
        cand.theta = theta;
        cand.estimate = estimator_update(f_est_, a.loss(), 0.0, loss);
        cand.absorbed_prob = weight;
        candidates.push_back(std::move(cand));
      }
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    const std::string ta = a.result.trits();
    const std::string tb = b.result.trits();
    if (ta != tb) return ta < tb;
    return a.layer < b.layer;
  });
  return candidates;
}

void ApproxOptimizer::apply_neighbor(const Candidate& cand, const Cluster& merged) {
  auto& state = layers_[static_cast<std::size_t>(cand.layer)];
  const double loss_a = state.active.at(cand.source_a).loss();
  const double loss_b = state.active.at(cand.source_b).loss();
  f_est_ = estimator_update(f_est_, loss_a, loss_b, merged.loss());
  state.active.erase(cand.source_a);
  state.active.erase(cand.source_b);
  state.active.emplace(cand.result, merged);
  // The merged region is the union of the two old ones: no new territory.
  accepted_.push_back({cand, f_est_});
}

void ApproxOptimizer::apply_strip(const Candidate& cand, const Cluster& extended) {
  auto& state = layers_[static_cast<std::size_t>(cand.layer)];
  const double loss_a = state.active.at(cand.source_a).loss();
  f_est_ = estimator_update(f_est_, loss_a, 0.0, extended.loss());
  state.active.erase(cand.source_a);
  state.active.emplace(cand.result, extended);
  pass_added_regions_[static_cast<std::size_t>(cand.layer)].push_back(cand.result);
  accepted_.push_back({cand, f_est_});
}

int ApproxOptimizer::greedy_pass(double threshold) {
  if (!cache_valid_) {
    cached_candidates_ = generate_candidates();
    cache_valid_ = true;
  }
  pass_added_regions_.assign(static_cast<std::size_t>(n_), {});
  pass_removed_uncovered_.assign(static_cast<std::size_t>(n_), {});

  int accepted_count = 0;
  for (const Candidate& cand : cached_candidates_) {
    auto& state = layers_[static_cast<std::size_t>(cand.layer)];

    if (cand.kind == MoveKind::neighbor) {
      auto it_a = state.active.find(cand.source_a);
      auto it_b = state.active.find(cand.source_b);
      if (it_a == state.active.end() || it_b == state.active.end()) continue; // stale
      Cluster merged = merge_clusters(it_a->second, it_b->second);
      const double estimate =
          estimator_update(f_est_, it_a->second.loss(), it_b->second.loss(), merged.loss());
      if (estimate < threshold) continue;
      Candidate applied = cand;
      applied.theta = merged.angle();
      applied.estimate = estimate;
      apply_neighbor(applied, merged);
      ++accepted_count;
    } else {
      auto it_a = state.active.find(cand.source_a);
      if (it_a == state.active.end()) continue; // stale
      const Cluster& a = it_a->second;
      const ControlPattern sibling = cand.source_a.flip(cand.strip_position);

      // Regions that grew during this pass may block the move now.
      bool blocked = false;
      for (const auto& region : pass_added_regions_[static_cast<std::size_t>(cand.layer)])
        if (sibling.overlaps(region)) {
          blocked = true;
          break;
        }
      if (blocked) continue;

      // Current absorbable weight: generation-time weight minus entries
      // absorbed by earlier accepts in this pass.
      double weight = cand.absorbed_prob;
      for (const auto& [prefix, prob] : pass_removed_uncovered_[static_cast<std::size_t>(cand.layer)])
        if (sibling.matches(prefix)) weight -= prob;
      {
        const double prob = a.prob_sum() + weight;
        const double x = a.x_sum() + weight;
        const double quick = estimator_update(
            f_est_, a.loss(), 0.0, positive_or_zero(prob - std::hypot(x, a.y_sum())));
        if (quick < threshold - 1e-9) continue;
      }

      std::vector<ClusterSource> absorbed;
      const auto& angles = baseline_->layer(cand.layer);
      for (const auto& [prefix, prob] : state.uncovered)
        if (sibling.matches(prefix)) {
          auto angle_it = angles.find(prefix);
          absorbed.push_back({ControlPattern::concrete(cand.layer, prefix),
                              angle_it == angles.end() ? 0.0 : angle_it->second, prob});
        }
      Cluster extended = strip_extend(a, absorbed);
      const double estimate = estimator_update(f_est_, a.loss(), 0.0, extended.loss());
      if (estimate < threshold) continue;

      Candidate applied = cand;
      applied.theta = extended.angle();
      applied.estimate = estimate;
      applied.absorbed_prob = weight;
      apply_strip(applied, extended);
      for (const auto& source : absorbed) {
        state.uncovered.erase(source.pattern.value());
        pass_removed_uncovered_[static_cast<std::size_t>(cand.layer)].emplace_back(
            source.pattern.value(), source.prob);
      }
      ++accepted_count;
    }

    if (options_.verify_each_accept) verify_consistency();
  }

  if (accepted_count > 0) cache_valid_ = false;
  return accepted_count;
}

ApproxResult ApproxOptimizer::run_from(const Circuit& exact_circuit, double f_min) {
  const auto schedule = threshold_schedule(f_min, options_.intervals);
  adopt(exact_circuit);
  for (double threshold : schedule) greedy_pass(threshold);
  while (greedy_pass(f_min) > 0) {
  }

  ApproxResult result;
  result.optimized = current_circuit();
  result.clusters.reserve(layers_.size());
  for (const auto& state : layers_) result.clusters.push_back(state.active);
  result.f_est = f_est_;
  result.cost = circuit_cost(result.optimized);
  result.accepted = accepted_;
  return result;
}

double ApproxOptimizer::recompute_estimator() const {
  double total_loss = 0.0;
  for (const auto& state : layers_)
    for (const auto& [pattern, cluster] : state.active) {
      (void)pattern;
      total_loss += cluster.recompute_loss();
    }
  return 1.0 - total_loss;
}

const std::map<ControlPattern, Cluster>& ApproxOptimizer::layer_clusters(int k) const {
  if (k < 0 || k >= n_) fail(ErrorCategory::index_out_of_range, "layer out of range");
  return layers_[static_cast<std::size_t>(k)].active;
}

Circuit ApproxOptimizer::current_circuit() const {
  Circuit circuit(n_);
  for (int k = 0; k < n_; ++k)
    for (const auto& [pattern, cluster] : layers_[static_cast<std::size_t>(k)].active)
      circuit.layers[static_cast<std::size_t>(k)].insert_gate(pattern, cluster.angle());
  return circuit;
}

void ApproxOptimizer::verify_consistency() const {
  const double recomputed = recompute_estimator();
  if (std::abs(recomputed - f_est_) > 1e-10)
    fail(ErrorCategory::internal, "estimator drifted from cluster losses by " +
                                      std::to_string(std::abs(recomputed - f_est_)));
  for (const auto& state : layers_)
    for (const auto& [pattern, cluster] : state.active) {
      (void)pattern;
      if (cluster.sources().empty() || (cluster.x_sum() == 0.0 && cluster.y_sum() == 0.0) ||
          cluster.loss() < 0.0 || cluster.angle() < 0.0 ||
          std::abs(cluster.loss() - cluster.recompute_loss()) > 1e-12)
        fail(ErrorCategory::internal, "cluster invariant violated");
    }
}

ApproxResult optimize_approx(const BaselineCircuit& baseline, const PreparationTree& tree,
                             double f_min, int intervals, ApproxOptions options) {
  options.intervals = intervals;
  // Validates f_min / intervals before any work.
  (void)threshold_schedule(f_min, intervals);
  ExactResult exact = optimize_exact(baseline, tree);
  ApproxOptimizer optimizer(tree, baseline, options);
  return optimizer.run_from(exact.optimized, f_min);
}

} // namespace grsp
