#include "grsp/exact_optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "grsp/errors.hpp"

namespace grsp {

namespace {

constexpr double kEqualAngleTol = 1e-9; // exact merges must tolerate arccos rounding

std::vector<int> free_bits(const ControlPattern& pattern) {
  std::vector<int> bits;
  for (int b = 0; b < pattern.length(); ++b)
    if (!((pattern.mask() >> b) & 1)) bits.push_back(b);
  return bits;
}

} // namespace

LayerSupport::LayerSupport(int depth, const std::map<basis_t, double>& level) : depth_(depth) {
  sorted_.reserve(level.size());
  for (const auto& [prefix, amplitude] : level) {
    (void)amplitude;
    sorted_.push_back(prefix);
    set_.insert(prefix);
  }
}

bool LayerSupport::intersects(const ControlPattern& region) const {
  const int m = region.free_count();
  if (m < 63 && (basis_t{1} << m) <= sorted_.size()) {
    const auto bits = free_bits(region);
    for (basis_t i = 0; i < (basis_t{1} << m); ++i) {
      basis_t member = region.value();
      for (int j = 0; j < m; ++j)
        if ((i >> j) & 1) member |= basis_t{1} << bits[static_cast<std::size_t>(j)];
      if (set_.count(member)) return true;
    }
    return false;
  }
  for (basis_t prefix : sorted_)
    if (region.matches(prefix)) return true;
  return false;
}

ControlPattern strip_controls_sequential(const ControlPattern& pattern,
                                         const LayerSupport& support,
                                         std::span<const ControlPattern> blockers,
                                         UnreachabilityCache* cache,
                                         std::vector<MergeEvent>* log, int layer) {
  auto region_unreachable = [&](const ControlPattern& sibling) {
    if (cache) {
      auto it = cache->find(sibling);
      if (it != cache->end()) return it->second;
    }
    const bool unreachable = !support.intersects(sibling);
    if (cache) cache->emplace(sibling, unreachable);
    return unreachable;
  };

  ControlPattern current = pattern;
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (int t = 0; t < current.length(); ++t) {
      if (!current.has_control_at(t)) continue;
      const ControlPattern sibling = current.flip(t);
      if (!region_unreachable(sibling)) continue;
      // The enlarged region must not run into another gate's region.
      bool blocked = false;
      for (const auto& other : blockers)
        if (sibling.overlaps(other)) {
          blocked = true;
          break;
        }
      if (blocked) continue;
      if (log) log->push_back({layer, MoveKind::strip, {current}, current.strip(t)});
      current = current.strip(t);
      stripped = true;
      break; // restart the scan on the new pattern
    }
  }
  return current;
}

std::map<ControlPattern, double> merge_neighbors(const std::map<ControlPattern, double>& gates,
                                                 std::vector<MergeEvent>* log, int layer) {
  std::map<ControlPattern, double> current = gates;
  bool merged_any = true;
  while (merged_any) {
    merged_any = false;
    // Snapshot in lexicographic order; merges apply immediately, gates
    // created mid-pass are picked up by the next pass.
    std::vector<ControlPattern> scan;
    scan.reserve(current.size());
    for (const auto& [pattern, theta] : current) {
      (void)theta;
      scan.push_back(pattern);
    }
    for (const auto& pattern : scan) {
      auto it = current.find(pattern);
      if (it == current.end()) continue;
      for (int t = 0; t < pattern.length(); ++t) {
        if (!pattern.has_control_at(t)) continue;
        auto sibling = current.find(pattern.flip(t));
        if (sibling == current.end()) continue;
        if (std::abs(it->second - sibling->second) > kEqualAngleTol) continue;
        // Keep the angle of the lexicographically smaller pattern.
        const double theta = pattern < sibling->first ? it->second : sibling->second;
        const ControlPattern merged = pattern.strip(t);
        if (log) log->push_back({layer, MoveKind::neighbor, {pattern, sibling->first}, merged});
        current.erase(sibling);
        current.erase(pattern);
        current.emplace(merged, theta);
        merged_any = true;
        break;
      }
    }
  }
  return current;
}

GateLayer merge_neighbors(const GateLayer& layer, std::vector<MergeEvent>* log) {
  auto merged = merge_neighbors(layer.gates(), log, layer.depth());
  GateLayer out(layer.depth());
  for (const auto& [pattern, theta] : merged) out.insert_gate(pattern, theta);
  return out;
}

ExactResult optimize_exact(const Circuit& start, const PreparationTree& tree) {
  ExactResult result;
  result.optimized = Circuit(start.n);
  for (int k = 0; k < start.n; ++k) {
    const auto& gates = start.layers[static_cast<std::size_t>(k)].gates();
    LayerSupport support(k, tree.level(k));
    UnreachabilityCache cache;

    // Step 1: sequential stripping, gates in pattern order. Regions of the
    // other gates in their current shape block an otherwise legal strip; the
    // gate under work is rotated to the back so the span excludes it.
    std::vector<ControlPattern> regions;
    std::vector<double> angles;
    regions.reserve(gates.size());
    angles.reserve(gates.size());
    for (const auto& [pattern, theta] : gates) {
      regions.push_back(pattern);
      angles.push_back(theta);
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
      std::swap(regions[i], regions.back());
      const ControlPattern stripped = strip_controls_sequential(
          regions.back(), support, {regions.data(), regions.size() - 1}, &cache, &result.log, k);
      regions.back() = stripped;
      std::swap(regions[i], regions.back());
    }

    // Step 2: equal-angle neighbor merges to fixpoint.
    std::map<ControlPattern, double> stripped;
    for (std::size_t i = 0; i < regions.size(); ++i) stripped.emplace(regions[i], angles[i]);
    auto merged = merge_neighbors(stripped, &result.log, k);

    auto& layer = result.optimized.layers[static_cast<std::size_t>(k)];
    for (const auto& [pattern, theta] : merged) layer.insert_gate(pattern, theta);
  }
  // Step 3: per-layer singles-vs-UCR decision.
  result.cost = circuit_cost(result.optimized);
  return result;
}

ExactResult optimize_exact(const BaselineCircuit& baseline, const PreparationTree& tree) {
  return optimize_exact(to_circuit(baseline), tree);
}

} // namespace grsp
