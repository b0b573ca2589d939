#pragma once

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "grsp/circuit.hpp"
#include "grsp/state.hpp"

namespace grsp {

/// Support of one tree level with both membership and region-intersection
/// queries. intersects() picks the cheaper of enumerating the region
/// (2^m members) or scanning the support (d members).
class LayerSupport {
public:
  LayerSupport() = default;
  LayerSupport(int depth, const std::map<basis_t, double>& level);

  int depth() const { return depth_; }
  std::size_t size() const { return sorted_.size(); }
  bool contains(basis_t prefix) const { return set_.count(prefix) != 0; }
  bool intersects(const ControlPattern& region) const;

private:
  int depth_ = 0;
  std::vector<basis_t> sorted_;
  std::unordered_set<basis_t> set_;
};

enum class MoveKind { strip, neighbor };

struct MergeEvent {
  int layer = 0;
  MoveKind kind = MoveKind::strip;
  std::vector<ControlPattern> before;
  ControlPattern after;
};

struct ExactResult {
  Circuit optimized;
  CostReport cost;
  std::vector<MergeEvent> log;
};

/// Caches support-emptiness answers per sibling region within a layer pass.
using UnreachabilityCache = std::unordered_map<ControlPattern, bool, ControlPatternHash>;

/// Sequential control stripping: scans positions left to right, strips a
/// control iff the flipped sibling region has empty support AND is disjoint
/// from every region in `blockers`; restarts after each accepted strip.
/// The angle never changes. Appends one event per accepted strip.
ControlPattern strip_controls_sequential(const ControlPattern& pattern,
                                         const LayerSupport& support,
                                         std::span<const ControlPattern> blockers,
                                         UnreachabilityCache* cache = nullptr,
                                         std::vector<MergeEvent>* log = nullptr,
                                         int layer = 0);

/// Merges same-angle gates (|dtheta| <= 1e-9) whose patterns share 'e'
/// positions and differ in exactly one concrete trit, iterated to fixpoint
/// in deterministic lexicographic scan order.
std::map<ControlPattern, double> merge_neighbors(const std::map<ControlPattern, double>& gates,
                                                 std::vector<MergeEvent>* log = nullptr,
                                                 int layer = 0);

GateLayer merge_neighbors(const GateLayer& layer, std::vector<MergeEvent>* log = nullptr);

/// Per layer: strip every active gate, merge equal-angle neighbors to
/// fixpoint, then take the cheaper of single rotations and the 2^k UCR.
/// The prepared state is unchanged.
ExactResult optimize_exact(const Circuit& start, const PreparationTree& tree);
ExactResult optimize_exact(const BaselineCircuit& baseline, const PreparationTree& tree);

} // namespace grsp
