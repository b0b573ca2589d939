#pragma once

#include <map>

#include "grsp/circuit.hpp"
#include "grsp/state.hpp"

namespace grsp {

/// Coarse state after the first `depth` layers: map from depth-bit prefix to
/// real amplitude. Norm is preserved layer by layer.
struct PrefixState {
  int depth = 0;
  std::map<basis_t, double> amplitudes;
};

/// Angle of the unique gate whose region contains `prefix`, or 0 if no gate
/// covers it. Throws region_overlap if two gates cover it.
double covering_angle(const GateLayer& layer, basis_t prefix);

/// Applies layers 0..depth-1 to the empty prefix with amplitude 1, mapping
/// each prefix b to b0 and b1 with factors cos(theta/2) and sin(theta/2).
/// Amplitudes below 1e-15 are dropped. Internally switches from a sparse
/// map to a dense array when the prefix set exceeds a quarter of 2^k.
PrefixState simulate_prefixes(const Circuit& circuit, int depth);

/// Full-depth simulation as a SparseState.
SparseState simulate(const Circuit& circuit);

/// Inner product over the common support; equals the square-root fidelity
/// for real nonnegative states. Throws dimension_mismatch on unequal n.
double overlap(const SparseState& a, const SparseState& b);

} // namespace grsp
