#pragma once

#include <cstdint>

#include "grsp/state.hpp"

namespace grsp {

/// Deterministic, platform-independent generator (splitmix64 stream).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform on (0, 1].
  double unit_positive();

private:
  std::uint64_t state_;
};

/// Stateless seed derivation for (point, repetition) grids.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// d distinct support indices drawn uniformly without replacement,
/// amplitudes i.i.d. uniform on (0, 1], then normalized. Deterministic in
/// (n, d, seed). Throws when d is outside [1, 2^n].
SparseState random_instance(int n, std::uint64_t d, std::uint64_t seed);

} // namespace grsp
