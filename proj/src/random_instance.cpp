#include "grsp/random_instance.hpp"

#include <set>
#include <utility>
#include <vector>

#include "grsp/errors.hpp"

namespace grsp {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ull;
  return splitmix64(state_);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCategory::invalid_argument, "bound must be nonzero");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  std::uint64_t draw = next();
  while (draw > limit) draw = next();
  return draw % bound;
}

double Rng::unit_positive() {
  const double below_one = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return 1.0 - below_one;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(master ^ splitmix64(a + 0x9e3779b97f4a7c15ull) ^
                    splitmix64(splitmix64(b + 0x2545f4914f6cdd1dull)));
}

SparseState random_instance(int n, std::uint64_t d, std::uint64_t seed) {
  if (n < 1 || n > 62)
    fail(ErrorCategory::invalid_argument, "qubit count must be in [1, 62]");
  const basis_t total = basis_count(n);
  if (d < 1 || d > total)
    fail(ErrorCategory::invalid_argument,
         "support size must lie in [1, 2^n], got " + std::to_string(d));

  Rng rng(seed);
  // Floyd's sampling: d distinct indices, uniformly without replacement.
  std::set<basis_t> indices;
  for (basis_t j = total - d; j < total; ++j) {
    const basis_t draw = rng.below(j + 1);
    if (!indices.insert(draw).second) indices.insert(j);
  }

  std::vector<std::pair<basis_t, double>> raw;
  raw.reserve(indices.size());
  for (basis_t index : indices) raw.emplace_back(index, rng.unit_positive());
  return normalize_and_validate(n, raw);
}

} // namespace grsp
