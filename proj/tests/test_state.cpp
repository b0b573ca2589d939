#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grsp/circuit.hpp"
#include "grsp/errors.hpp"
#include "grsp/random_instance.hpp"
#include "grsp/simulator.hpp"
#include "grsp/state.hpp"

using namespace grsp;
using std::numbers::pi;

namespace {

// The three-leaf example state: amplitudes a,b,c on |001>, |011>, |100>.
SparseState example_state() {
  return normalize_and_validate(3, {{0b001, 1.0}, {0b011, 1.0}, {0b100, 1.0}});
}

// Oracle for coarse amplitudes: direct sum of squared leaf amplitudes.
double coarse_oracle(const SparseState& state, int k, basis_t prefix) {
  double sum = 0.0;
  for (const auto& [index, amplitude] : state.entries)
    if ((index >> (state.n - k)) == prefix) sum += amplitude * amplitude;
  return std::sqrt(sum);
}

} // namespace

TEST_CASE("normalize_and_validate") {
  const auto equal = example_state();
  CHECK(equal.support_size() == 3);
  for (const auto& [index, amplitude] : equal.entries)
    CHECK(amplitude == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

  const auto already = normalize_and_validate(1, {{0, 0.6}, {1, 0.8}});
  CHECK(already.amplitude(0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(already.amplitude(1) == doctest::Approx(0.8).epsilon(1e-15));

  const auto dropped = normalize_and_validate(2, {{0, 2.0}, {2, 0.0}});
  CHECK(dropped.support_size() == 1);
  CHECK(dropped.amplitude(0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(normalize_and_validate(2, {{1, 1.0}, {1, 0.5}}), Error);
  CHECK_THROWS_AS(normalize_and_validate(2, {{1, -0.5}}), Error);
  CHECK_THROWS_AS(normalize_and_validate(2, {{1, 0.0}}), Error);
  CHECK_THROWS_AS(normalize_and_validate(2, {{4, 1.0}}), Error);
}

TEST_CASE("preparation tree for the example state") {
  const auto state = example_state();
  const auto tree = build_preparation_tree(state);

  CHECK(tree.amplitude(1, 0b0) == doctest::Approx(0.81650).epsilon(1e-4));
  CHECK(tree.amplitude(1, 0b1) == doctest::Approx(0.57735).epsilon(1e-4));
  CHECK(tree.amplitude(2, 0b00) == doctest::Approx(0.57735).epsilon(1e-4));
  CHECK(tree.amplitude(2, 0b01) == doctest::Approx(0.57735).epsilon(1e-4));
  CHECK(tree.amplitude(2, 0b10) == doctest::Approx(0.57735).epsilon(1e-4));
  CHECK(tree.level(2).size() == 3);
  CHECK(tree.amplitude(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  for (int k = 0; k <= tree.n; ++k)
    for (const auto& [prefix, amplitude] : tree.level(k))
      CHECK(amplitude == doctest::Approx(coarse_oracle(state, k, prefix)).epsilon(1e-12));
}

TEST_CASE("preparation tree degenerate shapes") {
  const auto single = normalize_and_validate(3, {{0b101, 2.5}});
  const auto tree = build_preparation_tree(single);
  for (int k = 0; k <= 3; ++k) {
    CHECK(tree.level(k).size() == 1);
    CHECK(tree.level(k).begin()->second == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(tree.level(1).begin()->first == 0b1);
  CHECK(tree.level(2).begin()->first == 0b10);
  CHECK(tree.level(3).begin()->first == 0b101);

  const auto uniform = normalize_and_validate(2, {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}});
  const auto utree = build_preparation_tree(uniform);
  CHECK(utree.amplitude(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(utree.amplitude(1, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("tree invariants on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto state = random_instance(8, 1 + seed * 3, seed);
    const auto tree = build_preparation_tree(state);
    for (int k = 0; k < 8; ++k) {
      double level_norm = 0.0;
      for (const auto& [prefix, amplitude] : tree.level(k)) {
        const auto& children = tree.level(k + 1);
        auto c0 = children.find(prefix << 1);
        auto c1 = children.find((prefix << 1) | 1);
        const double a0 = c0 == children.end() ? 0.0 : c0->second;
        const double a1 = c1 == children.end() ? 0.0 : c1->second;
        CHECK(amplitude * amplitude == doctest::Approx(a0 * a0 + a1 * a1).epsilon(1e-12));
        level_norm += amplitude * amplitude;
      }
      CHECK(level_norm == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(tree.level(k).size() <= std::min<std::size_t>(state.support_size(), basis_count(k)));
    }
  }
}

TEST_CASE("baseline angles for the example state") {
  const auto tree = build_preparation_tree(example_state());
  const auto baseline = compute_baseline_angles(tree);

  CHECK(baseline.layer(0).at(0) == doctest::Approx(1.23096).epsilon(1e-5));
  CHECK(baseline.layer(1).at(0b0) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(baseline.layer(1).at(0b1) == doctest::Approx(0.0));
  CHECK(baseline.layer(2).at(0b00) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(baseline.layer(2).at(0b01) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(baseline.layer(2).at(0b10) == doctest::Approx(0.0));

  // single basis state |11>
  const auto tree11 = build_preparation_tree(normalize_and_validate(2, {{0b11, 1.0}}));
  const auto base11 = compute_baseline_angles(tree11);
  CHECK(base11.layer(0).at(0) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(base11.layer(1).at(1) == doctest::Approx(pi).epsilon(1e-12));

  // uniform state: every angle pi/2
  std::vector<std::pair<basis_t, double>> raw;
  for (basis_t i = 0; i < 8; ++i) raw.emplace_back(i, 1.0);
  const auto uni = compute_baseline_angles(build_preparation_tree(normalize_and_validate(3, raw)));
  for (int k = 0; k < 3; ++k)
    for (const auto& [prefix, theta] : uni.layer(k))
      CHECK(theta == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("baseline round-trips through the simulator") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 4 + static_cast<int>(seed % 9);
    const auto state = random_instance(n, 1 + (seed * 7) % 40, seed * 13);
    const auto baseline = compute_baseline_angles(build_preparation_tree(state));
    CHECK(overlap(simulate(to_circuit(baseline)), state) >= 1.0 - 1e-10);
  }
}

TEST_CASE("prefix probability") {
  const auto tree = build_preparation_tree(example_state());
  CHECK(prefix_probability(tree, ControlPattern::from_trits("0e")) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(prefix_probability(tree, ControlPattern()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prefix_probability(tree, ControlPattern::from_trits("11")) == 0.0);
}

TEST_CASE("prefix probability equals the product of branch factors") {
  for (std::uint64_t seed = 2; seed <= 12; ++seed) {
    const auto state = random_instance(7, 1 + seed * 2, seed);
    const auto tree = build_preparation_tree(state);
    const auto baseline = compute_baseline_angles(tree);
    for (const auto& [prefix, amplitude] : tree.level(4)) {
      (void)amplitude;
      double product = 1.0;
      for (int l = 1; l <= 4; ++l) {
        const basis_t ancestor = prefix >> (4 - (l - 1));
        const int bit = static_cast<int>((prefix >> (4 - l)) & 1);
        const double theta = baseline.layer(l - 1).at(ancestor);
        const double c = std::cos(theta / 2.0);
        const double s = std::sin(theta / 2.0);
        product *= bit == 0 ? c * c : s * s;
      }
      CHECK(prefix_probability(tree, ControlPattern::concrete(4, prefix)) ==
            doctest::Approx(product).epsilon(1e-10));
    }
  }
}

TEST_CASE("state text and JSON round trips") {
  const auto state = example_state();
  const auto from_text = parse_state(to_text(state));
  CHECK(from_text.n == state.n);
  REQUIRE(from_text.support_size() == state.support_size());
  for (const auto& [index, amplitude] : state.entries)
    CHECK(from_text.amplitude(index) == doctest::Approx(amplitude).epsilon(1e-15));

  const auto from_json = parse_state(to_json_text(state));
  CHECK(from_json.entries == state.entries);

  CHECK_THROWS_AS(parse_state("no header\n"), Error);
  CHECK_THROWS_AS(parse_state("n=2\n01 0.5 junk extra\n0 1"), Error);
  CHECK_THROWS_AS(parse_state("n=2\n012 0.5\n"), Error);
  CHECK_THROWS_AS(parse_state("{\"n\": 2}"), Error);
}
