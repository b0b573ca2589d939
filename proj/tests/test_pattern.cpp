#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "grsp/errors.hpp"
#include "grsp/pattern.hpp"
#include "grsp/random_instance.hpp"

using namespace grsp;

namespace {

// Independent oracle: enumerate B(x) by brute force over all k-bit strings.
std::set<basis_t> enumerate_region(const ControlPattern& pattern) {
  std::set<basis_t> region;
  for (basis_t b = 0; b < basis_count(pattern.length()); ++b) {
    bool consistent = true;
    const std::string trits = pattern.trits();
    for (int pos = 0; pos < pattern.length(); ++pos) {
      const char t = trits[static_cast<std::size_t>(pos)];
      const int bit = static_cast<int>((b >> (pattern.length() - 1 - pos)) & 1);
      if (t != 'e' && t - '0' != bit) consistent = false;
    }
    if (consistent) region.insert(b);
  }
  return region;
}

ControlPattern random_pattern(Rng& rng, int length) {
  std::string trits;
  for (int i = 0; i < length; ++i) trits += "01e"[rng.below(3)];
  return ControlPattern::from_trits(trits);
}

} // namespace

TEST_CASE("pattern membership matches the region definition") {
  const auto p0e = ControlPattern::from_trits("0e");
  CHECK(matches(p0e, "01"));
  CHECK(matches(p0e, "00"));
  CHECK_FALSE(matches(p0e, "11"));
  CHECK_FALSE(matches(p0e, "10"));

  const auto all_free = ControlPattern::from_trits("ee");
  for (basis_t b = 0; b < 4; ++b) CHECK(all_free.matches(b));
  CHECK(all_free.region_size() == 4);

  CHECK_THROWS_AS(matches(p0e, "011"), Error);
}

TEST_CASE("strip and flip") {
  const auto p01 = ControlPattern::from_trits("01");
  CHECK(p01.strip(0).trits() == "e1");
  CHECK(p01.flip(0).trits() == "11");
  CHECK(ControlPattern::from_trits("110").strip(2).trits() == "11e");

  CHECK_THROWS_AS(ControlPattern::from_trits("e1").strip(0), Error);
  CHECK_THROWS_AS(ControlPattern::from_trits("e1").flip(0), Error);

  // B(e1) = B(01) ∪ B(11)
  const auto stripped = p01.strip(0);
  CHECK(enumerate_region(stripped) == std::set<basis_t>{0b01, 0b11});
}

TEST_CASE("strip splits a region into pattern plus flipped sibling") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int length = 1 + static_cast<int>(rng.below(8));
    auto pattern = random_pattern(rng, length);
    std::vector<int> controlled;
    for (int t = 0; t < length; ++t)
      if (pattern.has_control_at(t)) controlled.push_back(t);
    if (controlled.empty()) continue;
    const int t = controlled[rng.below(controlled.size())];

    const auto whole = enumerate_region(pattern.strip(t));
    std::set<basis_t> glued = enumerate_region(pattern);
    for (basis_t b : enumerate_region(pattern.flip(t))) glued.insert(b);
    CHECK(whole == glued);
    CHECK(pattern.strip(t).region_size() == 2 * pattern.region_size());
  }
}

TEST_CASE("region size is 2^m and overlap agrees with enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int length = 1 + static_cast<int>(rng.below(6));
    const auto a = random_pattern(rng, length);
    const auto b = random_pattern(rng, length);
    CHECK(a.region_size() == enumerate_region(a).size());
    const auto ra = enumerate_region(a);
    const auto rb = enumerate_region(b);
    const bool intersects = std::any_of(ra.begin(), ra.end(),
                                        [&](basis_t x) { return rb.count(x) != 0; });
    CHECK(a.overlaps(b) == intersects);
  }
}

TEST_CASE("trit parsing round-trips and rejects junk") {
  for (const char* text : {"", "0", "1", "e", "01e", "ee011", "10101"}) {
    CHECK(ControlPattern::from_trits(text).trits() == text);
  }
  CHECK_THROWS_AS(ControlPattern::from_trits("01x"), Error);
  CHECK_THROWS_AS(ControlPattern::from_trits("2"), Error);
}

TEST_CASE("ordering sorts e after 1 after 0") {
  std::vector<ControlPattern> patterns = {
      ControlPattern::from_trits("e0"), ControlPattern::from_trits("00"),
      ControlPattern::from_trits("1e"), ControlPattern::from_trits("01"),
      ControlPattern::from_trits("ee"), ControlPattern::from_trits("11")};
  std::sort(patterns.begin(), patterns.end());
  std::vector<std::string> sorted;
  for (const auto& p : patterns) sorted.push_back(p.trits());
  CHECK(sorted == std::vector<std::string>{"00", "01", "11", "1e", "e0", "ee"});
}
