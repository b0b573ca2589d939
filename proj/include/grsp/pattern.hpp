#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "grsp/basis.hpp"
#include "grsp/errors.hpp"

namespace grsp {

/// Control pattern over {0, 1, e}: a control on each qubit position that is
/// set in `mask`, taking the corresponding bit of `value`; positions outside
/// the mask carry no control ('e'). Position 0 is the leftmost (first)
/// qubit; bit index = length-1-position. Canonical form keeps value bits
/// zero wherever the mask bit is zero. Lengths up to 63 are supported.
class ControlPattern {
public:
  ControlPattern() = default; // length 0 (the root pattern)

  ControlPattern(int length, basis_t mask, basis_t value)
      : length_(length), mask_(mask), value_(value & mask) {}

  /// Fully concrete pattern: every position controlled.
  static ControlPattern concrete(int length, basis_t bits) {
    const basis_t all = length == 0 ? 0 : (basis_t{1} << length) - 1;
    return {length, all, bits & all};
  }

  static ControlPattern from_trits(std::string_view trits);

  int length() const { return length_; }
  basis_t mask() const { return mask_; }
  basis_t value() const { return value_; }

  int control_count() const { return std::popcount(mask_); }
  int free_count() const { return length_ - control_count(); }
  bool is_concrete() const { return free_count() == 0; }

  /// |B(x)| = 2^m with m the number of 'e' positions.
  basis_t region_size() const { return basis_t{1} << free_count(); }

  bool has_control_at(int position) const { return (mask_ >> bit(position)) & 1; }

  /// True iff `bits` lies in B(*this); `bits` must have the same length.
  bool matches(basis_t bits) const { return (bits & mask_) == value_; }

  /// True iff B(*this) and B(other) intersect (patterns of equal length).
  bool overlaps(const ControlPattern& other) const {
    return ((value_ ^ other.value_) & (mask_ & other.mask_)) == 0;
  }

  /// Replaces the control at `position` with 'e'. Throws if already free.
  ControlPattern strip(int position) const {
    require_controlled(position);
    const basis_t b = basis_t{1} << bit(position);
    return {length_, mask_ & ~b, value_ & ~b};
  }

  /// Flips the control at `position` (the complementary sibling pattern).
  ControlPattern flip(int position) const {
    require_controlled(position);
    const basis_t b = basis_t{1} << bit(position);
    return {length_, mask_, value_ ^ b};
  }

  std::string trits() const;

  friend bool operator==(const ControlPattern&, const ControlPattern&) = default;

  /// Orders by length, then lexicographically over trit strings with
  /// '0' < '1' < 'e' ('e' sorts last), matching the serialized ordering.
  std::strong_ordering operator<=>(const ControlPattern& other) const {
    if (length_ != other.length_) return length_ <=> other.length_;
    for (int pos = 0; pos < length_; ++pos) {
      const int a = trit_rank(pos);
      const int b = other.trit_rank(pos);
      if (a != b) return a <=> b;
    }
    return std::strong_ordering::equal;
  }

private:
  int bit(int position) const { return length_ - 1 - position; }

  int trit_rank(int position) const {
    const int b = bit(position);
    if (!((mask_ >> b) & 1)) return 2;
    return static_cast<int>((value_ >> b) & 1);
  }

  void require_controlled(int position) const {
    if (position < 0 || position >= length_)
      fail(ErrorCategory::index_out_of_range,
           "pattern position " + std::to_string(position) + " out of range");
    if (!has_control_at(position))
      fail(ErrorCategory::position_not_controlled,
           "position " + std::to_string(position) + " carries no control");
  }

  int length_ = 0;
  basis_t mask_ = 0;
  basis_t value_ = 0;
};

struct ControlPatternHash {
  std::size_t operator()(const ControlPattern& p) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(p.length()) + 1);
    h ^= p.mask() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= p.value() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// String-facing form of B-membership; validates lengths and characters.
bool matches(const ControlPattern& pattern, std::string_view bits);

} // namespace grsp
