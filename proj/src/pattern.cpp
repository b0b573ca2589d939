#include "grsp/pattern.hpp"

namespace grsp {

ControlPattern ControlPattern::from_trits(std::string_view trits) {
  if (trits.size() > 63)
    fail(ErrorCategory::malformed_pattern, "pattern longer than 63 trits");
  const int length = static_cast<int>(trits.size());
  basis_t mask = 0;
  basis_t value = 0;
  for (int pos = 0; pos < length; ++pos) {
    const basis_t bit = basis_t{1} << (length - 1 - pos);
    switch (trits[static_cast<std::size_t>(pos)]) {
      case '0': mask |= bit; break;
      case '1': mask |= bit; value |= bit; break;
      case 'e': break;
      default:
        fail(ErrorCategory::malformed_pattern,
             std::string("invalid trit character '") +
                 trits[static_cast<std::size_t>(pos)] + "' in pattern \"" +
                 std::string(trits) + "\"");
    }
  }
  return {length, mask, value};
}

std::string ControlPattern::trits() const {
  std::string out(static_cast<std::size_t>(length_), 'e');
  for (int pos = 0; pos < length_; ++pos) {
    const int b = bit(pos);
    if ((mask_ >> b) & 1)
      out[static_cast<std::size_t>(pos)] = ((value_ >> b) & 1) ? '1' : '0';
  }
  return out;
}

bool matches(const ControlPattern& pattern, std::string_view bits) {
  if (static_cast<int>(bits.size()) != pattern.length())
    fail(ErrorCategory::length_mismatch,
         "bit string length " + std::to_string(bits.size()) +
             " does not match pattern length " + std::to_string(pattern.length()));
  return pattern.matches(parse_bit_string(bits));
}

} // namespace grsp
