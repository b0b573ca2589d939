#include "grsp/basis.hpp"

#include "grsp/errors.hpp"

namespace grsp {

std::string to_bit_string(basis_t bits, int length) {
  std::string out(static_cast<std::size_t>(length), '0');
  for (int i = 0; i < length; ++i)
    if ((bits >> (length - 1 - i)) & 1) out[static_cast<std::size_t>(i)] = '1';
  return out;
}

basis_t parse_bit_string(std::string_view text) {
  if (text.size() > 63)
    fail(ErrorCategory::malformed_pattern, "bit string longer than 63");
  basis_t value = 0;
  for (char c : text) {
    if (c != '0' && c != '1')
      fail(ErrorCategory::malformed_pattern,
           std::string("invalid bit character '") + c + "'");
    value = (value << 1) | static_cast<basis_t>(c == '1');
  }
  return value;
}

} // namespace grsp
