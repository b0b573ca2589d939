#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace grsp {

/// Computational basis index; prefixes of length k occupy the low k bits,
/// with the first (leftmost) qubit in the most significant position.
using basis_t = std::uint64_t;

inline basis_t basis_count(int n) { return basis_t{1} << n; }

std::string to_bit_string(basis_t bits, int length);

/// Parses a string of '0'/'1' characters. Throws on other characters or
/// lengths above 63.
basis_t parse_bit_string(std::string_view text);

} // namespace grsp
