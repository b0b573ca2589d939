#pragma once

#include <stdexcept>
#include <string>

namespace grsp {

/// Machine-readable failure categories, also used as CLI error codes.
enum class ErrorCategory {
  duplicate_index,
  negative_amplitude,
  empty_support,
  index_out_of_range,
  length_mismatch,
  position_not_controlled,
  malformed_pattern,
  duplicate_pattern,
  region_overlap,
  dimension_mismatch,
  invalid_argument,
  parse_error,
  io_error,
  internal,
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

[[noreturn]] void fail(ErrorCategory category, const std::string& what);

} // namespace grsp
