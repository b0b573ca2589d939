#include "grsp/errors.hpp"

namespace grsp {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::duplicate_index: return "duplicate_index";
    case ErrorCategory::negative_amplitude: return "negative_amplitude";
    case ErrorCategory::empty_support: return "empty_support";
    case ErrorCategory::index_out_of_range: return "index_out_of_range";
    case ErrorCategory::length_mismatch: return "length_mismatch";
    case ErrorCategory::position_not_controlled: return "position_not_controlled";
    case ErrorCategory::malformed_pattern: return "malformed_pattern";
    case ErrorCategory::duplicate_pattern: return "duplicate_pattern";
    case ErrorCategory::region_overlap: return "region_overlap";
    case ErrorCategory::dimension_mismatch: return "dimension_mismatch";
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::parse_error: return "parse_error";
    case ErrorCategory::io_error: return "io_error";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

} // namespace grsp
