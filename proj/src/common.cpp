#include "soslasso/common.hpp"

namespace soslasso {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::none: return "none";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::empty_group: return "empty_group";
    case ErrorCode::duplicate_within_group: return "duplicate_within_group";
    case ErrorCode::geometry_mismatch: return "geometry_mismatch";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::overlapping_groups: return "overlapping_groups";
    case ErrorCode::uncovered_support: return "uncovered_support";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::bad_labels: return "bad_labels";
    case ErrorCode::unequal_sample_sizes: return "unequal_sample_sizes";
    case ErrorCode::too_few_samples: return "too_few_samples";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::singular_restriction: return "singular_restriction";
    case ErrorCode::nonpositive_kappa: return "nonpositive_kappa";
    case ErrorCode::generator_infeasible: return "generator_infeasible";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace soslasso
