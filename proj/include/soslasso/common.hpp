#pragma once

#include <stdexcept>
#include <string>

namespace soslasso {

enum class ErrorCode {
  none = 0,
  index_out_of_range,
  empty_group,
  duplicate_within_group,
  geometry_mismatch,
  dimension_mismatch,
  overlapping_groups,
  uncovered_support,
  no_convergence,
  bad_labels,
  unequal_sample_sizes,
  too_few_samples,
  shape_mismatch,
  singular_restriction,
  nonpositive_kappa,
  generator_infeasible,
  invalid_argument,
  parse_error,
  io_error,
};

const char* error_code_name(ErrorCode code);

/// Library error carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) raise(code, msg);
}

}  // namespace soslasso
