#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

enum class Errc {
  domain,
  arity,
  shape_mismatch,
  evaluation,
  syntax,
  unknown_identifier,
  unbound_variable,
  singular_metric,
  zero_norm,
  zero_vector,
  degenerate_denominator,
  non_positive_phi,
  singular_g,
  degenerate_flag,
  dimension_mismatch,
  singular_direction_in_quadrature,
  non_positive_density,
  empty_grid,
  wrong_phi_variant,
  all_samples_singular,
  rank_deficient,
  missing_reports,
  unknown_name,
  param_out_of_range,
  fast_wind,
  config,
  unknown_quantity,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library. The code identifies the failure class,
/// the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace finsler
