#include "finsler/errors.hpp"

namespace finsler {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "DomainError";
    case Errc::arity: return "ArityError";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::evaluation: return "EvaluationError";
    case Errc::syntax: return "SyntaxError";
    case Errc::unknown_identifier: return "UnknownIdentifier";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::singular_metric: return "SingularMetric";
    case Errc::zero_norm: return "ZeroNorm";
    case Errc::zero_vector: return "ZeroVector";
    case Errc::degenerate_denominator: return "DegenerateDenominator";
    case Errc::non_positive_phi: return "NonPositivePhi";
    case Errc::singular_g: return "SingularG";
    case Errc::degenerate_flag: return "DegenerateFlag";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::singular_direction_in_quadrature: return "SingularDirectionInQuadrature";
    case Errc::non_positive_density: return "NonPositiveDensity";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::wrong_phi_variant: return "WrongPhiVariant";
    case Errc::all_samples_singular: return "AllSamplesSingular";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::missing_reports: return "MissingReports";
    case Errc::unknown_name: return "UnknownName";
    case Errc::param_out_of_range: return "ParamOutOfRange";
    case Errc::fast_wind: return "FastWind";
    case Errc::config: return "ConfigError";
    case Errc::unknown_quantity: return "UnknownQuantity";
  }
  return "Error";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t offset, const std::string& message)
    : Error(Errc::syntax, message + " at offset " + std::to_string(offset)), offset_(offset) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace finsler
