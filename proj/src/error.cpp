#include "gridrisk/error.hpp"

namespace gridrisk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::missing_header: return "MissingHeader";
    case ErrorCode::duplicate_timestamp: return "DuplicateTimestamp";
    case ErrorCode::empty_series: return "EmptySeries";
    case ErrorCode::no_overlap: return "NoOverlap";
    case ErrorCode::constant_channel: return "ConstantChannel";
    case ErrorCode::invalid_series: return "InvalidSeries";
    case ErrorCode::non_positive_actual: return "NonPositiveActual";
    case ErrorCode::non_positive_forecast: return "NonPositiveForecast";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::missing_lead: return "MissingLead";
    case ErrorCode::empty_set: return "EmptySet";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::zero_variance: return "ZeroVariance";
    case ErrorCode::degenerate_differential: return "DegenerateDifferential";
    case ErrorCode::invalid_level: return "InvalidLevel";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::non_positive_variance: return "NonPositiveVariance";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::degenerate_spread: return "DegenerateSpread";
    case ErrorCode::negative_rho: return "NegativeRho";
    case ErrorCode::kappa_below_one: return "KappaBelowOne";
    case ErrorCode::constant_series: return "ConstantSeries";
    case ErrorCode::insufficient_overlap: return "InsufficientOverlap";
    case ErrorCode::gap_in_window: return "GapInWindow";
    case ErrorCode::leakage: return "Leakage";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::insufficient_history: return "InsufficientHistory";
    case ErrorCode::diverged_loss: return "DivergedLoss";
    case ErrorCode::degenerate_design: return "DegenerateDesign";
    case ErrorCode::column_mismatch: return "ColumnMismatch";
    case ErrorCode::non_positive_step: return "NonPositiveStep";
    case ErrorCode::non_finite_state: return "NonFiniteState";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::fold_failed: return "FoldFailed";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_config:
    case ErrorCode::invalid_level:
    case ErrorCode::negative_rho:
    case ErrorCode::kappa_below_one:
    case ErrorCode::non_positive_step:
    case ErrorCode::parse_error:
      return ErrorCategory::config;
    case ErrorCode::zero_variance:
    case ErrorCode::degenerate_differential:
    case ErrorCode::non_positive_variance:
    case ErrorCode::degenerate_spread:
    case ErrorCode::diverged_loss:
    case ErrorCode::degenerate_design:
    case ErrorCode::non_finite_state:
      return ErrorCategory::numerical;
    default:
      return ErrorCategory::data;
  }
}

}  // namespace gridrisk
