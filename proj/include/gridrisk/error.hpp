#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridrisk {

// Coarse error class; the CLI maps each to an exit code.
enum class ErrorCategory { config, data, numerical };

enum class ErrorCode {
  // data-model
  missing_header,
  duplicate_timestamp,
  empty_series,
  no_overlap,
  constant_channel,
  invalid_series,
  // risk-metrics
  non_positive_actual,
  non_positive_forecast,
  length_mismatch,
  missing_lead,
  empty_set,
  invalid_argument,
  zero_variance,
  degenerate_differential,
  // objectives
  invalid_level,
  shape_mismatch,
  non_positive_variance,
  invalid_config,
  // quantile policy
  degenerate_spread,
  negative_rho,
  kappa_below_one,
  // features
  constant_series,
  insufficient_overlap,
  gap_in_window,
  leakage,
  dimension_mismatch,
  // forecast engine
  insufficient_history,
  diverged_loss,
  degenerate_design,
  column_mismatch,
  non_positive_step,
  non_finite_state,
  // backtest
  insufficient_data,
  fold_failed,
  // io
  io_error,
  parse_error,
};

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string context = {})
      : std::runtime_error(std::move(message)), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace gridrisk
