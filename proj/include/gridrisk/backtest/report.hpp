#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridrisk/metrics/risk_report.hpp"

namespace gridrisk::backtest {

using data::Instant;
using metrics::QuantileForecastSet;

enum class ReportMode { walkforward, fixed_split };

std::string_view to_string(ReportMode mode);

struct ModelRun {
  std::string model;
  std::string variant;
  QuantileForecastSet forecasts;
  /// Per-fold sets for the fold mean and std of MAPE; may be empty.
  std::vector<QuantileForecastSet> folds;
  /// Forecast CSV written next to the report, relative to it.
  std::string forecast_file;
};

struct ReportContext {
  ReportMode mode = ReportMode::walkforward;
  std::string schedule_hash;
  std::string config_hash;
  std::string tool_version;
  int h_star = 24;
  double percentile = 99.5;
  std::vector<double> thresholds{1000.0, 1500.0, 2000.0};
};

inline constexpr int kPerLeadMape[] = {1, 6, 12, 24};

struct ModelRow {
  std::string model;
  std::string variant;
  metrics::RiskReport metrics;
  std::vector<std::pair<int, double>> per_lead_mape;
  double fold_mape_mean = 0.0;
  double fold_mape_std = 0.0;
  std::size_t fold_count = 0;
  std::string forecast_file;
};

/// fixed_split scores lead 24 only; walkforward scores every lead and adds
/// MAPE at leads 1, 6, 12 and 24. Throws EmptySet.
ModelRow score_run(const ModelRun& run, const ReportContext& ctx);

/// {tool_version, config_hash, mode, schedule_hash, models: [{model, variant,
/// mode, metrics, per_lead_mape, fold_mape, schedule_hash, forecast_file}]}
nlohmann::ordered_json report_json(std::span<const ModelRow> rows, const ReportContext& ctx);

/// Header plus one row per (model, variant), fixed column order.
std::string report_csv(std::span<const ModelRow> rows, const ReportContext& ctx);

/// issue_time,lead,actual,point_level,q_<level>...; a non-empty `provenance`
/// goes first as a '#' line, which the reader skips.
std::string forecast_csv(const QuantileForecastSet& fs, std::string_view provenance = {});
QuantileForecastSet read_forecast_csv(const std::string& path);

}  // namespace gridrisk::backtest
