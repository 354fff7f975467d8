#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridrisk/metrics/risk_metrics.hpp"

namespace gridrisk::metrics {

struct ReportOptions {
  /// Leads that enter MAPE, direction rates, reserve and large-error counts.
  /// Empty means every lead in the set.
  std::vector<int> leads;
  int h_star = 24;
  double percentile = 99.5;
  std::vector<double> thresholds{1000.0, 1500.0, 2000.0};
};

struct RiskReport {
  double mape_pct = 0.0;
  double upr_pct = 0.0;
  double opr_pct = 0.0;
  double tie_pct = 0.0;
  double bias_mw = 0.0;
  int h_star = 24;
  double reserve_mw = 0.0;
  double reserve_pct = 0.0;
  double percentile = 99.5;
  LargeErrorCounts large_error_counts;
  std::size_t n_points = 0;
};

RiskReport compute_risk_report(const QuantileForecastSet& fs, const ReportOptions& options = {});

/// Keys: mape_pct, upr_pct, reserve_p995_pct, bias_24h_mw, opr_pct,
/// reserve_p995_mw, tie_pct, n_points, large_error_counts.
nlohmann::ordered_json to_json(const RiskReport& report);
RiskReport risk_report_from_json(const nlohmann::ordered_json& j);

}  // namespace gridrisk::metrics
