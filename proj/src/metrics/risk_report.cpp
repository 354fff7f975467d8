#include "gridrisk/metrics/risk_report.hpp"

#include <fmt/format.h>

#include "gridrisk/error.hpp"

namespace gridrisk::metrics {

RiskReport compute_risk_report(const QuantileForecastSet& fs, const ReportOptions& options) {
  if (fs.empty()) throw Error(ErrorCode::empty_set, "cannot report on an empty forecast set");
  const auto pts = fs.scored_points(options.leads);

  RiskReport r;
  r.mape_pct = mape(pts.actual, pts.forecast);
  const auto dir = direction_rates(pts.actual, pts.forecast);
  r.upr_pct = dir.upr_pct;
  r.opr_pct = dir.opr_pct;
  r.tie_pct = dir.tie_pct;
  r.h_star = options.h_star;
  r.bias_mw = bias_at_horizon(fs, options.h_star);
  r.percentile = options.percentile;
  r.reserve_mw = reserve(pts.actual, pts.forecast, options.percentile, ReserveBasis::mw);
  r.reserve_pct = reserve(pts.actual, pts.forecast, options.percentile, ReserveBasis::pct);
  r.large_error_counts = large_error_counts(pts.actual, pts.forecast, options.thresholds);
  r.n_points = pts.size();
  return r;
}

nlohmann::ordered_json to_json(const RiskReport& report) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [t, c] : report.large_error_counts) counts[fmt::format("{}", t)] = c;
  return nlohmann::ordered_json{
      {"mape_pct", report.mape_pct},
      {"upr_pct", report.upr_pct},
      {"reserve_p995_pct", report.reserve_pct},
      {"bias_24h_mw", report.bias_mw},
      {"opr_pct", report.opr_pct},
      {"reserve_p995_mw", report.reserve_mw},
      {"tie_pct", report.tie_pct},
      {"n_points", report.n_points},
      {"large_error_counts", counts},
  };
}

RiskReport risk_report_from_json(const nlohmann::ordered_json& j) {
  try {
    RiskReport r;
    r.mape_pct = j.at("mape_pct").get<double>();
    r.upr_pct = j.at("upr_pct").get<double>();
    r.reserve_pct = j.at("reserve_p995_pct").get<double>();
    r.bias_mw = j.at("bias_24h_mw").get<double>();
    r.opr_pct = j.at("opr_pct").get<double>();
    r.reserve_mw = j.at("reserve_p995_mw").get<double>();
    r.tie_pct = j.at("tie_pct").get<double>();
    r.n_points = j.at("n_points").get<std::size_t>();
    for (const auto& [k, v] : j.at("large_error_counts").items()) {
      r.large_error_counts[std::stod(k)] = v.get<std::size_t>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed risk report: ") + e.what());
  }
}

}  // namespace gridrisk::metrics
