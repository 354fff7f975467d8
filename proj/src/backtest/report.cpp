#include "gridrisk/backtest/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/tokenizer.hpp>
#include <fmt/format.h>

#include "gridrisk/error.hpp"

namespace gridrisk::backtest {

namespace {

std::vector<int> scored_leads(const QuantileForecastSet& fs, const ReportContext& ctx) {
  if (ctx.mode == ReportMode::fixed_split) return {24};
  return {fs.lead_hours().begin(), fs.lead_hours().end()};
}

double set_mape(const QuantileForecastSet& fs, std::span<const int> leads) {
  const auto pts = fs.scored_points(leads);
  return metrics::mape(pts.actual, pts.forecast);
}

}  // namespace

std::string_view to_string(ReportMode mode) { return mode == ReportMode::walkforward ? "walkforward" : "fixed_split"; }

ModelRow score_run(const ModelRun& run, const ReportContext& ctx) {
  if (run.forecasts.empty()) throw Error(ErrorCode::empty_set, "no forecasts to report", run.model);
  ModelRow row;
  row.model = run.model;
  row.variant = run.variant;
  row.forecast_file = run.forecast_file;
  metrics::ReportOptions opt;
  opt.leads = scored_leads(run.forecasts, ctx);
  opt.h_star = ctx.h_star;
  opt.percentile = ctx.percentile;
  opt.thresholds = ctx.thresholds;
  row.metrics = metrics::compute_risk_report(run.forecasts, opt);

  if (ctx.mode == ReportMode::walkforward) {
    for (int h : kPerLeadMape) {
      if (run.forecasts.lead_index(h)) {
        const int one[] = {h};
        row.per_lead_mape.emplace_back(h, set_mape(run.forecasts, one));
      }
    }
  } else {
    row.per_lead_mape.emplace_back(24, row.metrics.mape_pct);
  }

  std::vector<double> fold_mape;
  for (const auto& f : run.folds) {
    if (!f.empty()) fold_mape.push_back(set_mape(f, opt.leads));
  }
  row.fold_count = fold_mape.size();
  if (!fold_mape.empty()) {
    double sum = 0.0;
    for (double m : fold_mape) sum += m;
    row.fold_mape_mean = sum / static_cast<double>(fold_mape.size());
    if (fold_mape.size() > 1) {
      double ss = 0.0;
      for (double m : fold_mape) ss += (m - row.fold_mape_mean) * (m - row.fold_mape_mean);
      row.fold_mape_std = std::sqrt(ss / static_cast<double>(fold_mape.size() - 1));
    }
  }
  return row;
}

nlohmann::ordered_json report_json(std::span<const ModelRow> rows, const ReportContext& ctx) {
  if (rows.empty()) throw Error(ErrorCode::empty_set, "report has no model rows");
  nlohmann::ordered_json out;
  out["tool_version"] = ctx.tool_version;
  out["config_hash"] = ctx.config_hash;
  out["mode"] = to_string(ctx.mode);
  out["schedule_hash"] = ctx.schedule_hash;
  out["models"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json m;
    m["model"] = r.model;
    m["variant"] = r.variant;
    m["mode"] = to_string(ctx.mode);
    m["metrics"] = metrics::to_json(r.metrics);
    nlohmann::ordered_json lead = nlohmann::ordered_json::object();
    for (const auto& [h, v] : r.per_lead_mape) lead[std::to_string(h)] = v;
    m["per_lead_mape"] = lead;
    m["fold_mape"] = {{"mean", r.fold_mape_mean}, {"std", r.fold_mape_std}, {"folds", r.fold_count}};
    m["schedule_hash"] = ctx.schedule_hash;
    m["forecast_file"] = r.forecast_file;
    out["models"].push_back(std::move(m));
  }
  return out;
}

std::string report_csv(std::span<const ModelRow> rows, const ReportContext& ctx) {
  if (rows.empty()) throw Error(ErrorCode::empty_set, "report has no model rows");
  std::string out =
      "model,variant,mode,mape_pct,upr_pct,opr_pct,tie_pct,bias_24h_mw,reserve_p995_mw,reserve_p995_pct,n_points";
  for (double t : ctx.thresholds) out += fmt::format(",errors_gt_{}_mw", t);
  for (int h : kPerLeadMape) out += fmt::format(",mape_lead_{}", h);
  out += ",fold_mape_mean,fold_mape_std,schedule_hash,config_hash,tool_version\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}", r.model, r.variant, to_string(ctx.mode), m.mape_pct,
                       m.upr_pct, m.opr_pct, m.tie_pct, m.bias_mw, m.reserve_mw, m.reserve_pct, m.n_points);
    for (double t : ctx.thresholds) {
      auto it = m.large_error_counts.find(t);
      out += fmt::format(",{}", it == m.large_error_counts.end() ? 0 : it->second);
    }
    for (int h : kPerLeadMape) {
      auto it = std::find_if(r.per_lead_mape.begin(), r.per_lead_mape.end(), [h](auto& p) { return p.first == h; });
      out += it == r.per_lead_mape.end() ? std::string(",") : fmt::format(",{}", it->second);
    }
    out += fmt::format(",{},{},{},{},{}\n", r.fold_mape_mean, r.fold_mape_std, ctx.schedule_hash, ctx.config_hash,
                       ctx.tool_version);
  }
  return out;
}

std::string forecast_csv(const QuantileForecastSet& fs, std::string_view provenance) {
  std::string out;
  if (!provenance.empty()) out += fmt::format("# {}\n", provenance);
  out += "issue_time,lead,actual,point_level";
  for (double q : fs.levels()) out += fmt::format(",q_{}", q);
  out += '\n';
  for (std::size_t i = 0; i < fs.issue_count(); ++i) {
    const auto ts = data::format_timestamp(fs.issue_times()[i]);
    for (std::size_t l = 0; l < fs.lead_count(); ++l) {
      out += fmt::format("{},{},{},{}", ts, fs.lead_hours()[l], fs.actual(i, l), fs.point_level());
      for (std::size_t k = 0; k < fs.level_count(); ++k) out += fmt::format(",{}", fs.prediction(i, l, k));
      out += '\n';
    }
  }
  return out;
}

QuantileForecastSet read_forecast_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open forecast file", path);
  using Tok = boost::tokenizer<boost::escaped_list_separator<char>>;
  std::string line;
  std::size_t line_no = 0;
  do {
    if (!std::getline(in, line)) throw Error(ErrorCode::empty_series, "forecast file is empty", path);
    ++line_no;
  } while (!line.empty() && line[0] == '#');
  std::vector<std::string> header;
  for (const auto& f : Tok(line)) header.push_back(f);
  if (header.size() < 5 || header[0] != "issue_time" || header[1] != "lead" || header[2] != "actual" ||
      header[3] != "point_level") {
    throw Error(ErrorCode::missing_header, "not a forecast file", path);
  }
  std::vector<double> levels;
  for (std::size_t c = 4; c < header.size(); ++c) {
    if (header[c].rfind("q_", 0) != 0) throw Error(ErrorCode::missing_header, "bad level column " + header[c], path);
    levels.push_back(std::stod(header[c].substr(2)));
  }

  std::vector<Instant> issues;
  std::vector<int> leads;
  std::vector<double> preds, actuals;
  double point_level = 0.5;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::vector<std::string> f;
      for (const auto& tok : Tok(line)) f.push_back(tok);
      if (f.size() != header.size()) throw Error(ErrorCode::parse_error, "wrong field count", path + ":" + std::to_string(line_no));
      const auto parsed = data::parse_timestamp(f[0]);
      if (!parsed) throw Error(ErrorCode::parse_error, "bad issue time " + f[0], path + ":" + std::to_string(line_no));
      const Instant t = *parsed;
      const int lead = std::stoi(f[1]);
      if (issues.empty() || issues.back() != t) issues.push_back(t);
      if (issues.size() == 1) leads.push_back(lead);
      actuals.push_back(std::stod(f[2]));
      point_level = std::stod(f[3]);
      for (std::size_t c = 4; c < f.size(); ++c) preds.push_back(std::stod(f[c]));
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::parse_error, "non-numeric field", path + ":" + std::to_string(line_no));
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::parse_error, "numeric field out of range", path + ":" + std::to_string(line_no));
  }
  if (issues.empty()) throw Error(ErrorCode::empty_series, "forecast file has no rows", path);
  if (actuals.size() != issues.size() * leads.size()) {
    throw Error(ErrorCode::shape_mismatch, "issue blocks have different lead counts", path);
  }
  return QuantileForecastSet(std::move(issues), std::move(leads), std::move(levels), std::move(preds),
                             std::move(actuals), point_level);
}

}  // namespace gridrisk::backtest
