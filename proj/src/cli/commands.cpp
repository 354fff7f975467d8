#include "gridrisk/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gridrisk/backtest/report.hpp"
#include "gridrisk/backtest/runner.hpp"
#include "gridrisk/cli/synth.hpp"
#include "gridrisk/data/ingest.hpp"
#include "gridrisk/error.hpp"
#include "gridrisk/features/lag_scan.hpp"
#include "gridrisk/metrics/dm_test.hpp"
#include "gridrisk/policy/asymmetry.hpp"

namespace gridrisk::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kVersion = GRIDRISK_VERSION;

void write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write", path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "write failed", path.string());
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Hash of a command's own arguments, for outputs that have no config file.
std::string args_hash(const json& args) { return backtest::fnv1a_hex(args.dump()); }

std::string pick_area(const data::IngestResult& r, const std::string& wanted, const std::string& suffix) {
  std::vector<std::string> areas;
  for (const auto& id : r.ids()) {
    const auto slash = id.rfind('/');
    if (slash == std::string::npos) continue;
    if (!suffix.empty() && id.substr(slash + 1) != suffix) continue;
    areas.push_back(id.substr(0, slash));
  }
  if (!wanted.empty()) {
    if (std::find(areas.begin(), areas.end(), wanted) == areas.end()) {
      throw Error(ErrorCode::empty_series, "area not present in file", wanted);
    }
    return wanted;
  }
  std::sort(areas.begin(), areas.end());
  areas.erase(std::unique(areas.begin(), areas.end()), areas.end());
  if (areas.size() != 1) throw Error(ErrorCode::invalid_config, "file holds several areas; pass one explicitly");
  return areas.front();
}

const data::HourlySeries& series_for_node(const data::IngestResult& r, const std::string& node,
                                          std::initializer_list<const char*> preferred, const std::string& source) {
  for (const char* market : preferred) {
    const std::string id = node + "/" + market;
    for (const auto& s : r.series) {
      if (s.id() == id) return s;
    }
  }
  for (const auto& s : r.series) {
    if (s.id().rfind(node + "/", 0) == 0) return s;
  }
  throw Error(ErrorCode::empty_series, "node not present in file", node + " in " + source);
}

data::HourlySeries first_series(const fs::path& path) {
  try {
    return data::ingest_csv(path, data::CsvSchema::load).series.front();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::missing_header) throw;
  }
  return data::ingest_csv(path, data::CsvSchema::lmp_oasis).series.front();
}

forecast::FeatureOptions feature_options(const ModelConfig& m, const ExperimentConfig& cfg, const LoadedData& d) {
  forecast::FeatureOptions f;
  f.load_channel = d.load_id;
  for (const auto& w : m.weather) f.weather_channels.push_back(d.area + "/" + w);
  f.max_lag = m.max_lag;
  f.tz = cfg.timezone;
  f.include_time_features = m.time_features;
  return f;
}

backtest::WalkForwardSchedule make_run_schedule(const ExperimentConfig& cfg, const data::AlignedFrame& frame) {
  return cfg.mode == backtest::ReportMode::walkforward ? backtest::make_schedule(frame.range(), cfg.schedule)
                                                       : backtest::make_fixed_split(frame.range(), cfg.schedule);
}

std::string provenance(const std::string& config_hash) {
  return fmt::format("tool_version={} config_hash={}", kVersion, config_hash);
}

std::string file_stem(const std::string& name, const std::string& variant) {
  std::string s = name + "_" + variant;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '-';
  }
  return s;
}

}  // namespace

ExperimentConfig resolve_run_config(const RunArgs& args) {
  json doc = read_config_document(args.config);
  if (args.seed) doc["seed"] = *args.seed;
  if (args.out_dir) doc["out_dir"] = fs::absolute(*args.out_dir).string();
  if (args.h_star) {
    doc["objective"]["h_star"] = *args.h_star;
    if (doc.contains("models") && doc["models"].is_array()) {
      for (auto& m : doc["models"]) {
        if (m.is_object() && m.contains("objective")) m["objective"]["h_star"] = *args.h_star;
      }
    }
  }
  return parse_config(doc, args.config.parent_path());
}

LoadedData load_experiment_data(const ExperimentConfig& cfg) {
  const auto loads = data::ingest_csv(cfg.load_path, data::CsvSchema::load);
  LoadedData out;
  out.area = pick_area(loads, cfg.area, "load");
  out.load_id = out.area + "/load";
  std::vector<data::HourlySeries> series{loads.get(out.load_id)};
  if (cfg.weather_path) {
    const auto weather = data::ingest_csv(*cfg.weather_path, data::CsvSchema::weather);
    for (const auto& s : weather.series) {
      if (s.id().rfind(out.area + "/", 0) == 0) series.push_back(s);
    }
    if (series.size() == 1) throw Error(ErrorCode::empty_series, "no weather rows for area", out.area);
  }
  out.frame = data::align(series);
  return out;
}

forecast::ForecasterFactory make_factory(const ModelConfig& m, const ExperimentConfig& cfg, const LoadedData& d) {
  switch (m.kind) {
    case ModelKind::seasonal_naive:
      return [load = d.load_id] { return std::make_unique<forecast::SeasonalNaiveForecaster>(load); };
    case ModelKind::linear_quantile:
      return [f = feature_options(m, cfg, d), m] {
        return std::make_unique<forecast::LinearQuantileForecaster>(f, m.objective, m.fit);
      };
    case ModelKind::gaussian_linear:
      return [f = feature_options(m, cfg, d), m] {
        return std::make_unique<forecast::GaussianLinearForecaster>(f, m.objective.quantile_levels, m.fit);
      };
  }
  throw Error(ErrorCode::invalid_config, "unknown model kind");
}

void cmd_synth(const SynthArgs& args, std::ostream& out) {
  SynthOptions opt;
  opt.seed = args.seed;
  opt.days = args.days;
  opt.area = args.area;
  auto profile = synth_profile_from_string(args.profile);
  if (!profile) throw Error(ErrorCode::invalid_config, "profile must be duck, flat or heatwave", args.profile);
  opt.profile = *profile;
  auto start = data::parse_timestamp(args.start);
  if (!start || !data::on_hour(*start)) throw Error(ErrorCode::invalid_config, "start must be an hour timestamp", args.start);
  opt.start = *start;
  const auto files = write_synth(synthesize(opt), args.out_dir);
  for (const auto& f : files) out << f.string() << "\n";
}

void cmd_lags(const LagsArgs& args, std::ostream& out) {
  const auto loads = data::ingest_csv(args.load, data::CsvSchema::load);
  const auto area = pick_area(loads, args.area, "load");
  const auto& load = loads.get(area + "/load");
  const auto weather = data::ingest_csv(args.weather, data::CsvSchema::weather);

  features::LagProfile profile;
  std::vector<std::string> skipped;
  for (const auto& s : weather.series) {
    if (s.id().rfind(area + "/", 0) != 0) continue;
    try {
      profile.entries[s.id()] = features::lag_scan(s, load, args.max_lag);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::constant_series) throw;
      skipped.push_back(s.id());
    }
  }
  if (profile.entries.empty()) throw Error(ErrorCode::constant_series, "every weather covariate is constant", area);

  const json key = {{"command", "lags"}, {"weather", args.weather.string()}, {"load", args.load.string()},
                    {"area", area}, {"max_lag", args.max_lag}};
  ordered_json doc;
  doc["tool_version"] = kVersion;
  doc["config_hash"] = args_hash(key);
  doc["lags"] = features::to_json(profile);
  doc["constant_covariates"] = skipped;
  write_file(args.out_dir / "lags.json", dump(doc));
  for (const auto& [id, e] : profile.entries) {
    out << fmt::format("{} lag={}h r={:.4f}\n", id, e.lag_hours, e.pearson_r);
  }
}

void cmd_rho(const RhoArgs& args, std::ostream& out) {
  if (args.node.empty()) throw Error(ErrorCode::invalid_config, "--node is required");
  if (args.load.has_value() != args.da_forecast.has_value()) {
    throw Error(ErrorCode::invalid_config, "--load and --da-forecast go together");
  }
  const auto da_file = data::ingest_csv(args.da, data::CsvSchema::lmp_oasis);
  const auto rt_file = data::ingest_csv(args.rt, data::CsvSchema::lmp_oasis);
  const auto& da = series_for_node(da_file, args.node, {"DAM"}, args.da.string());
  const auto& rt = series_for_node(rt_file, args.node, {"RTM", "RTPD", "HASP"}, args.rt.string());

  std::optional<data::HourlySeries> load, fc;
  if (args.load) {
    load = first_series(*args.load);
    fc = first_series(*args.da_forecast);
  }
  policy::EstimateOptions opt;
  opt.kappa = args.kappa;
  opt.min_event_samples = args.min_event_samples;
  const auto est = policy::estimate_asymmetry(args.node, da, rt, load ? &*load : nullptr, fc ? &*fc : nullptr, opt);

  json key = {{"command", "rho"}, {"da", args.da.string()}, {"rt", args.rt.string()}, {"node", args.node},
              {"kappa", args.kappa}, {"min_event_samples", args.min_event_samples}};
  if (args.load) {
    key["load"] = args.load->string();
    key["da_forecast"] = args.da_forecast->string();
  }
  auto doc = policy::to_json(est);
  doc["tool_version"] = kVersion;
  doc["config_hash"] = args_hash(key);
  write_file(args.out_dir / ("rho_" + args.node + ".json"), dump(doc));

  out << fmt::format("{} hours={} rho_price={:.4f} q_price*={:.3f}", est.node, est.hours, est.rho_price,
                     est.q_price_star);
  if (est.rho_event) out << fmt::format(" rho_event={:.4f} q_event*={:.3f}", *est.rho_event, *est.q_event_star);
  out << fmt::format(" kappa={} q_target={:.3f}\n", est.kappa, est.q_target);
}

void cmd_train(const RunArgs& args, std::ostream& out) {
  const auto cfg = resolve_run_config(args);
  const auto d = load_experiment_data(cfg);

  const ModelConfig* chosen = nullptr;
  for (const auto& m : cfg.models) {
    if (args.model ? m.name == *args.model : m.kind != ModelKind::seasonal_naive) {
      chosen = &m;
      break;
    }
  }
  if (!chosen) throw Error(ErrorCode::invalid_config, "no trainable model in config");
  if (chosen->kind == ModelKind::seasonal_naive) {
    throw Error(ErrorCode::invalid_config, "seasonal_naive has no parameters to train", chosen->name);
  }

  backtest::Fold all;
  all.train = d.frame.range();
  all.validation = {all.train.end - data::days(cfg.schedule.val_days), all.train.end};
  backtest::RunOptions ro;
  ro.load_channel = d.load_id;
  ro.lookback_hours = cfg.lookback_hours;
  const auto window = backtest::fit_window(d.frame, all, cfg.schedule, ro);

  ordered_json doc;
  const auto f = feature_options(*chosen, cfg, d);
  if (chosen->kind == ModelKind::linear_quantile) {
    forecast::LinearQuantileForecaster m(f, chosen->objective, chosen->fit);
    m.fit(d.frame, window);
    auto model = m.model();
    model.config_hash = cfg.hash();
    doc = forecast::to_json(model);
    doc["lags"] = features::to_json(m.spec().profile);
    doc["best_epoch"] = model.best_epoch;
  } else {
    forecast::GaussianLinearForecaster m(f, chosen->objective.quantile_levels, chosen->fit);
    m.fit(d.frame, window);
    doc = forecast::to_json(m.model());
    doc["quantiles"] = chosen->objective.quantile_levels;
    doc["config_hash"] = cfg.hash();
    doc["seed"] = chosen->fit.seed;
    doc["lags"] = features::to_json(m.spec().profile);
  }
  doc["model"] = chosen->name;
  doc["variant"] = chosen->variant;
  doc["tool_version"] = kVersion;
  write_file(cfg.out_dir / "model.json", dump(doc));
  out << fmt::format("{}/{} trained on {} issue times, {} validation; wrote {}\n", chosen->name, chosen->variant,
                     window.train_issues.size(), window.validation_issues.size(),
                     (cfg.out_dir / "model.json").string());
}

void cmd_backtest(const RunArgs& args, std::ostream& out) {
  const auto cfg = resolve_run_config(args);
  const auto d = load_experiment_data(cfg);
  const auto schedule = make_run_schedule(cfg, d.frame);

  backtest::ReportContext ctx;
  ctx.mode = cfg.mode;
  ctx.schedule_hash = backtest::schedule_hash(schedule);
  ctx.config_hash = cfg.hash();
  ctx.tool_version = kVersion;
  ctx.h_star = cfg.models.front().objective.h_star;
  ctx.percentile = cfg.percentile;
  ctx.thresholds = cfg.thresholds;

  backtest::RunOptions ro;
  ro.load_channel = d.load_id;
  ro.lookback_hours = cfg.lookback_hours;

  std::vector<backtest::ModelRow> rows;
  for (const auto& m : cfg.models) {
    if (m.kind != ModelKind::seasonal_naive && m.objective.h_star != ctx.h_star) {
      throw Error(ErrorCode::invalid_config, "all models in one report must share h_star", m.name);
    }
    const auto result = backtest::run_backtest(d.frame, schedule, make_factory(m, cfg, d), ro);
    backtest::ModelRun run;
    run.model = m.name;
    run.variant = m.variant;
    run.forecasts = result.forecasts;
    for (const auto& f : result.folds) run.folds.push_back(f.forecasts);
    run.forecast_file = "forecasts_" + file_stem(m.name, m.variant) + ".csv";
    write_file(cfg.out_dir / run.forecast_file, backtest::forecast_csv(run.forecasts, provenance(ctx.config_hash)));
    rows.push_back(backtest::score_run(run, ctx));
    const auto& r = rows.back().metrics;
    out << fmt::format("{}/{} folds={} issues={} MAPE={:.3f}% UPR={:.2f}% OPR={:.2f}% bias@{}h={:.1f}MW "
                       "reserve{}={:.1f}MW\n",
                       m.name, m.variant, result.folds.size(), run.forecasts.issue_count(), r.mape_pct, r.upr_pct,
                       r.opr_pct, ctx.h_star, r.bias_mw, ctx.percentile, r.reserve_mw);
  }
  write_file(cfg.out_dir / "report.json", dump(backtest::report_json(rows, ctx)));
  write_file(cfg.out_dir / "report.csv", backtest::report_csv(rows, ctx));
}

void cmd_report(const ReportArgs& args, std::ostream& out) {
  if (args.forecasts.empty()) throw Error(ErrorCode::empty_set, "no forecast files given");
  backtest::ReportContext ctx;
  if (args.mode == "walkforward") {
    ctx.mode = backtest::ReportMode::walkforward;
  } else if (args.mode == "fixed_split") {
    ctx.mode = backtest::ReportMode::fixed_split;
  } else {
    throw Error(ErrorCode::invalid_config, "mode must be walkforward or fixed_split", args.mode);
  }
  ctx.h_star = args.h_star;
  ctx.percentile = args.percentile;
  ctx.tool_version = kVersion;
  json key = {{"command", "report"}, {"mode", args.mode}, {"h_star", args.h_star}, {"percentile", args.percentile}};
  for (const auto& f : args.forecasts) key["forecasts"].push_back(f.string());
  ctx.config_hash = args_hash(key);

  std::vector<backtest::ModelRow> rows;
  for (const auto& path : args.forecasts) {
    backtest::ModelRun run;
    run.model = path.stem().string();
    run.variant = "default";
    run.forecasts = backtest::read_forecast_csv(path.string());
    run.forecast_file = fs::absolute(path).string();
    rows.push_back(backtest::score_run(run, ctx));
    out << fmt::format("{} MAPE={:.3f}% UPR={:.2f}% OPR={:.2f}%\n", run.model, rows.back().metrics.mape_pct,
                       rows.back().metrics.upr_pct, rows.back().metrics.opr_pct);
  }
  write_file(args.out_dir / "report.json", dump(backtest::report_json(rows, ctx)));
  write_file(args.out_dir / "report.csv", backtest::report_csv(rows, ctx));
}

namespace {

struct ReportForecasts {
  std::string model;
  metrics::QuantileForecastSet fs;
};

ReportForecasts forecasts_from_report(const fs::path& report, const std::optional<std::string>& model) {
  std::ifstream in(report);
  if (!in) throw Error(ErrorCode::io_error, "cannot open report", report.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what(), report.string());
  }
  if (!doc.contains("models") || !doc["models"].is_array() || doc["models"].empty()) {
    throw Error(ErrorCode::parse_error, "report lists no models", report.string());
  }
  for (const auto& m : doc["models"]) {
    const auto name = m.value("model", std::string{});
    if (model && name != *model) continue;
    fs::path file = m.value("forecast_file", std::string{});
    if (file.empty()) throw Error(ErrorCode::parse_error, "model entry has no forecast_file", report.string());
    if (file.is_relative()) file = report.parent_path() / file;
    return {name, backtest::read_forecast_csv(file.string())};
  }
  throw Error(ErrorCode::invalid_config, "model not in report", *model + " in " + report.string());
}

}  // namespace

void cmd_compare(const CompareArgs& args, std::ostream& out) {
  const auto a = forecasts_from_report(args.report_a, args.model_a);
  const auto b = forecasts_from_report(args.report_b, args.model_b);
  const int lead = args.lead.value_or(args.horizon);
  const auto la = a.fs.lead_index(lead);
  const auto lb = b.fs.lead_index(lead);
  if (!la || !lb) throw Error(ErrorCode::missing_lead, "lead not in both forecast sets", std::to_string(lead));

  std::map<data::Instant, double> eb;
  for (std::size_t i = 0; i < b.fs.issue_count(); ++i) eb[b.fs.issue_times()[i]] = b.fs.point(i, *lb) - b.fs.actual(i, *lb);
  std::vector<double> ea_v, eb_v;
  for (std::size_t i = 0; i < a.fs.issue_count(); ++i) {
    auto it = eb.find(a.fs.issue_times()[i]);
    if (it == eb.end()) continue;
    ea_v.push_back(a.fs.point(i, *la) - a.fs.actual(i, *la));
    eb_v.push_back(it->second);
  }
  if (ea_v.empty()) throw Error(ErrorCode::no_overlap, "reports share no issue time");
  const auto r = metrics::dm_test(ea_v, eb_v, args.horizon);

  ordered_json doc;
  doc["model_a"] = a.model;
  doc["model_b"] = b.model;
  doc["lead"] = lead;
  doc["horizon"] = args.horizon;
  doc["n"] = r.n;
  doc["statistic"] = r.statistic;
  doc["p_value"] = r.p_value;
  doc["mean_differential"] = r.mean_differential;
  doc["long_run_variance"] = r.long_run_variance;
  doc["tool_version"] = kVersion;
  doc["config_hash"] = args_hash({{"command", "compare"}, {"a", args.report_a.string()}, {"b", args.report_b.string()},
                                  {"lead", lead}, {"horizon", args.horizon}});
  if (args.out_dir) write_file(*args.out_dir / "compare.json", dump(doc));
  out << dump(doc);
}

}  // namespace gridrisk::cli
