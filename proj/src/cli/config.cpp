#include "gridrisk/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "gridrisk/error.hpp"

namespace gridrisk::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg, const std::string& where = {}) {
  throw Error(ErrorCode::invalid_config, msg, where);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail("expected a table", where);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.contains(k)) fail("unknown key '" + k + "'", where);
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("wrong type for '") + key + "'", where);
  }
}

int get_int(const json& obj, const char* key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) fail(std::string("'") + key + "' must be an integer", where);
  return obj.at(key).get<int>();
}

json to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(to_json(v));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  std::ostringstream s;
  node.visit([&s](const auto& n) { s << n; });
  return s.str();
}

objectives::ObjectiveConfig parse_objective(const json& obj, const std::string& where,
                                            objectives::ObjectiveConfig cfg) {
  check_keys(obj, where,
             {"quantiles", "weights", "h_star", "b_max_mw", "lambda_bias", "lambda_opr", "pi_max", "tau_mw",
              "point_level"});
  if (obj.contains("quantiles")) {
    cfg.quantile_levels = get<std::vector<double>>(obj, "quantiles", where, {});
    if (!obj.contains("weights")) cfg.weights.assign(cfg.quantile_levels.size(), 1.0);
    if (!obj.contains("point_level")) {
      bool has_half = false;
      for (double q : cfg.quantile_levels) has_half = has_half || q == 0.5;
      if (!has_half && cfg.quantile_levels.size() == 1) cfg.point_level = cfg.quantile_levels.front();
    }
  }
  cfg.weights = get(obj, "weights", where, cfg.weights);
  cfg.h_star = get_int(obj, "h_star", where, cfg.h_star);
  cfg.b_max_mw = get(obj, "b_max_mw", where, cfg.b_max_mw);
  cfg.lambda_bias = get(obj, "lambda_bias", where, cfg.lambda_bias);
  cfg.lambda_opr = get(obj, "lambda_opr", where, cfg.lambda_opr);
  cfg.pi_max = get(obj, "pi_max", where, cfg.pi_max);
  cfg.tau_mw = get(obj, "tau_mw", where, cfg.tau_mw);
  cfg.point_level = get(obj, "point_level", where, cfg.point_level);
  try {
    cfg.validate();
  } catch (const Error& e) {
    fail(e.what(), where);
  }
  return cfg;
}

ModelConfig parse_model(const json& obj, const std::string& where, const objectives::ObjectiveConfig& base,
                        std::uint64_t seed) {
  check_keys(obj, where,
             {"kind", "name", "variant", "objective", "step_size", "epochs", "batch_issues", "patience", "init",
              "max_lag", "weather", "time_features"});
  ModelConfig m;
  const auto kind = get<std::string>(obj, "kind", where, "linear_quantile");
  if (kind == "seasonal_naive") {
    m.kind = ModelKind::seasonal_naive;
  } else if (kind == "linear_quantile") {
    m.kind = ModelKind::linear_quantile;
  } else if (kind == "gaussian_linear") {
    m.kind = ModelKind::gaussian_linear;
  } else {
    fail("unknown model kind '" + kind + "'", where);
  }
  m.name = get<std::string>(obj, "name", where, std::string(to_string(m.kind)));
  m.variant = get<std::string>(obj, "variant", where, "default");
  m.objective = obj.contains("objective") ? parse_objective(obj.at("objective"), where + ".objective", base) : base;
  m.fit.seed = seed;
  m.fit.step_size = get(obj, "step_size", where, m.fit.step_size);
  m.fit.epochs = get_int(obj, "epochs", where, m.fit.epochs);
  const int batch = get_int(obj, "batch_issues", where, static_cast<int>(m.fit.batch_issues));
  if (batch < 0) fail("batch_issues must be >= 0", where);
  m.fit.batch_issues = static_cast<std::size_t>(batch);
  m.fit.patience = get_int(obj, "patience", where, m.fit.patience);
  const auto init = get<std::string>(obj, "init", where, "quantiles");
  if (init == "quantiles") {
    m.fit.init = forecast::InterceptInit::quantiles;
  } else if (init == "zero") {
    m.fit.init = forecast::InterceptInit::zero;
  } else {
    fail("init must be 'quantiles' or 'zero'", where);
  }
  m.max_lag = get_int(obj, "max_lag", where, m.max_lag);
  m.weather = get(obj, "weather", where, m.weather);
  m.time_features = get(obj, "time_features", where, m.time_features);
  if (!(m.fit.step_size > 0.0)) throw Error(ErrorCode::non_positive_step, "step_size must be positive", where);
  if (m.fit.epochs < 1) fail("epochs must be >= 1", where);
  if (m.fit.patience < 0) fail("patience must be >= 0", where);
  if (m.max_lag < 0) fail("max_lag must be >= 0", where);
  return m;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::seasonal_naive: return "seasonal_naive";
    case ModelKind::linear_quantile: return "linear_quantile";
    case ModelKind::gaussian_linear: return "gaussian_linear";
  }
  return "?";
}

std::string ExperimentConfig::hash() const { return backtest::fnv1a_hex(canonical.dump()); }

json toml_to_json(const std::string& text, const std::string& source) {
  try {
    return to_json(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream where;
    where << source << ":" << e.source().begin.line << ":" << e.source().begin.column;
    throw Error(ErrorCode::parse_error, std::string(e.description()), where.str());
  }
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base) {
  check_keys(doc, "config",
             {"seed", "timezone", "out_dir", "lookback_hours", "data", "schedule", "objective", "report", "models"});
  ExperimentConfig cfg;
  if (!doc.contains("seed")) fail("seed is required", "config");
  if (!doc.at("seed").is_number_integer() || doc.at("seed").get<std::int64_t>() < 0) {
    fail("seed must be a non-negative integer", "config");
  }
  cfg.seed = doc.at("seed").get<std::uint64_t>();
  cfg.timezone = get<std::string>(doc, "timezone", "config", cfg.timezone);
  cfg.out_dir = resolve(base, get<std::string>(doc, "out_dir", "config", "out"));
  cfg.lookback_hours = get_int(doc, "lookback_hours", "config", cfg.lookback_hours);
  if (cfg.lookback_hours < 168) fail("lookback_hours must cover one week (>= 168)", "config");

  if (!doc.contains("data")) fail("missing [data] table", "config");
  const auto& d = doc.at("data");
  check_keys(d, "data", {"load", "weather", "area"});
  if (!d.contains("load")) fail("data.load is required", "data");
  cfg.load_path = resolve(base, get<std::string>(d, "load", "data", ""));
  if (d.contains("weather")) cfg.weather_path = resolve(base, get<std::string>(d, "weather", "data", ""));
  cfg.area = get<std::string>(d, "area", "data", "");

  if (doc.contains("schedule")) {
    const auto& s = doc.at("schedule");
    check_keys(s, "schedule",
               {"mode", "initial_train_days", "refit_days", "val_days", "stride_hours", "horizon_hours",
                "keep_partial"});
    const auto mode = get<std::string>(s, "mode", "schedule", "walkforward");
    if (mode == "walkforward") {
      cfg.mode = backtest::ReportMode::walkforward;
    } else if (mode == "fixed_split") {
      cfg.mode = backtest::ReportMode::fixed_split;
    } else {
      fail("mode must be 'walkforward' or 'fixed_split'", "schedule");
    }
    auto& p = cfg.schedule;
    p.initial_train_days = get_int(s, "initial_train_days", "schedule", p.initial_train_days);
    p.refit_days = get_int(s, "refit_days", "schedule", p.refit_days);
    p.val_days = get_int(s, "val_days", "schedule", p.val_days);
    p.stride_hours = get_int(s, "stride_hours", "schedule", p.stride_hours);
    p.horizon_hours = get_int(s, "horizon_hours", "schedule", p.horizon_hours);
    p.keep_partial = get(s, "keep_partial", "schedule", p.keep_partial);
  }
  cfg.schedule.validate();

  objectives::ObjectiveConfig base_objective;
  if (doc.contains("objective")) base_objective = parse_objective(doc.at("objective"), "objective", base_objective);

  if (doc.contains("report")) {
    const auto& r = doc.at("report");
    check_keys(r, "report", {"percentile", "thresholds"});
    cfg.percentile = get(r, "percentile", "report", cfg.percentile);
    cfg.thresholds = get(r, "thresholds", "report", cfg.thresholds);
    if (!(cfg.percentile >= 0.0 && cfg.percentile <= 100.0)) fail("percentile must lie in [0, 100]", "report");
  }

  if (!doc.contains("models") || !doc.at("models").is_array() || doc.at("models").empty()) {
    fail("at least one [[models]] entry is required", "config");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < doc.at("models").size(); ++i) {
    auto m = parse_model(doc.at("models")[i], "models[" + std::to_string(i) + "]", base_objective, cfg.seed);
    if (!seen.emplace(m.name, m.variant).second) fail("duplicate model name and variant", m.name + "/" + m.variant);
    cfg.models.push_back(std::move(m));
  }
  cfg.canonical = doc;
  return cfg;
}

json read_config_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  if (path.extension() == ".toml") {
    doc = toml_to_json(text, path.string());
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse_error, e.what(), path.string());
    }
  }
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_config_document(path), path.parent_path());
}

}  // namespace gridrisk::cli
