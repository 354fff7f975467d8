#include "gridrisk/forecast/forecaster.hpp"

#include "gridrisk/error.hpp"
#include "gridrisk/forecast/seasonal_naive.hpp"

namespace gridrisk::forecast {

namespace {

features::FeatureMatrix complete_matrix(const AlignedFrame& frame, const features::FeatureSpec& spec,
                                        std::span<const Instant> issues, std::span<const int> leads) {
  auto m = features::build_feature_matrix(frame, spec, issues, leads);
  if (!m.skipped_issue_times.empty()) {
    throw Error(ErrorCode::gap_in_window, "features incomplete at a requested issue time",
                data::format_timestamp(m.skipped_issue_times.front()));
  }
  return m;
}

features::FeatureMatrix training_matrix(const AlignedFrame& history, const features::FeatureSpec& spec,
                                        std::span<const Instant> issues, std::span<const int> leads) {
  auto m = features::build_feature_matrix(history, spec, issues, leads);
  if (m.rows() == 0) throw Error(ErrorCode::insufficient_data, "no complete training rows in the fold");
  return m;
}

}  // namespace

features::FeatureSpec make_feature_spec(const AlignedFrame& history, const FeatureOptions& options) {
  if (!history.has(options.load_channel)) {
    throw Error(ErrorCode::invalid_config, "load channel not in frame", options.load_channel);
  }
  features::FeatureSpec spec;
  spec.load_channel = options.load_channel;
  spec.include_time_features = options.include_time_features;
  spec.tz = features::TimeZone::named(options.tz);

  std::vector<std::string> candidates = options.weather_channels;
  if (candidates.empty()) {
    for (const auto& [id, col] : history.columns()) {
      if (data::is_weather(col.kind)) candidates.push_back(id);
    }
  }
  const auto load = history.to_series(options.load_channel);
  for (const auto& id : candidates) {
    if (!history.has(id)) throw Error(ErrorCode::invalid_config, "weather channel not in frame", id);
    try {
      spec.profile.entries[id] = features::lag_scan(history.to_series(id), load, options.max_lag);
      spec.weather_channels.push_back(id);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::constant_series) throw;
    }
  }
  return spec;
}

QuantileForecastSet SeasonalNaiveForecaster::predict(const AlignedFrame& frame, std::span<const Instant> issues,
                                                     std::span<const int> leads) const {
  const auto history = frame.to_series(load_);
  const int horizon = leads.empty() ? 0 : leads.back();
  std::vector<double> preds, actuals;
  for (Instant t : issues) {
    const auto path = seasonal_naive(history, t, horizon);
    for (int h : leads) {
      preds.push_back(path[static_cast<std::size_t>(h - 1)]);
      auto y = frame.value(load_, t + data::hours(h));
      if (!y) throw Error(ErrorCode::gap_in_window, "actual missing at target hour", data::format_timestamp(t + data::hours(h)));
      actuals.push_back(*y);
    }
  }
  return QuantileForecastSet({issues.begin(), issues.end()}, {leads.begin(), leads.end()}, {0.5}, std::move(preds),
                             std::move(actuals));
}

LinearQuantileForecaster::LinearQuantileForecaster(FeatureOptions features, ObjectiveConfig objective, FitOptions fit)
    : features_(std::move(features)), objective_(std::move(objective)), fit_(fit) {
  objective_.validate();
}

void LinearQuantileForecaster::fit(const AlignedFrame& history, const FitWindow& window) {
  spec_ = make_feature_spec(history, features_);
  const auto train = training_matrix(history, *spec_, window.train_issues, window.leads);
  std::optional<features::FeatureMatrix> val;
  if (!window.validation_issues.empty()) {
    val = features::build_feature_matrix(history, *spec_, window.validation_issues, window.leads);
  }
  model_ = fit_quantile_model(train, objective_, fit_, val ? &*val : nullptr);
}

QuantileForecastSet LinearQuantileForecaster::predict(const AlignedFrame& frame, std::span<const Instant> issues,
                                                      std::span<const int> leads) const {
  const auto m = complete_matrix(frame, spec(), issues, leads);
  return predict_quantiles(model(), m);
}

std::vector<double> LinearQuantileForecaster::parameters() const { return model().parameters(); }

const LinearQuantileModel& LinearQuantileForecaster::model() const {
  if (!model_) throw Error(ErrorCode::invalid_argument, "forecaster used before fit");
  return *model_;
}

const features::FeatureSpec& LinearQuantileForecaster::spec() const {
  if (!spec_) throw Error(ErrorCode::invalid_argument, "forecaster used before fit");
  return *spec_;
}

GaussianLinearForecaster::GaussianLinearForecaster(FeatureOptions features, std::vector<double> levels, FitOptions fit)
    : features_(std::move(features)), levels_(std::move(levels)), fit_(fit) {}

void GaussianLinearForecaster::fit(const AlignedFrame& history, const FitWindow& window) {
  spec_ = make_feature_spec(history, features_);
  model_ = fit_gaussian_model(training_matrix(history, *spec_, window.train_issues, window.leads), fit_);
}

QuantileForecastSet GaussianLinearForecaster::predict(const AlignedFrame& frame, std::span<const Instant> issues,
                                                      std::span<const int> leads) const {
  return predict_gaussian(model(), complete_matrix(frame, spec(), issues, leads), levels_);
}

std::vector<double> GaussianLinearForecaster::parameters() const { return model().parameters(); }

const GaussianLinearModel& GaussianLinearForecaster::model() const {
  if (!model_) throw Error(ErrorCode::invalid_argument, "forecaster used before fit");
  return *model_;
}

const features::FeatureSpec& GaussianLinearForecaster::spec() const {
  if (!spec_) throw Error(ErrorCode::invalid_argument, "forecaster used before fit");
  return *spec_;
}

}  // namespace gridrisk::forecast
