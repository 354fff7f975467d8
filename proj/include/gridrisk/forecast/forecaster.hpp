#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridrisk/data/series.hpp"
#include "gridrisk/forecast/gaussian_linear.hpp"
#include "gridrisk/forecast/linear_quantile.hpp"

namespace gridrisk::forecast {

using data::AlignedFrame;
using data::Instant;
using data::TimeRange;

/// What a fold hands its model: the history (already cut at the fold's last
/// training hour) and the issue times used for fitting and early stopping.
struct FitWindow {
  TimeRange train;
  TimeRange validation;
  std::vector<Instant> train_issues;
  std::vector<Instant> validation_issues;
  std::vector<int> leads;
};

class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string name() const = 0;
  virtual void fit(const AlignedFrame& history, const FitWindow& window) = 0;
  /// Quantiles for every (issue, lead); actuals are read from `frame`.
  virtual QuantileForecastSet predict(const AlignedFrame& frame, std::span<const Instant> issues,
                                      std::span<const int> leads) const = 0;
  virtual std::vector<double> parameters() const = 0;
};

using ForecasterFactory = std::function<std::unique_ptr<Forecaster>()>;

/// Settings shared by the feature-based forecasters.
struct FeatureOptions {
  std::string load_channel;
  /// Frame columns used as weather covariates; empty means every weather column.
  std::vector<std::string> weather_channels;
  int max_lag = 12;
  std::string tz = "UTC";
  bool include_time_features = true;
};

class SeasonalNaiveForecaster final : public Forecaster {
 public:
  explicit SeasonalNaiveForecaster(std::string load_channel) : load_(std::move(load_channel)) {}
  std::string name() const override { return "seasonal_naive"; }
  void fit(const AlignedFrame&, const FitWindow&) override {}
  QuantileForecastSet predict(const AlignedFrame& frame, std::span<const Instant> issues,
                              std::span<const int> leads) const override;
  std::vector<double> parameters() const override { return {}; }

 private:
  std::string load_;
};

class LinearQuantileForecaster final : public Forecaster {
 public:
  LinearQuantileForecaster(FeatureOptions features, ObjectiveConfig objective, FitOptions fit);
  std::string name() const override { return "linear_quantile"; }
  void fit(const AlignedFrame& history, const FitWindow& window) override;
  QuantileForecastSet predict(const AlignedFrame& frame, std::span<const Instant> issues,
                              std::span<const int> leads) const override;
  std::vector<double> parameters() const override;

  const LinearQuantileModel& model() const;
  const features::FeatureSpec& spec() const;

 private:
  FeatureOptions features_;
  ObjectiveConfig objective_;
  FitOptions fit_;
  std::optional<features::FeatureSpec> spec_;
  std::optional<LinearQuantileModel> model_;
};

class GaussianLinearForecaster final : public Forecaster {
 public:
  GaussianLinearForecaster(FeatureOptions features, std::vector<double> levels, FitOptions fit);
  std::string name() const override { return "gaussian_linear"; }
  void fit(const AlignedFrame& history, const FitWindow& window) override;
  QuantileForecastSet predict(const AlignedFrame& frame, std::span<const Instant> issues,
                              std::span<const int> leads) const override;
  std::vector<double> parameters() const override;

  const GaussianLinearModel& model() const;
  const features::FeatureSpec& spec() const;

 private:
  FeatureOptions features_;
  std::vector<double> levels_;
  FitOptions fit_;
  std::optional<features::FeatureSpec> spec_;
  std::optional<GaussianLinearModel> model_;
};

/// Lag profile fitted on `history` and the resulting feature spec. Weather
/// columns that are constant there are left out.
features::FeatureSpec make_feature_spec(const AlignedFrame& history, const FeatureOptions& options);

}  // namespace gridrisk::forecast
