#pragma once

#include <nlohmann/json.hpp>

#include "gridrisk/forecast/linear_quantile.hpp"

namespace gridrisk::forecast {

/// mu = a.x + a0, sigma^2 = softplus(v.x + v0), fit by Gaussian NLL. Weights
/// are kept in standardized units together with the standardizer.
struct GaussianLinearModel {
  std::vector<std::string> columns;
  std::vector<double> feature_mean, feature_scale;
  double y_mean = 0.0, y_scale = 1.0;
  std::vector<double> mean_weights, var_weights;
  double mean_bias = 0.0, var_bias = 0.0;
  std::vector<double> training_trace;  // mean NLL in standardized units

  struct Moments {
    double mean;
    double variance;
  };
  Moments moments(std::span<const double> row) const;
  std::vector<double> parameters() const;
};

GaussianLinearModel fit_gaussian_model(const FeatureMatrix& train, const FitOptions& opt);

/// Quantiles mu + sigma z_q at each level; sorted by construction.
QuantileForecastSet predict_gaussian(const GaussianLinearModel& model, const FeatureMatrix& features,
                                     std::span<const double> levels, double point_level = 0.5);

nlohmann::ordered_json to_json(const GaussianLinearModel& model);

}  // namespace gridrisk::forecast
