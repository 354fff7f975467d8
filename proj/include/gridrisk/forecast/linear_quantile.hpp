#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridrisk/features/feature_matrix.hpp"
#include "gridrisk/metrics/forecast_set.hpp"
#include "gridrisk/objectives/objectives.hpp"

namespace gridrisk::forecast {

using features::FeatureMatrix;
using metrics::QuantileForecastSet;
using objectives::ObjectiveConfig;

enum class InterceptInit { quantiles, zero };

struct FitOptions {
  /// Initial step in units of the training-target standard deviation.
  double step_size = 0.05;
  int epochs = 150;
  std::uint64_t seed = 42;
  /// Issue times per mini-batch; 0 means full batch.
  std::size_t batch_issues = 32;
  /// Early-stopping patience in epochs (validation loss); 0 disables.
  int patience = 60;
  InterceptInit init = InterceptInit::quantiles;
};

/// One linear head per quantile level over the feature columns.
struct LinearQuantileModel {
  std::vector<double> levels;
  double point_level = 0.5;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> weights;  // [level][column], raw feature units
  std::vector<double> intercepts;            // MW
  std::vector<double> training_trace;        // full-set objective (MW) before epoch 1 and after each epoch
  std::vector<double> validation_trace;
  int best_epoch = 0;
  std::string config_hash;
  std::uint64_t seed = 0;

  std::vector<double> parameters() const;
  /// Raw head outputs for one feature row, one per level (may cross).
  std::vector<double> raw_heads(std::span<const double> row) const;
};

/// Subgradient descent on the combined objective with cosine step decay.
/// Features and target are standardized internally on the training rows; the
/// returned model is expressed in raw units. Parameters with the best
/// validation loss (or training loss without validation) are restored.
///
/// Throws DegenerateDesign (too few rows, constant or collinear columns) and
/// DivergedLoss (training loss above 10x its initial value, floored at one step).
LinearQuantileModel fit_quantile_model(const FeatureMatrix& train, const ObjectiveConfig& cfg, const FitOptions& opt,
                                       const FeatureMatrix* validation = nullptr);

/// Sorts the heads of each point so levels never cross.
QuantileForecastSet predict_quantiles(const LinearQuantileModel& model, const FeatureMatrix& features);

/// Per-point level sort of a prediction tensor with `levels` innermost.
void sort_levels(std::vector<double>& predictions, std::size_t level_count);

/// {quantiles, columns, weights, intercepts, config_hash, seed, point_level}
nlohmann::ordered_json to_json(const LinearQuantileModel& model);
LinearQuantileModel linear_model_from_json(const nlohmann::ordered_json& j);

}  // namespace gridrisk::forecast
