#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridrisk/backtest/report.hpp"
#include "gridrisk/backtest/schedule.hpp"
#include "gridrisk/forecast/linear_quantile.hpp"
#include "gridrisk/objectives/objectives.hpp"

namespace gridrisk::cli {

enum class ModelKind { seasonal_naive, linear_quantile, gaussian_linear };

std::string_view to_string(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::linear_quantile;
  std::string name;      // defaults to the kind
  std::string variant = "default";
  objectives::ObjectiveConfig objective;
  forecast::FitOptions fit;
  int max_lag = 12;
  /// Weather columns (without the area prefix); empty means all of them.
  std::vector<std::string> weather;
  bool time_features = true;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string timezone = "UTC";
  std::filesystem::path load_path;
  std::optional<std::filesystem::path> weather_path;
  /// Area key of the load file; empty picks the only area present.
  std::string area;
  backtest::ReportMode mode = backtest::ReportMode::walkforward;
  backtest::ScheduleParams schedule;
  std::vector<ModelConfig> models;
  std::filesystem::path out_dir = "out";
  double percentile = 99.5;
  std::vector<double> thresholds{1000.0, 1500.0, 2000.0};
  int lookback_hours = 240;

  /// The normalized configuration that was parsed; hashed for provenance.
  nlohmann::json canonical;
  std::string hash() const;
};

/// Parses TOML (by extension .toml) or JSON. Unknown keys, missing seed and
/// out-of-range values throw InvalidConfig; malformed syntax throws
/// ParseError. Relative paths resolve against the file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

/// The raw document (TOML by extension .toml, else JSON), before validation.
nlohmann::json read_config_document(const std::filesystem::path& path);

/// Same from an already-parsed document; `base` resolves relative paths.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base);

/// TOML text to the equivalent JSON document.
nlohmann::json toml_to_json(const std::string& text, const std::string& source);

}  // namespace gridrisk::cli
