#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridrisk/data/series.hpp"

namespace gridrisk::features {

using data::HourlySeries;

struct LagEntry {
  int lag_hours = 0;
  double pearson_r = 0.0;
  /// Correlation at lags 0..max_lag.
  std::vector<double> curve;
};

/// Optimal thermal lag per covariate id.
struct LagProfile {
  std::map<std::string, LagEntry> entries;

  int lag_for(const std::string& covariate) const;
  bool contains(const std::string& covariate) const { return entries.contains(covariate); }
};

/// Pearson correlation of two equal-length samples. Throws ConstantSeries if
/// either has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Correlates covariate w at t - tau with load at t for tau = 0..max_lag on
/// the hours where both exist, and picks argmax |rho| (first lag on ties).
/// Each lag needs at least `min_overlap` pairs.
LagEntry lag_scan(const HourlySeries& covariate, const HourlySeries& load, int max_lag = 12,
                  std::size_t min_overlap = 48);

/// {"<covariate>": {lag_hours, pearson_r, curve: [...]}, ...}
nlohmann::ordered_json to_json(const LagProfile& profile);
LagProfile lag_profile_from_json(const nlohmann::ordered_json& j);

}  // namespace gridrisk::features
