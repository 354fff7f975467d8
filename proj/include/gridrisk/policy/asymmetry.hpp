#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridrisk/data/series.hpp"

namespace gridrisk::policy {

using data::HourlySeries;
using data::Instant;

/// Hourly real-time minus day-ahead price, split into positive and negative
/// parts on the hours where both prices exist.
struct SpreadDecomposition {
  std::vector<Instant> timestamps;
  std::vector<double> spread;
  std::vector<double> s_plus;
  std::vector<double> s_minus;
  std::size_t size() const { return spread.size(); }
};

/// Throws NoOverlap when the two price series share no hour.
SpreadDecomposition spread_decompose(const HourlySeries& lmp_da, const HourlySeries& lmp_rt);
SpreadDecomposition spread_decompose(std::span<const double> spreads);

/// E[s+] / E[s-]. Throws DegenerateSpread when E[s-] = 0.
double rho_price(std::span<const double> s_plus, std::span<const double> s_minus);

struct EventRatio {
  double c_under = 0.0;
  double c_over = 0.0;
  double rho = 0.0;
  std::size_t under_hours = 0;
  std::size_t over_hours = 0;
};

/// E[s+ | load - DA forecast > 0] / E[s- | load - DA forecast < 0].
/// Absent when either side has fewer than `min_samples` hours or C_over = 0.
std::optional<EventRatio> rho_event(std::span<const double> spreads, std::span<const double> actual_load,
                                    std::span<const double> da_forecast, std::size_t min_samples = 100);

/// Aligns the spread decomposition with load actuals and the DA load forecast
/// by timestamp before applying the vector overload.
std::optional<EventRatio> rho_event(const SpreadDecomposition& spreads, const HourlySeries& actual_load,
                                    const HourlySeries& da_forecast, std::size_t min_samples = 100);

/// rho / (1 + rho). Throws NegativeRho.
double q_star(double rho);

/// max(0.5, q_star(kappa * rho_price)). Throws KappaBelowOne.
double q_target(double rho_price, double kappa);

struct AsymmetryEstimate {
  std::string node;
  std::size_t hours = 0;
  double rho_price = 0.0;
  double q_price_star = 0.0;
  std::optional<double> rho_event;
  std::optional<double> q_event_star;
  double kappa = 1.0;
  double rho_op = 0.0;
  double q_target = 0.5;
};

struct EstimateOptions {
  double kappa = 1.0;
  std::size_t min_event_samples = 100;
};

AsymmetryEstimate estimate_asymmetry(const std::string& node, const HourlySeries& lmp_da, const HourlySeries& lmp_rt,
                                     const HourlySeries* actual_load, const HourlySeries* da_forecast,
                                     const EstimateOptions& options = {});

/// {node, hours, rho_price, q_price_star, rho_event|null, q_event_star|null,
///  kappa, rho_op, q_target}
nlohmann::ordered_json to_json(const AsymmetryEstimate& est);

/// Rounds to the decimals shown in the tables (4 for ratios, 3 for levels).
double round_ratio(double rho);
double round_level(double q);

}  // namespace gridrisk::policy
