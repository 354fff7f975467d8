#include "gridrisk/policy/asymmetry.hpp"

#include <algorithm>
#include <cmath>

#include "gridrisk/error.hpp"

namespace gridrisk::policy {

SpreadDecomposition spread_decompose(std::span<const double> spreads) {
  SpreadDecomposition out;
  out.spread.assign(spreads.begin(), spreads.end());
  out.s_plus.reserve(spreads.size());
  out.s_minus.reserve(spreads.size());
  for (double s : spreads) {
    out.s_plus.push_back(std::max(0.0, s));
    out.s_minus.push_back(std::max(0.0, -s));
  }
  return out;
}

SpreadDecomposition spread_decompose(const HourlySeries& lmp_da, const HourlySeries& lmp_rt) {
  std::vector<Instant> ts;
  std::vector<double> spreads;
  // Both inputs are sorted; walk them together and keep shared hours.
  auto da_t = lmp_da.timestamps();
  auto rt_t = lmp_rt.timestamps();
  auto da_v = lmp_da.values();
  auto rt_v = lmp_rt.values();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < da_t.size() && j < rt_t.size()) {
    if (da_t[i] < rt_t[j]) {
      ++i;
    } else if (rt_t[j] < da_t[i]) {
      ++j;
    } else {
      ts.push_back(da_t[i]);
      spreads.push_back(rt_v[j] - da_v[i]);
      ++i;
      ++j;
    }
  }
  if (ts.empty()) throw Error(ErrorCode::no_overlap, "DA and RT prices share no hour", lmp_da.id() + " / " + lmp_rt.id());
  SpreadDecomposition out = spread_decompose(spreads);
  out.timestamps = std::move(ts);
  return out;
}

double rho_price(std::span<const double> s_plus, std::span<const double> s_minus) {
  if (s_plus.size() != s_minus.size()) throw Error(ErrorCode::length_mismatch, "spread parts differ in length");
  if (s_plus.empty()) throw Error(ErrorCode::empty_set, "no spread hours");
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t i = 0; i < s_plus.size(); ++i) {
    plus += s_plus[i];
    minus += s_minus[i];
  }
  if (!(minus > 0.0)) throw Error(ErrorCode::degenerate_spread, "no negative spreads; price asymmetry undefined");
  // Equal counts: the ratio of means is the ratio of sums.
  return plus / minus;
}

std::optional<EventRatio> rho_event(std::span<const double> spreads, std::span<const double> actual_load,
                                    std::span<const double> da_forecast, std::size_t min_samples) {
  if (spreads.size() != actual_load.size() || spreads.size() != da_forecast.size()) {
    throw Error(ErrorCode::length_mismatch, "spread, load and forecast lengths differ");
  }
  EventRatio r;
  double under_sum = 0.0;
  double over_sum = 0.0;
  for (std::size_t t = 0; t < spreads.size(); ++t) {
    const double delta = actual_load[t] - da_forecast[t];
    if (delta > 0.0) {
      under_sum += std::max(0.0, spreads[t]);
      ++r.under_hours;
    } else if (delta < 0.0) {
      over_sum += std::max(0.0, -spreads[t]);
      ++r.over_hours;
    }
  }
  const std::size_t need = std::max<std::size_t>(min_samples, 1);
  if (r.under_hours < need || r.over_hours < need) return std::nullopt;
  r.c_under = under_sum / static_cast<double>(r.under_hours);
  r.c_over = over_sum / static_cast<double>(r.over_hours);
  if (!(r.c_over > 0.0)) return std::nullopt;
  r.rho = r.c_under / r.c_over;
  return r;
}

std::optional<EventRatio> rho_event(const SpreadDecomposition& spreads, const HourlySeries& actual_load,
                                    const HourlySeries& da_forecast, std::size_t min_samples) {
  std::vector<double> s;
  std::vector<double> y;
  std::vector<double> f;
  for (std::size_t i = 0; i < spreads.size(); ++i) {
    const Instant t = spreads.timestamps.at(i);
    auto yt = actual_load.at(t);
    auto ft = da_forecast.at(t);
    if (!yt || !ft) continue;
    s.push_back(spreads.spread[i]);
    y.push_back(*yt);
    f.push_back(*ft);
  }
  return rho_event(s, y, f, min_samples);
}

double q_star(double rho) {
  if (!(rho >= 0.0)) throw Error(ErrorCode::negative_rho, "asymmetry ratio must be non-negative");
  return rho / (1.0 + rho);
}

double q_target(double rho_price, double kappa) {
  if (!(kappa >= 1.0)) throw Error(ErrorCode::kappa_below_one, "reliability premium kappa must be >= 1");
  return std::max(0.5, q_star(kappa * rho_price));
}

AsymmetryEstimate estimate_asymmetry(const std::string& node, const HourlySeries& lmp_da, const HourlySeries& lmp_rt,
                                     const HourlySeries* actual_load, const HourlySeries* da_forecast,
                                     const EstimateOptions& options) {
  const auto spreads = spread_decompose(lmp_da, lmp_rt);
  AsymmetryEstimate est;
  est.node = node;
  est.hours = spreads.size();
  est.rho_price = rho_price(spreads.s_plus, spreads.s_minus);
  est.q_price_star = q_star(est.rho_price);
  est.kappa = options.kappa;
  est.q_target = q_target(est.rho_price, options.kappa);
  est.rho_op = options.kappa * est.rho_price;
  if (actual_load != nullptr && da_forecast != nullptr) {
    if (auto ev = rho_event(spreads, *actual_load, *da_forecast, options.min_event_samples)) {
      est.rho_event = ev->rho;
      est.q_event_star = q_star(ev->rho);
    }
  }
  return est;
}

nlohmann::ordered_json to_json(const AsymmetryEstimate& est) {
  nlohmann::ordered_json j;
  j["node"] = est.node;
  j["hours"] = est.hours;
  j["rho_price"] = est.rho_price;
  j["q_price_star"] = est.q_price_star;
  j["rho_event"] = est.rho_event ? nlohmann::ordered_json(*est.rho_event) : nlohmann::ordered_json(nullptr);
  j["q_event_star"] = est.q_event_star ? nlohmann::ordered_json(*est.q_event_star) : nlohmann::ordered_json(nullptr);
  j["kappa"] = est.kappa;
  j["rho_op"] = est.rho_op;
  j["q_target"] = est.q_target;
  return j;
}

double round_ratio(double rho) { return std::round(rho * 1e4) / 1e4; }
double round_level(double q) { return std::round(q * 1e3) / 1e3; }

}  // namespace gridrisk::policy
