#include "gridrisk/features/lag_scan.hpp"

#include <cmath>
#include <string>

#include "gridrisk/error.hpp"

namespace gridrisk::features {

int LagProfile::lag_for(const std::string& covariate) const {
  auto it = entries.find(covariate);
  if (it == entries.end()) throw Error(ErrorCode::invalid_argument, "no lag fitted for covariate", covariate);
  return it->second.lag_hours;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::length_mismatch, "correlation inputs differ in length");
  if (x.size() < 2) throw Error(ErrorCode::insufficient_overlap, "correlation needs at least two pairs");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double tol = 1e-20 * n;
  if (sxx <= tol * std::max(1.0, mx * mx) || syy <= tol * std::max(1.0, my * my)) {
    throw Error(ErrorCode::constant_series, "series is constant on the overlap");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LagEntry lag_scan(const HourlySeries& covariate, const HourlySeries& load, int max_lag, std::size_t min_overlap) {
  if (max_lag < 0) throw Error(ErrorCode::invalid_argument, "max_lag must be non-negative");
  LagEntry out;
  double best = -1.0;
  auto load_t = load.timestamps();
  auto load_v = load.values();
  for (int tau = 0; tau <= max_lag; ++tau) {
    std::vector<double> w;
    std::vector<double> l;
    w.reserve(load_t.size());
    l.reserve(load_t.size());
    for (std::size_t i = 0; i < load_t.size(); ++i) {
      if (auto wv = covariate.at(load_t[i] - data::hours(tau))) {
        w.push_back(*wv);
        l.push_back(load_v[i]);
      }
    }
    if (w.size() < min_overlap) {
      throw Error(ErrorCode::insufficient_overlap,
                  "only " + std::to_string(w.size()) + " overlapping hours at lag " + std::to_string(tau),
                  covariate.id());
    }
    double r = 0.0;
    try {
      r = pearson(w, l);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), covariate.id() + " vs " + load.id());
    }
    out.curve.push_back(r);
    if (std::abs(r) > best) {
      best = std::abs(r);
      out.lag_hours = tau;
      out.pearson_r = r;
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const LagProfile& profile) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [id, e] : profile.entries) {
    j[id] = {{"lag_hours", e.lag_hours}, {"pearson_r", e.pearson_r}, {"curve", e.curve}};
  }
  return j;
}

LagProfile lag_profile_from_json(const nlohmann::ordered_json& j) {
  LagProfile p;
  try {
    for (const auto& [id, e] : j.items()) {
      LagEntry entry;
      entry.lag_hours = e.at("lag_hours").get<int>();
      entry.pearson_r = e.value("pearson_r", 0.0);
      if (e.contains("curve")) entry.curve = e.at("curve").get<std::vector<double>>();
      p.entries.emplace(id, std::move(entry));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::parse_error, std::string("malformed lag profile: ") + ex.what());
  }
  return p;
}

}  // namespace gridrisk::features
