#include "gridrisk/metrics/risk_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gridrisk/error.hpp"

namespace gridrisk::metrics {

namespace {

void require_pairs(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size()) {
    throw Error(ErrorCode::length_mismatch, "actual and forecast lengths differ: " +
                                                std::to_string(actual.size()) + " vs " +
                                                std::to_string(forecast.size()));
  }
  if (actual.empty()) throw Error(ErrorCode::empty_set, "no points to score");
}

}  // namespace

double mape(std::span<const double> actual, std::span<const double> forecast) {
  require_pairs(actual, forecast);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!(actual[i] > 0.0)) {
      throw Error(ErrorCode::non_positive_actual, "MAPE needs strictly positive actuals", "index " + std::to_string(i));
    }
    sum += std::abs(actual[i] - forecast[i]) / actual[i];
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

DirectionRates direction_rates(std::span<const double> actual, std::span<const double> forecast) {
  require_pairs(actual, forecast);
  std::size_t under = 0;
  std::size_t over = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] > forecast[i]) {
      ++under;
    } else if (forecast[i] > actual[i]) {
      ++over;
    }
  }
  const auto n = static_cast<double>(actual.size());
  DirectionRates r;
  r.upr_pct = 100.0 * static_cast<double>(under) / n;
  r.opr_pct = 100.0 * static_cast<double>(over) / n;
  const std::size_t ties = actual.size() - under - over;
  r.tie_pct = 100.0 * static_cast<double>(ties) / n;
  // Rounding can leave the sum an ulp off 100. One share (largest first) is
  // replaced by the complement of the other two and walked by ulps until the
  // left-to-right sum is exact.
  const auto sum = [&r] { return r.upr_pct + r.opr_pct + r.tie_pct; };
  if (sum() != 100.0) {
    std::array<std::pair<std::size_t, double*>, 3> shares{
        {{under, &r.upr_pct}, {over, &r.opr_pct}, {ties, &r.tie_pct}}};
    std::stable_sort(shares.begin(), shares.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& [count, share] : shares) {
      if (count == 0) continue;
      const double keep = *share;
      *share = 0.0;
      const double start = 100.0 - sum();
      *share = start;
      for (int k = 0; k < 16 && sum() != 100.0; ++k) {
        *share = std::nextafter(*share, sum() < 100.0 ? 200.0 : -1.0);
      }
      if (sum() == 100.0) break;
      *share = keep;
    }
  }
  return r;
}

double bias_at_horizon(const QuantileForecastSet& fs, int h_star) {
  auto l = fs.lead_index(h_star);
  if (!l) throw Error(ErrorCode::missing_lead, "h_star not among lead hours: " + std::to_string(h_star));
  if (fs.issue_count() == 0) throw Error(ErrorCode::empty_set, "no issue times");
  double sum = 0.0;
  for (std::size_t i = 0; i < fs.issue_count(); ++i) sum += fs.point(i, *l) - fs.actual(i, *l);
  return sum / static_cast<double>(fs.issue_count());
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::empty_set, "percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw Error(ErrorCode::invalid_argument, "percentile p outside [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = static_cast<double>(sorted.size() - 1) * p / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double reserve(std::span<const double> actual, std::span<const double> forecast, double p, ReserveBasis basis) {
  require_pairs(actual, forecast);
  std::vector<double> clipped(actual.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double err = actual[i] - forecast[i];
    if (basis == ReserveBasis::mw) {
      clipped[i] = std::max(0.0, err);
    } else {
      if (!(forecast[i] > 0.0)) {
        throw Error(ErrorCode::non_positive_forecast, "percent reserve needs positive point forecasts",
                    "index " + std::to_string(i));
      }
      clipped[i] = std::max(0.0, err / forecast[i]);
    }
  }
  const double v = percentile(clipped, p);
  return basis == ReserveBasis::mw ? v : 100.0 * v;
}

double reserve(const QuantileForecastSet& fs, double p, ReserveBasis basis, std::span<const int> leads) {
  auto pts = fs.scored_points(leads);
  return reserve(pts.actual, pts.forecast, p, basis);
}

LargeErrorCounts large_error_counts(std::span<const double> actual, std::span<const double> forecast,
                                    std::span<const double> thresholds) {
  if (actual.size() != forecast.size()) throw Error(ErrorCode::length_mismatch, "actual and forecast lengths differ");
  LargeErrorCounts counts;
  for (double t : thresholds) {
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "thresholds must be positive");
    counts[t] = 0;
  }
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = std::abs(actual[i] - forecast[i]);
    for (auto& [t, c] : counts) {
      if (e > t) ++c;
    }
  }
  return counts;
}

LargeErrorCounts large_error_counts(const QuantileForecastSet& fs, std::span<const double> thresholds,
                                    std::span<const int> leads) {
  auto pts = fs.scored_points(leads);
  return large_error_counts(pts.actual, pts.forecast, thresholds);
}

}  // namespace gridrisk::metrics
