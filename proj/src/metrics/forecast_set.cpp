#include "gridrisk/metrics/forecast_set.hpp"

#include <algorithm>
#include <cmath>

#include "gridrisk/error.hpp"

namespace gridrisk::metrics {

QuantileForecastSet::QuantileForecastSet(std::vector<Instant> issue_times, std::vector<int> lead_hours,
                                         std::vector<double> levels, std::vector<double> predictions,
                                         std::vector<double> actuals, double point_level)
    : issue_times_(std::move(issue_times)),
      lead_hours_(std::move(lead_hours)),
      levels_(std::move(levels)),
      predictions_(std::move(predictions)),
      actuals_(std::move(actuals)),
      point_level_(point_level) {
  if (levels_.empty()) throw Error(ErrorCode::shape_mismatch, "no quantile levels");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(levels_[i] > 0.0 && levels_[i] < 1.0)) throw Error(ErrorCode::invalid_level, "level outside (0,1)");
    if (i > 0 && !(levels_[i] > levels_[i - 1])) {
      throw Error(ErrorCode::invalid_level, "levels must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < lead_hours_.size(); ++i) {
    if (lead_hours_[i] < 1 || (i > 0 && lead_hours_[i] <= lead_hours_[i - 1])) {
      throw Error(ErrorCode::shape_mismatch, "lead hours must be positive and strictly increasing");
    }
  }
  for (std::size_t i = 1; i < issue_times_.size(); ++i) {
    if (issue_times_[i] <= issue_times_[i - 1]) {
      throw Error(ErrorCode::shape_mismatch, "issue times must be strictly increasing");
    }
  }
  if (predictions_.size() != issue_times_.size() * lead_hours_.size() * levels_.size()) {
    throw Error(ErrorCode::shape_mismatch, "prediction tensor does not match [issue x lead x level]");
  }
  if (actuals_.size() != issue_times_.size() * lead_hours_.size()) {
    throw Error(ErrorCode::shape_mismatch, "actuals do not match [issue x lead]");
  }
  auto idx = level_index(point_level_);
  if (!idx) throw Error(ErrorCode::invalid_level, "point level is not among the quantile levels");
  point_index_ = *idx;
}

std::optional<std::size_t> QuantileForecastSet::lead_index(int lead_hour) const {
  auto it = std::lower_bound(lead_hours_.begin(), lead_hours_.end(), lead_hour);
  if (it == lead_hours_.end() || *it != lead_hour) return std::nullopt;
  return static_cast<std::size_t>(it - lead_hours_.begin());
}

std::optional<std::size_t> QuantileForecastSet::level_index(double level) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (std::abs(levels_[i] - level) < 1e-12) return i;
  }
  return std::nullopt;
}

bool QuantileForecastSet::non_crossing() const {
  const std::size_t q = levels_.size();
  for (std::size_t p = 0; p < point_count(); ++p) {
    for (std::size_t k = 1; k < q; ++k) {
      if (predictions_[p * q + k] < predictions_[p * q + k - 1]) return false;
    }
  }
  return true;
}

QuantileForecastSet QuantileForecastSet::with_predictions(std::vector<double> predictions) const {
  return QuantileForecastSet(issue_times_, lead_hours_, levels_, std::move(predictions), actuals_, point_level_);
}

ScoredPoints QuantileForecastSet::scored_points(std::span<const int> leads) const {
  std::vector<std::size_t> lead_idx;
  if (leads.empty()) {
    for (std::size_t l = 0; l < lead_hours_.size(); ++l) lead_idx.push_back(l);
  } else {
    for (int h : leads) {
      auto l = lead_index(h);
      if (!l) throw Error(ErrorCode::missing_lead, "lead hour not in forecast set: " + std::to_string(h));
      lead_idx.push_back(*l);
    }
  }
  ScoredPoints out;
  out.actual.reserve(issue_count() * lead_idx.size());
  out.forecast.reserve(issue_count() * lead_idx.size());
  for (std::size_t i = 0; i < issue_count(); ++i) {
    for (std::size_t l : lead_idx) {
      out.actual.push_back(actual(i, l));
      out.forecast.push_back(point(i, l));
    }
  }
  return out;
}

QuantileForecastSet QuantileForecastSet::issue_slice(std::size_t first, std::size_t count) const {
  if (first + count > issue_count()) throw Error(ErrorCode::invalid_argument, "issue slice out of range");
  const std::size_t per_issue_pred = lead_count() * level_count();
  const std::size_t per_issue_act = lead_count();
  auto ib = issue_times_.begin() + static_cast<std::ptrdiff_t>(first);
  auto pb = predictions_.begin() + static_cast<std::ptrdiff_t>(first * per_issue_pred);
  auto ab = actuals_.begin() + static_cast<std::ptrdiff_t>(first * per_issue_act);
  return QuantileForecastSet(std::vector<Instant>(ib, ib + static_cast<std::ptrdiff_t>(count)), lead_hours_, levels_,
                             std::vector<double>(pb, pb + static_cast<std::ptrdiff_t>(count * per_issue_pred)),
                             std::vector<double>(ab, ab + static_cast<std::ptrdiff_t>(count * per_issue_act)),
                             point_level_);
}

QuantileForecastSet QuantileForecastSet::concat(std::span<const QuantileForecastSet> parts) {
  if (parts.empty()) throw Error(ErrorCode::empty_set, "nothing to concatenate");
  const auto& head = parts.front();
  std::vector<Instant> issues;
  std::vector<double> preds;
  std::vector<double> acts;
  for (const auto& p : parts) {
    if (p.lead_hours_ != head.lead_hours_ || p.levels_ != head.levels_ || p.point_level_ != head.point_level_) {
      throw Error(ErrorCode::shape_mismatch, "forecast sets differ in leads or levels");
    }
    issues.insert(issues.end(), p.issue_times_.begin(), p.issue_times_.end());
    preds.insert(preds.end(), p.predictions_.begin(), p.predictions_.end());
    acts.insert(acts.end(), p.actuals_.begin(), p.actuals_.end());
  }
  return QuantileForecastSet(std::move(issues), head.lead_hours_, head.levels_, std::move(preds), std::move(acts),
                             head.point_level_);
}

}  // namespace gridrisk::metrics
