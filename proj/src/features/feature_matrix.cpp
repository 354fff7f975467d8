#include "gridrisk/features/feature_matrix.hpp"

#include <string>

#include "gridrisk/error.hpp"

namespace gridrisk::features {

using data::hours;
using data::Instant;

Instant LoadLag::resolve(Instant issue, int lead) const {
  Instant t{};
  switch (kind) {
    case Kind::from_issue:
      t = issue - hours(offset);
      break;
    case Kind::same_hour_day: {
      const int back = 24 * ((lead + 23) / 24);
      t = issue + hours(lead) - hours(back);
      break;
    }
    case Kind::same_hour_week:
      t = issue + hours(lead) - hours(168);
      break;
  }
  if (t > issue) {
    throw Error(ErrorCode::leakage, "load-history column " + name() + " reads after the issue time at lead " +
                                        std::to_string(lead));
  }
  return t;
}

std::string LoadLag::name() const {
  switch (kind) {
    case Kind::from_issue:
      return offset == 0 ? "load_t" : "load_t-" + std::to_string(offset);
    case Kind::same_hour_day:
      return "load_same_hour_prev_day";
    case Kind::same_hour_week:
      return "load_same_hour_prev_week";
  }
  return "load";
}

std::vector<std::string> FeatureSpec::column_names() const {
  std::vector<std::string> names;
  for (const auto& lag : load_lags) names.push_back(lag.name());
  for (const auto& w : weather_channels) names.push_back(w + "@lag" + std::to_string(profile.lag_for(w)));
  if (include_time_features) {
    for (const char* n : {"hour_sin", "hour_cos", "dow_sin", "dow_cos"}) names.emplace_back(n);
  }
  return names;
}

std::vector<bool> FeatureSpec::future_weather_flags() const {
  std::vector<bool> flags(load_lags.size(), false);
  flags.insert(flags.end(), weather_channels.size(), true);
  if (include_time_features) flags.insert(flags.end(), 4, false);
  return flags;
}

FeatureRow lag_align(const AlignedFrame& frame, const FeatureSpec& spec, Instant issue, int lead) {
  if (lead < 1) throw Error(ErrorCode::invalid_argument, "lead must be >= 1");
  FeatureRow row;
  row.issue = issue;
  row.lead = lead;
  row.target_time = issue + hours(lead);

  auto need = [&](const std::string& id, Instant t) {
    auto v = frame.value(id, t);
    if (!v) {
      throw Error(ErrorCode::gap_in_window, "absent cell needed for features", id + " @ " + data::format_timestamp(t));
    }
    return *v;
  };

  for (const auto& lag : spec.load_lags) row.values.push_back(need(spec.load_channel, lag.resolve(issue, lead)));
  for (const auto& w : spec.weather_channels) {
    const int tau = spec.profile.lag_for(w);
    row.values.push_back(need(w, row.target_time - hours(tau)));
  }
  if (spec.include_time_features) {
    const auto enc = time_features(row.target_time, spec.tz);
    row.values.insert(row.values.end(), {enc.hour_sin, enc.hour_cos, enc.dow_sin, enc.dow_cos});
  }
  return row;
}

FeatureMatrix FeatureMatrix::issue_slice(std::size_t first, std::size_t count) const {
  if (first + count > issue_times.size()) throw Error(ErrorCode::invalid_argument, "issue slice out of range");
  FeatureMatrix out;
  out.columns = columns;
  out.future_weather = future_weather;
  out.leads = leads;
  out.issue_times.assign(issue_times.begin() + static_cast<std::ptrdiff_t>(first),
                         issue_times.begin() + static_cast<std::ptrdiff_t>(first + count));
  const std::size_t r0 = first * leads.size();
  const std::size_t r1 = (first + count) * leads.size();
  out.target.assign(target.begin() + static_cast<std::ptrdiff_t>(r0), target.begin() + static_cast<std::ptrdiff_t>(r1));
  out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(r0 * cols()),
                    values.begin() + static_cast<std::ptrdiff_t>(r1 * cols()));
  return out;
}

FeatureMatrix build_feature_matrix(const AlignedFrame& frame, const FeatureSpec& spec,
                                   std::span<const Instant> issue_times, std::span<const int> leads) {
  FeatureMatrix m;
  m.columns = spec.column_names();
  m.future_weather = spec.future_weather_flags();
  m.leads.assign(leads.begin(), leads.end());

  std::vector<double> issue_values;
  std::vector<double> issue_targets;
  for (Instant t : issue_times) {
    issue_values.clear();
    issue_targets.clear();
    bool ok = true;
    for (int h : leads) {
      auto y = frame.value(spec.load_channel, t + hours(h));
      if (!y) {
        ok = false;
        break;
      }
      try {
        auto row = lag_align(frame, spec, t, h);
        issue_values.insert(issue_values.end(), row.values.begin(), row.values.end());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::gap_in_window) throw;
        ok = false;
        break;
      }
      issue_targets.push_back(*y);
    }
    if (!ok) {
      m.skipped_issue_times.push_back(t);
      continue;
    }
    m.issue_times.push_back(t);
    m.values.insert(m.values.end(), issue_values.begin(), issue_values.end());
    m.target.insert(m.target.end(), issue_targets.begin(), issue_targets.end());
  }
  return m;
}

FeatureMatrix target_only_matrix(std::span<const double> targets) {
  FeatureMatrix m;
  m.leads = {1};
  m.target.assign(targets.begin(), targets.end());
  m.issue_times.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) m.issue_times.push_back(data::from_unix(static_cast<std::int64_t>(i) * 3600));
  return m;
}

}  // namespace gridrisk::features
