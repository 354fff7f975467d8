#include "gridrisk/backtest/runner.hpp"

#include <algorithm>
#include <numeric>

#include "gridrisk/error.hpp"

namespace gridrisk::backtest {

namespace {

std::vector<std::string> channels_for(const AlignedFrame& frame, const RunOptions& options) {
  auto ids = options.required_channels.empty() ? frame.column_ids() : options.required_channels;
  if (!options.load_channel.empty() && std::find(ids.begin(), ids.end(), options.load_channel) == ids.end()) {
    ids.push_back(options.load_channel);
  }
  return ids;
}

}  // namespace

std::vector<Instant> usable_issue_times(const AlignedFrame& frame, std::span<const Instant> candidates,
                                        std::span<const std::string> channels, int lookback_hours,
                                        int horizon_hours) {
  std::vector<Instant> out;
  for (Instant t : candidates) {
    const TimeRange window{t - data::hours(lookback_hours - 1), t + data::hours(horizon_hours + 1)};
    if (window.begin < frame.range().begin || window.end > frame.range().end) continue;
    if (frame.complete(channels, window)) out.push_back(t);
  }
  return out;
}

forecast::FitWindow fit_window(const AlignedFrame& history, const Fold& fold, const ScheduleParams& params,
                               const RunOptions& options) {
  forecast::FitWindow w;
  w.train = fold.train;
  w.validation = fold.validation;
  w.leads.resize(static_cast<std::size_t>(params.horizon_hours));
  std::iota(w.leads.begin(), w.leads.end(), 1);

  const auto horizon = data::hours(params.horizon_hours);
  const auto stride = data::hours(options.train_stride_hours);
  std::vector<Instant> train, val;
  for (Instant t = fold.train.begin + data::hours(options.lookback_hours - 1); t + horizon < fold.validation.begin;
       t += stride) {
    train.push_back(t);
  }
  for (Instant t = fold.validation.begin - data::kHour; t + horizon < fold.train.end; t += stride) val.push_back(t);

  const auto ids = channels_for(history, options);
  w.train_issues = usable_issue_times(history, train, ids, options.lookback_hours, params.horizon_hours);
  w.validation_issues = usable_issue_times(history, val, ids, options.lookback_hours, params.horizon_hours);
  return w;
}

BacktestResult run_backtest(const AlignedFrame& frame, const WalkForwardSchedule& schedule,
                            const ForecasterFactory& factory, const RunOptions& options) {
  if (!factory) throw Error(ErrorCode::invalid_config, "no forecaster factory");
  const auto ids = channels_for(frame, options);
  std::vector<int> leads(static_cast<std::size_t>(schedule.params.horizon_hours));
  std::iota(leads.begin(), leads.end(), 1);

  BacktestResult result;
  std::vector<QuantileForecastSet> parts;
  for (const auto& fold : schedule.folds) {
    FoldResult fr;
    fr.index = fold.index;
    fr.cutoff = fold.cutoff;
    fr.scheduled_issues = fold.eval_issue_times.size();
    try {
      const auto issues = usable_issue_times(frame, fold.eval_issue_times, ids, options.lookback_hours,
                                             schedule.params.horizon_hours);
      fr.evaluated_issues = issues.size();
      if (!issues.empty()) {
        const AlignedFrame history = frame.slice(fold.train);
        auto model = factory();
        model->fit(history, fit_window(history, fold, schedule.params, options));
        fr.parameters = model->parameters();
        fr.forecasts = model->predict(frame, issues, leads);
        parts.push_back(fr.forecasts);
      }
    } catch (const Error& e) {
      std::string ctx = "fold " + std::to_string(fold.index);
      if (!e.context().empty()) ctx += ": " + e.context();
      throw Error(e.code(), e.what(), ctx);
    }
    result.folds.push_back(std::move(fr));
  }
  if (parts.empty()) throw Error(ErrorCode::insufficient_data, "no fold had a usable evaluation issue time");
  result.forecasts = QuantileForecastSet::concat(parts);
  return result;
}

}  // namespace gridrisk::backtest
