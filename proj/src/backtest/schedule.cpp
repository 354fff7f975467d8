#include "gridrisk/backtest/schedule.hpp"

#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "gridrisk/error.hpp"

namespace gridrisk::backtest {

void ScheduleParams::validate() const {
  auto fail = [](const char* msg) { throw Error(ErrorCode::invalid_config, msg); };
  if (initial_train_days < 1) fail("initial_train_days must be positive");
  if (refit_days < 1) fail("refit_days must be positive");
  if (val_days < 1 || val_days >= initial_train_days) fail("val_days must be positive and below initial_train_days");
  if (stride_hours < 1) fail("stride_hours must be positive");
  if (horizon_hours < 1) fail("horizon_hours must be positive");
}

std::size_t WalkForwardSchedule::issue_count() const {
  std::size_t n = 0;
  for (const auto& f : folds) n += f.eval_issue_times.size();
  return n;
}

std::vector<Instant> WalkForwardSchedule::issue_times() const {
  std::vector<Instant> out;
  for (const auto& f : folds) out.insert(out.end(), f.eval_issue_times.begin(), f.eval_issue_times.end());
  return out;
}

WalkForwardSchedule make_schedule(TimeRange data_range, const ScheduleParams& params) {
  params.validate();
  WalkForwardSchedule s;
  s.params = params;
  s.data_range = data_range;
  const Instant last = data_range.end - data::kHour;
  const auto horizon = data::hours(params.horizon_hours);
  const auto stride = data::hours(params.stride_hours);
  const auto refit = data::days(params.refit_days);
  const std::size_t full_block =
      static_cast<std::size_t>((params.refit_days * 24 + params.stride_hours - 1) / params.stride_hours);

  for (std::size_t k = 0;; ++k) {
    const Instant cutoff = data_range.begin + data::days(params.initial_train_days) - data::kHour +
                           refit * static_cast<std::int64_t>(k);
    if (cutoff + horizon > last) break;
    Fold f;
    f.index = k;
    f.cutoff = cutoff;
    f.train = {data_range.begin, cutoff + data::kHour};
    f.validation = {f.train.end - data::days(params.val_days), f.train.end};
    for (Instant t = cutoff; t < cutoff + refit && t + horizon <= last; t += stride) f.eval_issue_times.push_back(t);
    if (!params.keep_partial && f.eval_issue_times.size() < full_block) break;
    s.folds.push_back(std::move(f));
  }
  if (s.folds.empty()) {
    throw Error(ErrorCode::insufficient_data, "data range shorter than initial training plus one horizon",
                data::format_range(data_range));
  }
  return s;
}

WalkForwardSchedule make_fixed_split(TimeRange data_range, const ScheduleParams& params) {
  if (params.stride_hours < 1 || params.horizon_hours < 1) {
    throw Error(ErrorCode::invalid_config, "stride and horizon must be positive");
  }
  WalkForwardSchedule s;
  s.kind = ScheduleKind::fixed_split;
  s.params = params;
  s.data_range = data_range;
  const auto n = data_range.hour_count();
  const auto eval_start = static_cast<std::int64_t>(std::llround(0.8 * static_cast<double>(n)));
  const auto val_start = static_cast<std::int64_t>(std::llround(0.7 * static_cast<double>(n)));
  const Instant last = data_range.end - data::kHour;
  const auto horizon = data::hours(params.horizon_hours);

  Fold f;
  f.cutoff = data_range.begin + data::hours(eval_start) - data::kHour;
  f.train = {data_range.begin, f.cutoff + data::kHour};
  f.validation = {data_range.begin + data::hours(val_start), f.train.end};
  for (Instant t = f.cutoff; t + horizon <= last; t += data::hours(params.stride_hours)) {
    f.eval_issue_times.push_back(t);
  }
  if (val_start < 1 || f.validation.empty() || f.eval_issue_times.empty()) {
    throw Error(ErrorCode::insufficient_data, "range too short for a fixed split", data::format_range(data_range));
  }
  s.folds.push_back(std::move(f));
  return s;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string schedule_hash(const WalkForwardSchedule& s) {
  const auto& p = s.params;
  std::string buf = fmt::format("{}|{}|{}|{}|{}|{}|{}|", static_cast<int>(s.kind), p.initial_train_days, p.refit_days,
                                p.val_days, p.stride_hours, p.horizon_hours, p.keep_partial);
  for (const auto& f : s.folds) {
    buf += fmt::format("{}:{}:{}:{};", f.index, data::to_unix(f.train.end), data::to_unix(f.validation.begin),
                       f.eval_issue_times.size());
    for (auto t : f.eval_issue_times) buf += fmt::format("{},", data::to_unix(t));
  }
  return fnv1a_hex(buf);
}

}  // namespace gridrisk::backtest
