#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gridrisk/data/time.hpp"

namespace gridrisk::backtest {

using data::Instant;
using data::TimeRange;

struct ScheduleParams {
  int initial_train_days = 180;
  int refit_days = 90;
  int val_days = 30;
  int stride_hours = 24;
  int horizon_hours = 48;
  /// Keep a trailing fold whose block is shorter than refit_days.
  bool keep_partial = true;

  /// Throws InvalidConfig.
  void validate() const;
};

/// The cutoff is the last training hour; an issue at time t has observed load
/// up to and including t and forecasts t + 1 .. t + horizon.
struct Fold {
  std::size_t index = 0;
  Instant cutoff;
  TimeRange train;       // [data start, cutoff + 1 h)
  TimeRange validation;  // last val_days of train
  std::vector<Instant> eval_issue_times;
};

enum class ScheduleKind { walkforward, fixed_split };

struct WalkForwardSchedule {
  ScheduleKind kind = ScheduleKind::walkforward;
  ScheduleParams params;
  TimeRange data_range;
  std::vector<Fold> folds;

  std::size_t issue_count() const;
  std::vector<Instant> issue_times() const;
};

/// Fold k has cutoff start + initial_train_days - 1 h + k * refit_days. Its
/// issue times start at the cutoff and step by stride_hours while they stay
/// before the next cutoff and the whole horizon lies inside `data_range`.
/// Throws InsufficientData when not even one issue fits.
WalkForwardSchedule make_schedule(TimeRange data_range, const ScheduleParams& params = {});

/// One fold: the last 20% of the range is evaluated, the 10% before it
/// validates, the rest trains.
WalkForwardSchedule make_fixed_split(TimeRange data_range, const ScheduleParams& params = {});

/// FNV-1a over the parameters and every fold boundary and issue time, as hex.
std::string schedule_hash(const WalkForwardSchedule& schedule);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace gridrisk::backtest
