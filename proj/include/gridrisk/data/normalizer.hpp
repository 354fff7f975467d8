#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gridrisk/data/series.hpp"

namespace gridrisk::data {

struct ChannelStats {
  double mean = 0.0;
  double std = 1.0;  // population standard deviation, > 0
  std::size_t count = 0;
  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

/// Per-channel z-score statistics fitted on a training window only.
class NormalizerState {
 public:
  NormalizerState() = default;
  NormalizerState(std::map<std::string, ChannelStats> stats, TimeRange fitted_on);

  const ChannelStats& stats(const std::string& channel) const;
  const std::map<std::string, ChannelStats>& all() const { return stats_; }
  const TimeRange& fitted_on() const { return fitted_on_; }

  double apply(const std::string& channel, double value) const;
  double invert(const std::string& channel, double z) const;
  std::vector<double> apply(const std::string& channel, std::span<const double> values) const;
  std::vector<double> invert(const std::string& channel, std::span<const double> z) const;

  /// Normalizes every fitted column of the frame; absent cells stay absent.
  AlignedFrame apply(const AlignedFrame& frame) const;

  friend bool operator==(const NormalizerState&, const NormalizerState&) = default;

 private:
  std::map<std::string, ChannelStats> stats_;
  TimeRange fitted_on_{};
};

/// Fits on present cells whose timestamp lies in `train_range`. `channels`
/// empty means every column. Throws ConstantChannel when a channel has zero
/// variance on the window and EmptySeries when it has no present cell there.
NormalizerState fit_normalizer(const AlignedFrame& frame, TimeRange train_range,
                               std::span<const std::string> channels = {});

}  // namespace gridrisk::data
