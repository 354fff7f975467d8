#include "gridrisk/data/normalizer.hpp"

#include <cmath>

#include "gridrisk/error.hpp"

namespace gridrisk::data {

NormalizerState::NormalizerState(std::map<std::string, ChannelStats> stats, TimeRange fitted_on)
    : stats_(std::move(stats)), fitted_on_(fitted_on) {
  for (const auto& [id, s] : stats_) {
    if (!(s.std > 0.0)) throw Error(ErrorCode::constant_channel, "std must be positive", id);
  }
}

const ChannelStats& NormalizerState::stats(const std::string& channel) const {
  auto it = stats_.find(channel);
  if (it == stats_.end()) throw Error(ErrorCode::invalid_argument, "channel not fitted", channel);
  return it->second;
}

double NormalizerState::apply(const std::string& channel, double value) const {
  const auto& s = stats(channel);
  return (value - s.mean) / s.std;
}

double NormalizerState::invert(const std::string& channel, double z) const {
  const auto& s = stats(channel);
  return z * s.std + s.mean;
}

std::vector<double> NormalizerState::apply(const std::string& channel, std::span<const double> values) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(apply(channel, v));
  return out;
}

std::vector<double> NormalizerState::invert(const std::string& channel, std::span<const double> z) const {
  std::vector<double> out;
  out.reserve(z.size());
  for (double v : z) out.push_back(invert(channel, v));
  return out;
}

AlignedFrame NormalizerState::apply(const AlignedFrame& frame) const {
  AlignedFrame out = frame;
  for (const auto& [id, s] : stats_) {
    if (!out.has(id)) continue;
    const double mean = s.mean;
    const double sd = s.std;
    out = out.transformed(id, [mean, sd](Instant, double v) { return (v - mean) / sd; });
  }
  return out;
}

NormalizerState fit_normalizer(const AlignedFrame& frame, TimeRange train_range,
                               std::span<const std::string> channels) {
  std::vector<std::string> ids(channels.begin(), channels.end());
  if (ids.empty()) ids = frame.column_ids();

  std::map<std::string, ChannelStats> stats;
  for (const auto& id : ids) {
    const auto& col = frame.column(id);
    // Two-pass mean / population variance over the training window.
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < frame.length(); ++i) {
      if (col.mask[i] && train_range.contains(frame.time_at(i))) {
        sum += col.values[i];
        ++n;
      }
    }
    if (n == 0) throw Error(ErrorCode::empty_series, "no training rows for channel", id);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < frame.length(); ++i) {
      if (col.mask[i] && train_range.contains(frame.time_at(i))) {
        const double d = col.values[i] - mean;
        ss += d * d;
      }
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      throw Error(ErrorCode::constant_channel, "channel is constant on the training range", id);
    }
    stats.emplace(id, ChannelStats{mean, sd, n});
  }
  return NormalizerState(std::move(stats), train_range);
}

}  // namespace gridrisk::data
