#include "gridrisk/data/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gridrisk/error.hpp"

namespace gridrisk::data {

namespace {

constexpr std::array<std::pair<ChannelKind, std::string_view>, 11> kKindNames = {{
    {ChannelKind::load, "load"},
    {ChannelKind::temperature, "temperature"},
    {ChannelKind::dewpoint, "dewpoint"},
    {ChannelKind::humidity, "humidity"},
    {ChannelKind::wind_speed, "wind_speed"},
    {ChannelKind::wind_dir, "wind_dir"},
    {ChannelKind::cloud_cover, "cloud_cover"},
    {ChannelKind::ghi, "ghi"},
    {ChannelKind::pressure, "pressure"},
    {ChannelKind::lmp_da, "lmp_da"},
    {ChannelKind::lmp_rt, "lmp_rt"},
}};

}  // namespace

std::string_view to_string(ChannelKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ChannelKind> channel_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_weather(ChannelKind kind) {
  return kind != ChannelKind::load && kind != ChannelKind::lmp_da && kind != ChannelKind::lmp_rt;
}

HourlySeries::HourlySeries(std::string id, ChannelKind kind, std::vector<Instant> timestamps,
                           std::vector<double> values)
    : id_(std::move(id)), kind_(kind), timestamps_(std::move(timestamps)), values_(std::move(values)) {
  if (timestamps_.size() != values_.size()) {
    throw Error(ErrorCode::invalid_series, "timestamp and value counts differ", id_);
  }
  for (std::size_t i = 0; i < timestamps_.size(); ++i) {
    if (!on_hour(timestamps_[i])) {
      throw Error(ErrorCode::invalid_series, "timestamp not on an hour boundary: " +
                                                 format_timestamp(timestamps_[i]), id_);
    }
    if (i > 0 && timestamps_[i] <= timestamps_[i - 1]) {
      throw Error(ErrorCode::invalid_series, "timestamps not strictly increasing at " +
                                                 format_timestamp(timestamps_[i]), id_);
    }
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::invalid_series, "non-finite value at " + format_timestamp(timestamps_[i]),
                  id_);
    }
  }
}

TimeRange HourlySeries::span() const {
  if (empty()) return {};
  return {timestamps_.front(), timestamps_.back() + kHour};
}

std::optional<double> HourlySeries::at(Instant t) const {
  auto it = std::lower_bound(timestamps_.begin(), timestamps_.end(), t);
  if (it == timestamps_.end() || *it != t) return std::nullopt;
  return values_[static_cast<std::size_t>(it - timestamps_.begin())];
}

std::vector<Instant> HourlySeries::gaps() const {
  std::vector<Instant> out;
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    for (Instant t = timestamps_[i - 1] + kHour; t < timestamps_[i]; t += kHour) out.push_back(t);
  }
  return out;
}

HourlySeries HourlySeries::with_id(std::string id) const {
  HourlySeries out = *this;
  out.id_ = std::move(id);
  return out;
}

AlignedFrame::AlignedFrame(Instant start, std::size_t length, std::map<std::string, Column> columns)
    : start_(start), length_(length), columns_(std::move(columns)) {
  for (const auto& [id, col] : columns_) {
    if (col.values.size() != length_ || col.mask.size() != length_) {
      throw Error(ErrorCode::invalid_series, "column length does not match the frame grid", id);
    }
    for (std::size_t i = 0; i < length_; ++i) {
      if (col.mask[i] && !std::isfinite(col.values[i])) {
        throw Error(ErrorCode::invalid_series, "present cell holds a non-finite value", id);
      }
    }
  }
}

std::optional<std::size_t> AlignedFrame::row_of(Instant t) const {
  if (t < start_ || !on_hour(t)) return std::nullopt;
  auto row = static_cast<std::size_t>((t - start_) / kHour);
  if (row >= length_) return std::nullopt;
  return row;
}

const AlignedFrame::Column& AlignedFrame::column(const std::string& id) const {
  auto it = columns_.find(id);
  if (it == columns_.end()) throw Error(ErrorCode::invalid_argument, "unknown column", id);
  return it->second;
}

std::vector<std::string> AlignedFrame::column_ids() const {
  std::vector<std::string> ids;
  ids.reserve(columns_.size());
  for (const auto& [id, col] : columns_) ids.push_back(id);
  return ids;
}

std::optional<double> AlignedFrame::value(const std::string& id, Instant t) const {
  auto row = row_of(t);
  if (!row) return std::nullopt;
  const Column& col = column(id);
  if (!col.mask[*row]) return std::nullopt;
  return col.values[*row];
}

bool AlignedFrame::complete(std::span<const std::string> ids, TimeRange range) const {
  if (range.empty()) return true;
  auto first = row_of(range.begin);
  auto last = row_of(range.end - kHour);
  if (!first || !last) return false;
  for (const auto& id : ids) {
    const Column& col = column(id);
    for (std::size_t i = *first; i <= *last; ++i) {
      if (!col.mask[i]) return false;
    }
  }
  return true;
}

AlignedFrame AlignedFrame::slice(TimeRange range) const {
  Instant b = std::max(range.begin, start_);
  Instant e = std::min(range.end, this->range().end);
  if (e <= b) return AlignedFrame(b, 0, {});
  auto first = static_cast<std::size_t>((b - start_) / kHour);
  auto n = static_cast<std::size_t>((e - b) / kHour);
  std::map<std::string, Column> cols;
  for (const auto& [id, col] : columns_) {
    Column c{col.kind, {}, {}};
    c.values.assign(col.values.begin() + static_cast<std::ptrdiff_t>(first),
                    col.values.begin() + static_cast<std::ptrdiff_t>(first + n));
    c.mask.assign(col.mask.begin() + static_cast<std::ptrdiff_t>(first),
                  col.mask.begin() + static_cast<std::ptrdiff_t>(first + n));
    cols.emplace(id, std::move(c));
  }
  return AlignedFrame(b, n, std::move(cols));
}

HourlySeries AlignedFrame::to_series(const std::string& id) const {
  const Column& col = column(id);
  std::vector<Instant> ts;
  std::vector<double> vs;
  for (std::size_t i = 0; i < length_; ++i) {
    if (col.mask[i]) {
      ts.push_back(time_at(i));
      vs.push_back(col.values[i]);
    }
  }
  return HourlySeries(id, col.kind, std::move(ts), std::move(vs));
}

AlignedFrame align(std::span<const HourlySeries> series, const GapPolicy& policy) {
  if (series.empty()) throw Error(ErrorCode::invalid_argument, "align needs at least one series");
  for (const auto& s : series) {
    if (s.empty()) throw Error(ErrorCode::empty_series, "cannot align an empty series", s.id());
  }

  Instant begin = series.front().front_time();
  Instant end = series.front().span().end;
  for (const auto& s : series) {
    if (policy.grid == GridMode::intersection) {
      begin = std::max(begin, s.front_time());
      end = std::min(end, s.span().end);
    } else {
      begin = std::min(begin, s.front_time());
      end = std::max(end, s.span().end);
    }
  }
  if (end <= begin) throw Error(ErrorCode::no_overlap, "series share no common hours");
  const auto length = static_cast<std::size_t>((end - begin) / kHour);

  std::map<std::string, AlignedFrame::Column> columns;
  for (const auto& s : series) {
    AlignedFrame::Column col{s.kind(), std::vector<double>(length, 0.0), std::vector<bool>(length, false)};
    auto ts = s.timestamps();
    auto vs = s.values();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] < begin || ts[i] >= end) continue;
      auto row = static_cast<std::size_t>((ts[i] - begin) / kHour);
      col.values[row] = vs[i];
      col.mask[row] = true;
    }

    if (policy.fill == FillMode::forward_fill && policy.fill_limit > 0) {
      // Only interior runs of absent cells no longer than the limit are filled.
      std::size_t i = 0;
      while (i < length) {
        if (col.mask[i]) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < length && !col.mask[j]) ++j;
        const bool interior = i > 0 && j < length;
        if (interior && j - i <= static_cast<std::size_t>(policy.fill_limit)) {
          for (std::size_t k = i; k < j; ++k) {
            col.values[k] = col.values[i - 1];
            col.mask[k] = true;
          }
        }
        i = j;
      }
    }

    if (!columns.emplace(s.id(), std::move(col)).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate series id in align", s.id());
    }
  }
  return AlignedFrame(begin, length, std::move(columns));
}

}  // namespace gridrisk::data
