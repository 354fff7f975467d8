#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridrisk/data/time.hpp"

namespace gridrisk::data {

enum class ChannelKind {
  load,
  temperature,
  dewpoint,
  humidity,
  wind_speed,
  wind_dir,
  cloud_cover,
  ghi,
  pressure,
  lmp_da,
  lmp_rt,
};

std::string_view to_string(ChannelKind kind);
std::optional<ChannelKind> channel_kind_from_string(std::string_view name);
bool is_weather(ChannelKind kind);

/// Hourly scalar series on the UTC hour grid. Missing hours are absent rows;
/// `gaps()` lists them. Immutable once built.
class HourlySeries {
 public:
  HourlySeries() = default;

  /// Throws InvalidSeries unless timestamps are on hour boundaries and
  /// strictly increasing, and every value is finite.
  HourlySeries(std::string id, ChannelKind kind, std::vector<Instant> timestamps,
               std::vector<double> values);

  const std::string& id() const { return id_; }
  ChannelKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const Instant> timestamps() const { return timestamps_; }
  std::span<const double> values() const { return values_; }

  Instant front_time() const { return timestamps_.front(); }
  Instant back_time() const { return timestamps_.back(); }
  /// [first, last + 1h)
  TimeRange span() const;

  std::optional<double> at(Instant t) const;

  /// Hour boundaries inside span() with no row.
  std::vector<Instant> gaps() const;

  HourlySeries with_id(std::string id) const;

 private:
  std::string id_;
  ChannelKind kind_ = ChannelKind::load;
  std::vector<Instant> timestamps_;
  std::vector<double> values_;
};

/// Several channels on one contiguous hourly grid. `present(c, i)` false means
/// the cell is absent and its value must not be read.
class AlignedFrame {
 public:
  struct Column {
    ChannelKind kind;
    std::vector<double> values;
    std::vector<bool> mask;
  };

  AlignedFrame() = default;
  AlignedFrame(Instant start, std::size_t length, std::map<std::string, Column> columns);

  Instant start() const { return start_; }
  std::size_t length() const { return length_; }
  TimeRange range() const { return {start_, start_ + kHour * static_cast<std::int64_t>(length_)}; }
  Instant time_at(std::size_t row) const { return start_ + kHour * static_cast<std::int64_t>(row); }
  std::optional<std::size_t> row_of(Instant t) const;

  bool has(const std::string& id) const { return columns_.contains(id); }
  const Column& column(const std::string& id) const;
  const std::map<std::string, Column>& columns() const { return columns_; }
  std::vector<std::string> column_ids() const;

  std::optional<double> value(const std::string& id, Instant t) const;
  bool present(const std::string& id, Instant t) const { return value(id, t).has_value(); }

  /// True when every hour of [range) is present for each id.
  bool complete(std::span<const std::string> ids, TimeRange range) const;

  /// Copy of the frame with one column slice replaced by `f(time, value)`
  /// for present cells. Used by leakage tests and noise injection.
  template <class F>
  AlignedFrame transformed(const std::string& id, F&& f) const {
    AlignedFrame out = *this;
    auto& col = out.columns_.at(id);
    for (std::size_t i = 0; i < length_; ++i) {
      if (col.mask[i]) col.values[i] = f(time_at(i), col.values[i]);
    }
    return out;
  }

  /// Restricts the frame to `range`, which must be on the hour grid.
  AlignedFrame slice(TimeRange range) const;

  /// Back to one series per column, absent cells dropped.
  HourlySeries to_series(const std::string& id) const;

 private:
  Instant start_{};
  std::size_t length_ = 0;
  std::map<std::string, Column> columns_;
};

enum class GridMode { intersection, union_all };
enum class FillMode { drop, forward_fill };

struct GapPolicy {
  GridMode grid = GridMode::intersection;
  FillMode fill = FillMode::drop;
  /// Longest interior gap (hours) filled under forward_fill. Longer gaps are
  /// left absent in full.
  int fill_limit = 3;
};

/// Places every series on a shared hourly grid. Throws NoOverlap when the
/// intersection grid is empty.
AlignedFrame align(std::span<const HourlySeries> series, const GapPolicy& policy = {});

}  // namespace gridrisk::data
