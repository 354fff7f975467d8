#include "gridrisk/data/ingest.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>

#include <boost/tokenizer.hpp>
#include <fmt/format.h>

#include "gridrisk/error.hpp"

namespace gridrisk::data {

namespace {

struct WeatherColumn {
  std::string_view header;
  ChannelKind kind;
};

constexpr std::array<WeatherColumn, 8> kWeatherColumns = {{
    {"temp_c", ChannelKind::temperature},
    {"dewpoint_c", ChannelKind::dewpoint},
    {"humidity_pct", ChannelKind::humidity},
    {"wind_ms", ChannelKind::wind_speed},
    {"wind_dir_deg", ChannelKind::wind_dir},
    {"cloud_oktas", ChannelKind::cloud_cover},
    {"ghi_wm2", ChannelKind::ghi},
    {"pressure_hpa", ChannelKind::pressure},
}};

std::vector<std::string> split_csv(const std::string& line) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  std::vector<std::string> fields;
  std::string trimmed = line;
  if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
  Tokenizer tok(trimmed, boost::escaped_list_separator<char>('\\', ',', '"'));
  for (const auto& f : tok) {
    std::string v = f;
    while (!v.empty() && v.front() == ' ') v.erase(v.begin());
    while (!v.empty() && v.back() == ' ') v.pop_back();
    fields.push_back(std::move(v));
  }
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

class HeaderIndex {
 public:
  explicit HeaderIndex(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) index_.emplace(header[i], i);
  }
  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require(std::string_view name, const std::string& source) const {
    auto i = find(name);
    if (!i) throw Error(ErrorCode::missing_header, fmt::format("missing column '{}'", name), source);
    return *i;
  }
  std::optional<std::size_t> first_of(std::initializer_list<std::string_view> names) const {
    for (auto n : names) {
      if (auto i = find(n)) return i;
    }
    return std::nullopt;
  }

 private:
  std::map<std::string, std::size_t> index_;
};

// Raw observations per series key before hourly aggregation.
class Accumulator {
 public:
  explicit Accumulator(std::string source) : source_(std::move(source)) {}

  void add(const std::string& id, ChannelKind kind, Instant t, double value) {
    auto& entry = series_[id];
    entry.kind = kind;
    auto [it, inserted] = entry.raw.emplace(t, value);
    if (!inserted) {
      if (it->second != value) {
        throw Error(ErrorCode::duplicate_timestamp,
                    fmt::format("conflicting values {} and {} at {}", it->second, value,
                                format_timestamp(t)),
                    source_ + ":" + id);
      }
      ++duplicates_;
    }
  }

  std::size_t duplicates() const { return duplicates_; }

  std::vector<HourlySeries> finish() const {
    std::vector<HourlySeries> out;
    for (const auto& [id, entry] : series_) {
      std::vector<Instant> ts;
      std::vector<double> vs;
      std::size_t count = 0;
      double sum = 0.0;
      std::optional<Instant> current;
      for (const auto& [t, v] : entry.raw) {
        Instant hour = floor_to_hour(t);
        if (current && hour != *current) {
          ts.push_back(*current);
          vs.push_back(sum / static_cast<double>(count));
          sum = 0.0;
          count = 0;
        }
        current = hour;
        sum += v;
        ++count;
      }
      if (current) {
        ts.push_back(*current);
        vs.push_back(sum / static_cast<double>(count));
      }
      out.emplace_back(id, entry.kind, std::move(ts), std::move(vs));
    }
    return out;
  }

 private:
  struct Entry {
    ChannelKind kind = ChannelKind::load;
    std::map<Instant, double> raw;
  };
  std::string source_;
  std::map<std::string, Entry> series_;
  std::size_t duplicates_ = 0;
};

}  // namespace

const HourlySeries& IngestResult::get(const std::string& id) const {
  for (const auto& s : series) {
    if (s.id() == id) return s;
  }
  throw Error(ErrorCode::invalid_argument, "no series with this id", id);
}

std::vector<std::string> IngestResult::ids() const {
  std::vector<std::string> out;
  for (const auto& s : series) out.push_back(s.id());
  return out;
}

IngestResult ingest_csv(std::istream& in, CsvSchema schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::missing_header, "file has no header row", source);
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  const HeaderIndex header(split_csv(line));

  IngestResult result;
  Accumulator acc(source);

  std::size_t ts_col = 0;
  std::size_t key_col = 0;
  std::size_t value_col = 0;
  std::vector<std::pair<std::size_t, WeatherColumn>> weather_cols;
  std::optional<std::size_t> lmp_type_col;
  std::optional<std::size_t> market_col;

  switch (schema) {
    case CsvSchema::load:
      ts_col = header.require("timestamp", source);
      key_col = header.require("area", source);
      value_col = header.require("load_mw", source);
      break;
    case CsvSchema::weather:
      ts_col = header.require("timestamp", source);
      key_col = header.require("area", source);
      for (const auto& wc : kWeatherColumns) weather_cols.emplace_back(header.require(wc.header, source), wc);
      break;
    case CsvSchema::lmp_oasis: {
      ts_col = header.require("INTERVALSTARTTIME_GMT", source);
      auto node = header.first_of({"NODE", "NODE_ID", "TAC_AREA_NAME"});
      if (!node) throw Error(ErrorCode::missing_header, "missing node column (NODE, NODE_ID or TAC_AREA_NAME)", source);
      key_col = *node;
      auto value = header.first_of({"MW", "VALUE", "PRC"});
      if (!value) throw Error(ErrorCode::missing_header, "missing value column (MW or VALUE)", source);
      value_col = *value;
      lmp_type_col = header.find("LMP_TYPE");
      market_col = header.find("MARKET_RUN_ID");
      break;
    }
  }

  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    auto field = [&](std::size_t i) -> const std::string& {
      static const std::string kEmpty;
      return i < fields.size() ? fields[i] : kEmpty;
    };

    auto t = parse_timestamp(field(ts_col));
    const std::string& key = field(key_col);
    if (!t || key.empty()) {
      ++result.dropped_rows;
      continue;
    }

    switch (schema) {
      case CsvSchema::load: {
        auto v = parse_number(field(value_col));
        if (!v) {
          ++result.dropped_rows;
          continue;
        }
        acc.add(key + "/load", ChannelKind::load, *t, *v);
        break;
      }
      case CsvSchema::weather: {
        bool any_bad = false;
        for (const auto& [col, wc] : weather_cols) {
          auto v = parse_number(field(col));
          if (!v) {
            any_bad = true;
            continue;
          }
          acc.add(key + "/" + std::string(wc.header), wc.kind, *t, *v);
        }
        if (any_bad) ++result.dropped_rows;
        break;
      }
      case CsvSchema::lmp_oasis: {
        if (lmp_type_col && field(*lmp_type_col) != "LMP") continue;
        auto v = parse_number(field(value_col));
        if (!v) {
          ++result.dropped_rows;
          continue;
        }
        const std::string market = market_col ? field(*market_col) : std::string("UNKNOWN");
        ChannelKind kind = ChannelKind::load;
        if (lmp_type_col) kind = market == "DAM" ? ChannelKind::lmp_da : ChannelKind::lmp_rt;
        acc.add(key + "/" + market, kind, *t, *v);
        break;
      }
    }
  }

  result.series = acc.finish();
  result.duplicate_rows = acc.duplicates();
  if (result.series.empty()) throw Error(ErrorCode::empty_series, "no valid rows", source);
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, CsvSchema schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open file", path.string());
  return ingest_csv(in, schema, path.string());
}

void write_load_csv(std::ostream& out, const std::string& area, const HourlySeries& load) {
  out << "timestamp,area,load_mw\n";
  auto ts = load.timestamps();
  auto vs = load.values();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << fmt::format("{},{},{:.3f}\n", format_timestamp(ts[i]), area, vs[i]);
  }
}

}  // namespace gridrisk::data
