#include "gridrisk/cli/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "gridrisk/data/ingest.hpp"
#include "gridrisk/error.hpp"

namespace gridrisk::cli {

namespace {

using data::ChannelKind;

struct Column {
  const char* name;
  ChannelKind kind;
};

constexpr std::array<Column, 8> kColumns = {{
    {"temp_c", ChannelKind::temperature},
    {"dewpoint_c", ChannelKind::dewpoint},
    {"humidity_pct", ChannelKind::humidity},
    {"wind_ms", ChannelKind::wind_speed},
    {"wind_dir_deg", ChannelKind::wind_dir},
    {"cloud_oktas", ChannelKind::cloud_cover},
    {"ghi_wm2", ChannelKind::ghi},
    {"pressure_hpa", ChannelKind::pressure},
}};

// Fixed three-decimal rounding so files and in-memory series agree.
double r3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

std::optional<SynthProfile> synth_profile_from_string(std::string_view name) {
  if (name == "duck") return SynthProfile::duck;
  if (name == "flat") return SynthProfile::flat;
  if (name == "heatwave") return SynthProfile::heatwave;
  return std::nullopt;
}

SynthData synthesize(const SynthOptions& opt) {
  if (opt.days < 1) throw Error(ErrorCode::invalid_config, "days must be positive");
  if (opt.temp_lag_hours < 0) throw Error(ErrorCode::invalid_config, "temperature lag must be non-negative");
  const std::size_t n = static_cast<std::size_t>(opt.days) * 24;
  const std::size_t warm = static_cast<std::size_t>(opt.temp_lag_hours) + 1;
  const std::size_t total = n + warm;

  std::vector<data::Instant> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = opt.start + data::hours(static_cast<std::int64_t>(i));

  std::vector<std::vector<double>> w(kColumns.size(), std::vector<double>(total));
  std::vector<double> load(n);

  if (opt.profile == SynthProfile::flat) {
    const std::array<double, 8> c = {20.0, 10.0, 55.0, 3.0, 270.0, 2.0, 0.0, 1013.0};
    for (std::size_t k = 0; k < c.size(); ++k) std::fill(w[k].begin(), w[k].end(), c[k]);
    std::fill(load.begin(), load.end(), 20000.0);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool heatwave = opt.profile == SynthProfile::heatwave;

    double front = 0.0, noise = 0.0, wind = 0.0, dir = 0.0, cloud = 0.0, press = 0.0, hot = 0.0;
    int hot_days = 0;
    for (std::size_t i = 0; i < total; ++i) {
      // output row 0 sits `warm` steps into the weather path
      const auto secs = data::to_unix(opt.start) + (static_cast<std::int64_t>(i) - static_cast<std::int64_t>(warm)) * 3600;
      const auto day_index = secs >= 0 ? secs / 86400 : (secs - 86399) / 86400;
      const double hour = static_cast<double>((secs - day_index * 86400) / 3600);
      const double day = static_cast<double>(day_index % 365);
      if (i == 0 || hour == 0.0) {
        front = 0.75 * front + 2.2 * z(rng);
        if (heatwave) {
          if (hot_days == 0 && u(rng) < 0.04) hot_days = 3 + static_cast<int>(u(rng) * 3.0);
          hot = hot_days > 0 ? 9.0 : 0.0;
          if (hot_days > 0) --hot_days;
        }
      }
      noise = 0.6 * noise + 1.8 * z(rng);
      wind = 0.9 * wind + 0.5 * z(rng);
      dir = 0.95 * dir + 12.0 * z(rng);
      cloud = 0.92 * cloud + 0.6 * z(rng);
      press = 0.97 * press + 0.8 * z(rng);

      const double season = 6.0 * std::sin(2.0 * std::numbers::pi * (day - 100.0) / 365.0);
      const double diurnal = 3.0 * std::sin(2.0 * std::numbers::pi * (hour - 9.0) / 24.0);
      const double temp = 17.0 + season + diurnal + front + noise + hot;
      const double oktas = std::clamp(std::round(3.0 + cloud), 0.0, 8.0);
      const double sun = hour > 6.0 && hour < 18.0 ? std::sin(std::numbers::pi * (hour - 6.0) / 12.0) : 0.0;

      w[0][i] = r3(temp);
      w[1][i] = r3(temp - 6.0 - 0.4 * std::abs(z(rng)));
      w[2][i] = r3(std::clamp(62.0 - 1.8 * (temp - 17.0) + 3.0 * z(rng), 5.0, 100.0));
      w[3][i] = r3(std::abs(3.0 + wind));
      w[4][i] = r3(std::fmod(std::fmod(250.0 + dir, 360.0) + 360.0, 360.0));
      w[5][i] = oktas;
      w[6][i] = r3(900.0 * sun * (1.0 - 0.08 * oktas));
      w[7][i] = r3(1013.0 + press);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + warm;
      const auto civ = data::to_unix(ts[i]);
      const int hour = static_cast<int>((civ / 3600) % 24);
      const int weekday = static_cast<int>(((civ / 86400) + 3) % 7);  // 0 = Monday
      const double week = weekday >= 5 ? 0.92 : 1.0;
      const double morning = 1200.0 * std::exp(-0.5 * std::pow((hour - 8.0) / 2.0, 2.0));
      const double evening = 2600.0 * std::exp(-0.5 * std::pow((hour - 19.5) / 1.8, 2.0));
      const double base = week * (23000.0 + morning + evening);
      const double thermal = 450.0 * (w[0][j - static_cast<std::size_t>(opt.temp_lag_hours)] - 17.0);
      const double btm = 3.5 * w[6][j - 1];
      load[i] = r3(base + thermal - btm + 120.0 * z(rng));
    }
  }

  SynthData out{opt.area, data::HourlySeries(opt.area + "/load", ChannelKind::load, ts, load), {}};
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    std::vector<double> v(w[k].begin() + static_cast<std::ptrdiff_t>(warm), w[k].end());
    out.weather.emplace_back(opt.area + "/" + kColumns[k].name, kColumns[k].kind, ts, std::move(v));
  }
  return out;
}

std::vector<std::filesystem::path> write_synth(const SynthData& d, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create output directory", dir.string());

  const auto load_path = dir / "load.csv";
  std::ofstream lo(load_path, std::ios::binary);
  if (!lo) throw Error(ErrorCode::io_error, "cannot write", load_path.string());
  data::write_load_csv(lo, d.area, d.load);

  const auto weather_path = dir / "weather.csv";
  std::ofstream wo(weather_path, std::ios::binary);
  if (!wo) throw Error(ErrorCode::io_error, "cannot write", weather_path.string());
  wo << "timestamp,area";
  for (const auto& c : kColumns) wo << ',' << c.name;
  wo << '\n';
  const auto times = d.load.timestamps();
  for (std::size_t i = 0; i < times.size(); ++i) {
    wo << data::format_timestamp(times[i]) << ',' << d.area;
    for (const auto& s : d.weather) wo << fmt::format(",{:.3f}", s.values()[i]);
    wo << '\n';
  }
  return {load_path, weather_path};
}

}  // namespace gridrisk::cli
