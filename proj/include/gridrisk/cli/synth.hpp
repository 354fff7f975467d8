#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridrisk/data/series.hpp"

namespace gridrisk::cli {

enum class SynthProfile { duck, flat, heatwave };

std::optional<SynthProfile> synth_profile_from_string(std::string_view name);

struct SynthOptions {
  std::uint64_t seed = 1;
  int days = 365;
  SynthProfile profile = SynthProfile::duck;
  data::Instant start = data::from_unix(1672617600);  // 2023-01-02T00:00Z, a Monday
  std::string area = "SYS";
  /// Hours by which load trails temperature.
  int temp_lag_hours = 3;
};

struct SynthData {
  std::string area;
  data::HourlySeries load;
  /// One series per weather column, ids "<area>/<column>".
  std::vector<data::HourlySeries> weather;
};

/// Hourly load and weather with daily and weekly cycles. Temperature mixes a
/// small diurnal wave, day-level fronts and AR(1) noise; load responds to it
/// `temp_lag_hours` later and dips with irradiance (duck). heatwave adds hot
/// spell days; flat is constant everywhere.
SynthData synthesize(const SynthOptions& options);

/// Writes load.csv and weather.csv into `dir` and returns their paths.
std::vector<std::filesystem::path> write_synth(const SynthData& data, const std::filesystem::path& dir);

}  // namespace gridrisk::cli
