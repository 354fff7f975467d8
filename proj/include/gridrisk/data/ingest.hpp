#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridrisk/data/series.hpp"

namespace gridrisk::data {

enum class CsvSchema { load, weather, lmp_oasis };

struct IngestResult {
  std::vector<HourlySeries> series;
  /// Rows with an unparseable timestamp or a non-finite / empty value.
  std::size_t dropped_rows = 0;
  /// Exact repeats of an already-seen (key, timestamp, value) row.
  std::size_t duplicate_rows = 0;

  const HourlySeries& get(const std::string& id) const;
  std::vector<std::string> ids() const;
};

/// Reads one CSV export into hourly series.
///
/// load:      `timestamp,area,load_mw` -> id "<area>/load"
/// weather:   `timestamp,area,temp_c,dewpoint_c,humidity_pct,wind_ms,wind_dir_deg,
///             cloud_oktas,ghi_wm2,pressure_hpa` -> id "<area>/<column>"
/// lmp_oasis: OASIS SingleZip CSV (PRC_LMP, PRC_INTVL_LMP or SLD_FCST). Keys on
///            INTERVALSTARTTIME_GMT, the node column (NODE, NODE_ID or
///            TAC_AREA_NAME) and the value column (MW or VALUE). Rows with an
///            LMP_TYPE other than LMP are ignored. id "<node>/<MARKET_RUN_ID>".
///
/// Sub-hourly rows are averaged into the hour that contains them. Repeated
/// keys with identical values are kept once; differing values raise
/// DuplicateTimestamp.
IngestResult ingest_csv(const std::filesystem::path& path, CsvSchema schema);
IngestResult ingest_csv(std::istream& in, CsvSchema schema, const std::string& source = "<stream>");

/// Writes `timestamp,area,load_mw` rows.
void write_load_csv(std::ostream& out, const std::string& area, const HourlySeries& load);

}  // namespace gridrisk::data
