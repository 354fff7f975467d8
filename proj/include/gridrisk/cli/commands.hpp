#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridrisk/cli/config.hpp"
#include "gridrisk/data/series.hpp"
#include "gridrisk/forecast/forecaster.hpp"

namespace gridrisk::cli {

namespace fs = std::filesystem;

struct SynthArgs {
  std::uint64_t seed = 1;
  int days = 365;
  std::string profile = "duck";
  std::string area = "SYS";
  std::string start = "2023-01-02T00:00:00Z";
  fs::path out_dir = ".";
};

struct LagsArgs {
  fs::path weather;
  fs::path load;
  std::string area;
  int max_lag = 12;
  fs::path out_dir = ".";
};

struct RhoArgs {
  fs::path da;
  fs::path rt;
  std::string node;
  std::optional<fs::path> load;
  std::optional<fs::path> da_forecast;
  double kappa = 1.0;
  std::size_t min_event_samples = 100;
  fs::path out_dir = ".";
};

/// Shared by train and backtest.
struct RunArgs {
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out_dir;
  std::optional<int> h_star;
  std::optional<std::string> model;
};

struct ReportArgs {
  std::vector<fs::path> forecasts;
  std::string mode = "walkforward";
  int h_star = 24;
  double percentile = 99.5;
  fs::path out_dir = ".";
};

struct CompareArgs {
  fs::path report_a;
  fs::path report_b;
  int horizon = 24;
  std::optional<int> lead;
  std::optional<std::string> model_a;
  std::optional<std::string> model_b;
  std::optional<fs::path> out_dir;
};

void cmd_synth(const SynthArgs& args, std::ostream& out);
void cmd_lags(const LagsArgs& args, std::ostream& out);
void cmd_rho(const RhoArgs& args, std::ostream& out);
void cmd_train(const RunArgs& args, std::ostream& out);
void cmd_backtest(const RunArgs& args, std::ostream& out);
void cmd_report(const ReportArgs& args, std::ostream& out);
void cmd_compare(const CompareArgs& args, std::ostream& out);

/// Config with command-line overrides applied (seed, out dir, h_star), so the
/// config hash covers them.
ExperimentConfig resolve_run_config(const RunArgs& args);

struct LoadedData {
  data::AlignedFrame frame;
  std::string area;
  std::string load_id;
};

/// Reads the load file (and weather, when configured) for one area and aligns
/// them on the intersection grid with the drop gap policy.
LoadedData load_experiment_data(const ExperimentConfig& cfg);

forecast::ForecasterFactory make_factory(const ModelConfig& model, const ExperimentConfig& cfg,
                                         const LoadedData& data);

/// Parses argv, runs the command and maps errors to exit codes (2 config,
/// 3 data, 4 numerical) with a {code, message, context} JSON line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridrisk::cli
