#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gridrisk/cli/commands.hpp"
#include "gridrisk/error.hpp"

namespace gridrisk::cli {

namespace {

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::data: return 3;
    case ErrorCategory::numerical: return 4;
  }
  return 1;
}

void report_error(std::ostream& err, std::string_view code, const std::string& message, const std::string& context) {
  nlohmann::ordered_json j;
  j["code"] = code;
  j["message"] = message;
  j["context"] = context;
  err << j.dump() << "\n";
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "experiment config (.toml or .json)")->required();
  cmd->add_option("--seed", a.seed, "override the config seed");
  cmd->add_option("--out-dir", a.out_dir, "override the output directory");
  cmd->add_option("--h-star", a.h_star, "override the bias/OPR lead hour");
  cmd->add_option("--model", a.model, "model name to use");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk-aware load forecasting toolkit", "gridrisk"};
  app.set_version_flag("--version", GRIDRISK_VERSION);
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "write a synthetic load and weather dataset");
  c_synth->add_option("--seed", synth.seed)->required();
  c_synth->add_option("--days", synth.days)->check(CLI::PositiveNumber);
  c_synth->add_option("--profile", synth.profile)->check(CLI::IsMember({"duck", "flat", "heatwave"}));
  c_synth->add_option("--area", synth.area);
  c_synth->add_option("--start", synth.start);
  c_synth->add_option("--out-dir", synth.out_dir);

  LagsArgs lags;
  auto* c_lags = app.add_subcommand("lags", "thermal-lag scan of weather covariates against load");
  c_lags->add_option("--weather", lags.weather)->required();
  c_lags->add_option("--load", lags.load)->required();
  c_lags->add_option("--area", lags.area);
  c_lags->add_option("--max-lag", lags.max_lag)->check(CLI::NonNegativeNumber);
  c_lags->add_option("--out-dir", lags.out_dir);

  RhoArgs rho;
  auto* c_rho = app.add_subcommand("rho", "asymmetry ratio and target quantile from DA/RT prices");
  c_rho->add_option("--da", rho.da)->required();
  c_rho->add_option("--rt", rho.rt)->required();
  c_rho->add_option("--node", rho.node)->required();
  c_rho->add_option("--load", rho.load, "actual load, for the event-conditioned ratio");
  c_rho->add_option("--da-forecast", rho.da_forecast, "day-ahead load forecast, with --load");
  c_rho->add_option("--kappa", rho.kappa);
  c_rho->add_option("--min-event-samples", rho.min_event_samples);
  c_rho->add_option("--out-dir", rho.out_dir);

  RunArgs train, bt;
  auto* c_train = app.add_subcommand("train", "fit one configured model on the full dataset");
  add_run_options(c_train, train);
  auto* c_bt = app.add_subcommand("backtest", "walk-forward or fixed-split evaluation of every configured model");
  add_run_options(c_bt, bt);

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "score forecast CSVs into report.json and report.csv");
  c_rep->add_option("--forecast", rep.forecasts)->required();
  c_rep->add_option("--mode", rep.mode)->check(CLI::IsMember({"walkforward", "fixed_split"}));
  c_rep->add_option("--h-star", rep.h_star);
  c_rep->add_option("--percentile", rep.percentile);
  c_rep->add_option("--out-dir", rep.out_dir);

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "Diebold-Mariano test between two reports");
  c_cmp->add_option("--report-a", cmp.report_a)->required();
  c_cmp->add_option("--report-b", cmp.report_b)->required();
  c_cmp->add_option("--horizon", cmp.horizon, "forecast horizon h; bandwidth is h - 1");
  c_cmp->add_option("--lead", cmp.lead, "lead hour whose errors are compared (default: horizon)");
  c_cmp->add_option("--model-a", cmp.model_a);
  c_cmp->add_option("--model-b", cmp.model_b);
  c_cmp->add_option("--out-dir", cmp.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report_error(err, to_string(ErrorCode::invalid_config), e.what(), "command line");
    return 2;
  }

  try {
    if (*c_synth) cmd_synth(synth, out);
    if (*c_lags) cmd_lags(lags, out);
    if (*c_rho) cmd_rho(rho, out);
    if (*c_train) cmd_train(train, out);
    if (*c_bt) cmd_backtest(bt, out);
    if (*c_rep) cmd_report(rep, out);
    if (*c_cmp) cmd_compare(cmp, out);
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what(), e.context());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    report_error(err, "Internal", e.what(), "");
    return 1;
  }
  return 0;
}

}  // namespace gridrisk::cli
