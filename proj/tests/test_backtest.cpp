#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "gridrisk/backtest/report.hpp"
#include "gridrisk/backtest/runner.hpp"
#include "gridrisk/backtest/schedule.hpp"
#include "gridrisk/cli/synth.hpp"
#include "test_util.hpp"

using namespace gridrisk;
using namespace gridrisk::backtest;
using data::ChannelKind;
using data::days;
using data::hours;
using testutil::at_hour;
using testutil::code_of;

namespace {

TimeRange range_hours(long n) { return {at_hour(0), at_hour(n)}; }

struct Enumerated {
  std::size_t folds = 0;
  std::vector<Instant> issues;
};

/// Walks every hour of the range and keeps the ones the protocol evaluates:
/// on the 24 h stride from the first cutoff, with the whole horizon observed.
Enumerated enumerate(TimeRange r, const ScheduleParams& p) {
  Enumerated out;
  const Instant first_cutoff = r.begin + days(p.initial_train_days) - hours(1);
  const Instant last = r.end - hours(1);
  std::set<long> folds;
  for (Instant t = r.begin; t < r.end; t += hours(1)) {
    if (t < first_cutoff) continue;
    const long since = (t - first_cutoff) / hours(1);
    if (since % p.stride_hours != 0) continue;
    if (t + hours(p.horizon_hours) > last) continue;
    out.issues.push_back(t);
    folds.insert(since / (24L * p.refit_days));
  }
  out.folds = folds.size();
  return out;
}

AlignedFrame synth_frame(int days_, std::uint64_t seed, cli::SynthProfile profile = cli::SynthProfile::duck) {
  cli::SynthOptions o;
  o.seed = seed;
  o.days = days_;
  o.profile = profile;
  auto d = cli::synthesize(o);
  std::vector<data::HourlySeries> all{d.load};
  all.insert(all.end(), d.weather.begin(), d.weather.end());
  return data::align(all);
}

forecast::FeatureOptions feature_options() {
  forecast::FeatureOptions f;
  f.load_channel = "SYS/load";
  f.weather_channels = {"SYS/temp_c", "SYS/ghi_wm2"};
  return f;
}

ForecasterFactory linear_factory(int epochs = 15) {
  return [epochs] {
    objectives::ObjectiveConfig cfg;
    forecast::FitOptions fit;
    fit.epochs = epochs;
    return std::make_unique<forecast::LinearQuantileForecaster>(feature_options(), cfg, fit);
  };
}

ForecasterFactory naive_factory() {
  return [] { return std::make_unique<forecast::SeasonalNaiveForecaster>("SYS/load"); };
}

RunOptions run_options() {
  RunOptions o;
  o.load_channel = "SYS/load";
  return o;
}

QuantileForecastSet perfect_set(std::size_t issues, std::vector<int> leads) {
  std::vector<Instant> ts;
  std::vector<double> p, a;
  for (std::size_t i = 0; i < issues; ++i) {
    ts.push_back(at_hour(24 * static_cast<long>(i)));
    for (std::size_t l = 0; l < leads.size(); ++l) {
      const double y = 20000 + 10.0 * i + l;
      a.push_back(y);
      p.insert(p.end(), {y - 100, y, y + 100});
    }
  }
  return QuantileForecastSet(ts, std::move(leads), {0.025, 0.5, 0.975}, p, a);
}

std::vector<int> all_leads() {
  std::vector<int> l(48);
  for (int i = 0; i < 48; ++i) l[i] = i + 1;
  return l;
}

}  // namespace

TEST(Schedule, MinimalRangeHasOneIssue) {
  auto s = make_schedule(range_hours(180 * 24 + 48));
  ASSERT_EQ(s.folds.size(), 1u);
  EXPECT_EQ(s.issue_count(), 1u);
  const auto& f = s.folds[0];
  EXPECT_EQ(f.cutoff, at_hour(180 * 24 - 1));
  EXPECT_EQ(f.train, (TimeRange{at_hour(0), at_hour(180 * 24)}));
  EXPECT_EQ(f.validation, (TimeRange{at_hour(150 * 24), at_hour(180 * 24)}));
  EXPECT_EQ(code_of([] { make_schedule(range_hours(180 * 24 + 47)); }), ErrorCode::insufficient_data);
}

TEST(Schedule, MatchesEnumerationOn730Days) {
  const ScheduleParams p;
  const auto r = range_hours(730 * 24);
  auto s = make_schedule(r, p);
  auto e = enumerate(r, p);
  EXPECT_EQ(s.folds.size(), e.folds);
  EXPECT_EQ(s.issue_count(), e.issues.size());
  EXPECT_EQ(s.issue_times(), e.issues);
  EXPECT_EQ(s.folds.size(), 7u);
}

TEST(Schedule, MatchesEnumerationOnOddLengths) {
  for (long extra : {0L, 1L, 23L, 47L, 48L, 49L, 24L * 89, 24L * 90, 24L * 91 + 5}) {
    const auto r = range_hours(180 * 24 + 48 + extra);
    auto s = make_schedule(r);
    auto e = enumerate(r, {});
    EXPECT_EQ(s.issue_times(), e.issues) << extra;
    EXPECT_EQ(s.folds.size(), e.folds) << extra;
  }
}

TEST(Schedule, FoldInvariants) {
  auto s = make_schedule(range_hours(730 * 24));
  Instant prev_end{};
  std::set<Instant> seen;
  for (std::size_t k = 0; k < s.folds.size(); ++k) {
    const auto& f = s.folds[k];
    EXPECT_EQ(f.index, k);
    EXPECT_EQ(f.train.begin, at_hour(0));
    EXPECT_EQ(f.train.end, f.cutoff + hours(1));
    EXPECT_EQ(f.validation.end, f.train.end);
    EXPECT_EQ(f.validation.length(), days(30));
    if (k > 0) {
      EXPECT_GT(f.train.end, prev_end);
    }
    prev_end = f.train.end;
    for (Instant t : f.eval_issue_times) {
      EXPECT_GE(t, f.cutoff);
      if (k + 1 < s.folds.size()) {
        EXPECT_LT(t, s.folds[k + 1].cutoff);
      }
      // First target hour is after the last training hour.
      EXPECT_GT(t + hours(1), f.cutoff);
      EXPECT_TRUE(seen.insert(t).second);
    }
  }
}

TEST(Schedule, DropPartialBlock) {
  ScheduleParams p;
  p.keep_partial = false;
  auto keep = make_schedule(range_hours(730 * 24));
  auto drop = make_schedule(range_hours(730 * 24), p);
  EXPECT_EQ(drop.folds.size() + 1, keep.folds.size());
  ScheduleParams bad;
  bad.stride_hours = 0;
  EXPECT_EQ(code_of([&] { make_schedule(range_hours(900 * 24), bad); }), ErrorCode::invalid_config);
}

TEST(Schedule, FixedSplitProportions) {
  auto s = make_fixed_split(range_hours(1000));
  ASSERT_EQ(s.folds.size(), 1u);
  const auto& f = s.folds[0];
  EXPECT_EQ(f.train.end, at_hour(800));
  EXPECT_EQ(f.validation, (TimeRange{at_hour(700), at_hour(800)}));
  EXPECT_EQ(f.eval_issue_times.front(), at_hour(799));
  EXPECT_LE(f.eval_issue_times.back() + hours(48), at_hour(999));
  EXPECT_EQ(s.kind, ScheduleKind::fixed_split);
}

TEST(Schedule, HashIsStableAndSensitive) {
  auto a = make_schedule(range_hours(400 * 24));
  auto b = make_schedule(range_hours(400 * 24));
  auto c = make_schedule(range_hours(401 * 24));
  EXPECT_EQ(schedule_hash(a), schedule_hash(b));
  EXPECT_NE(schedule_hash(a), schedule_hash(c));
  EXPECT_EQ(schedule_hash(a).size(), 16u);
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Runner, SeasonalNaiveOnWeeklyDataScoresZero) {
  const std::size_t n = 400 * 24;
  std::vector<double> load(n);
  for (std::size_t i = 0; i < n; ++i) load[i] = 20000 + 2500 * std::sin(2 * std::numbers::pi * (i % 168) / 168.0);
  auto frame = testutil::make_frame({{"SYS/load", {ChannelKind::load, load}}});
  auto s = make_schedule(frame.range());
  auto r = run_backtest(frame, s, naive_factory(), run_options());
  EXPECT_EQ(r.forecasts.issue_count(), s.issue_count());
  for (int h = 1; h <= 48; ++h) {
    std::vector<int> lead{h};
    auto pts = r.forecasts.scored_points(lead);
    EXPECT_EQ(metrics::mape(pts.actual, pts.forecast), 0.0) << h;
  }
}

TEST(Runner, ModelsShareEvaluationWindows) {
  auto frame = synth_frame(400, 3);
  auto s = make_schedule(frame.range());
  auto a = run_backtest(frame, s, naive_factory(), run_options());
  auto b = run_backtest(frame, s, linear_factory(), run_options());
  ASSERT_GT(a.forecasts.issue_count(), 0u);
  EXPECT_TRUE(std::equal(a.forecasts.issue_times().begin(), a.forecasts.issue_times().end(),
                         b.forecasts.issue_times().begin(), b.forecasts.issue_times().end()));
  EXPECT_TRUE(std::equal(a.forecasts.lead_hours().begin(), a.forecasts.lead_hours().end(),
                         b.forecasts.lead_hours().begin(), b.forecasts.lead_hours().end()));
  EXPECT_TRUE(std::equal(a.forecasts.actuals().begin(), a.forecasts.actuals().end(),
                         b.forecasts.actuals().begin(), b.forecasts.actuals().end()));
  EXPECT_TRUE(b.forecasts.non_crossing());
}

TEST(Runner, PostCutoffPerturbationLeavesFoldParametersUnchanged) {
  auto frame = synth_frame(400, 4);
  auto s = make_schedule(frame.range());
  ASSERT_GE(s.folds.size(), 2u);
  auto base = run_backtest(frame, s, linear_factory(), run_options());
  for (std::size_t k = 0; k + 1 < s.folds.size(); ++k) {
    const Instant end = s.folds[k].train.end;
    auto shaken = frame;
    for (const auto& id : frame.column_ids()) {
      shaken = shaken.transformed(id, [&](Instant t, double v) { return t >= end ? v * 1.7 + 13 : v; });
    }
    auto pert = run_backtest(shaken, s, linear_factory(), run_options());
    EXPECT_EQ(pert.folds[k].parameters, base.folds[k].parameters) << "fold " << k;
    EXPECT_FALSE(pert.folds[k].parameters.empty());
    // The next fold trains on the perturbed hours and must notice.
    EXPECT_NE(pert.folds[k + 1].parameters, base.folds[k + 1].parameters);
  }
}

TEST(Runner, FitWindowTargetsStayInsideTheirRanges) {
  auto frame = synth_frame(400, 5);
  auto s = make_schedule(frame.range());
  const auto o = run_options();
  for (const auto& f : s.folds) {
    auto w = fit_window(frame.slice(f.train), f, s.params, o);
    ASSERT_FALSE(w.train_issues.empty());
    for (Instant t : w.train_issues) EXPECT_LT(t + hours(48), f.validation.begin);
    for (Instant t : w.validation_issues) {
      EXPECT_GE(t + hours(1), f.validation.begin);
      EXPECT_LT(t + hours(48), f.train.end);
    }
  }
}

TEST(Runner, FoldWithoutUsableIssuesIsRecorded) {
  auto frame = synth_frame(400, 6);
  auto s = make_schedule(frame.range());
  ASSERT_GE(s.folds.size(), 3u);
  // Blank the load across fold 1's evaluation block.
  const Instant lo = s.folds[1].cutoff - hours(48);
  const Instant hi = s.folds[2].cutoff;
  std::map<std::string, data::AlignedFrame::Column> cols = frame.columns();
  for (std::size_t i = 0; i < frame.length(); ++i) {
    const Instant t = frame.time_at(i);
    if (t > lo && t < hi) cols["SYS/load"].mask[i] = false;
  }
  data::AlignedFrame holed(frame.start(), frame.length(), cols);
  auto r = run_backtest(holed, s, naive_factory(), run_options());
  EXPECT_EQ(r.folds[1].evaluated_issues, 0u);
  EXPECT_GT(r.folds[1].scheduled_issues, 0u);
  EXPECT_GT(r.folds[0].evaluated_issues, 0u);
  EXPECT_EQ(r.forecasts.issue_count(), r.folds[0].evaluated_issues + r.folds[2].evaluated_issues +
                                           (r.folds.size() > 3 ? r.folds[3].evaluated_issues : 0));
}

TEST(Runner, FoldErrorsCarryTheFoldIndex) {
  const std::size_t n = 400 * 24;
  auto frame = testutil::make_frame({{"SYS/load", {ChannelKind::load, std::vector<double>(n, 100.0)}}});
  auto s = make_schedule(frame.range());
  ForecasterFactory broken = [] {
    objectives::ObjectiveConfig cfg;
    forecast::FeatureOptions f;
    f.load_channel = "SYS/load";
    f.include_time_features = false;
    return std::make_unique<forecast::LinearQuantileForecaster>(f, cfg, forecast::FitOptions{});
  };
  try {
    run_backtest(frame, s, broken, run_options());
    ADD_FAILURE() << "constant load should not fit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_design);
    EXPECT_NE(e.context().find("fold 0"), std::string::npos) << e.context();
  }
}

TEST(Report, PerfectForecastRow) {
  ModelRun run{"oracle", "exact", perfect_set(10, all_leads()), {}, ""};
  ReportContext ctx;
  auto row = score_run(run, ctx);
  EXPECT_EQ(row.metrics.mape_pct, 0.0);
  EXPECT_EQ(row.metrics.upr_pct, 0.0);
  EXPECT_EQ(row.metrics.opr_pct, 0.0);
  EXPECT_EQ(row.metrics.tie_pct, 100.0);
  EXPECT_EQ(row.metrics.reserve_mw, 0.0);
  EXPECT_EQ(row.metrics.reserve_pct, 0.0);
  EXPECT_EQ(row.metrics.bias_mw, 0.0);
  EXPECT_EQ(row.metrics.n_points, 480u);
  ASSERT_EQ(row.per_lead_mape.size(), 4u);
  EXPECT_EQ(row.per_lead_mape[2].first, 12);
}

TEST(Report, FixedSplitScoresLead24Only) {
  ModelRun run{"m", "v", perfect_set(7, all_leads()), {}, ""};
  ReportContext ctx;
  ctx.mode = ReportMode::fixed_split;
  EXPECT_EQ(score_run(run, ctx).metrics.n_points, 7u);
  ModelRun empty{"m", "v", {}, {}, ""};
  EXPECT_EQ(code_of([&] { score_run(empty, ctx); }), ErrorCode::empty_set);
}

TEST(Report, FoldMeanAndStd) {
  auto fs = perfect_set(4, {1, 24});
  // Two folds with MAPE 1% and 3% at every point.
  auto scaled = [&](double pct, std::size_t first) {
    auto part = fs.issue_slice(first, 2);
    std::vector<double> p(part.predictions().begin(), part.predictions().end());
    for (std::size_t i = 0; i < part.issue_count(); ++i) {
      for (std::size_t l = 0; l < part.lead_count(); ++l) {
        for (std::size_t k = 0; k < 3; ++k) p[part.flat_index(i, l, k)] = part.actual(i, l) * (1 + pct / 100);
      }
    }
    return part.with_predictions(p);
  };
  std::vector<QuantileForecastSet> folds{scaled(1, 0), scaled(3, 2)};
  ModelRun run{"m", "v", QuantileForecastSet::concat(folds), folds, ""};
  auto row = score_run(run, ReportContext{});
  EXPECT_NEAR(row.fold_mape_mean, 2.0, 1e-9);
  EXPECT_NEAR(row.fold_mape_std, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(row.metrics.mape_pct, 2.0, 1e-9);
  EXPECT_EQ(row.fold_count, 2u);
}

TEST(Report, TwoModelCsvAndDeterministicJson) {
  ReportContext ctx;
  ctx.schedule_hash = "0123456789abcdef";
  ctx.config_hash = "fedcba9876543210";
  ctx.tool_version = "test";
  std::vector<ModelRow> rows{score_run({"a", "x", perfect_set(5, all_leads()), {}, "fa.csv"}, ctx),
                             score_run({"b", "y", perfect_set(6, all_leads()), {}, "fb.csv"}, ctx)};
  const auto csv = report_csv(rows, ctx);
  std::vector<std::string> lines;
  std::stringstream ss(csv);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].rfind("model,variant,mode,mape_pct,upr_pct,opr_pct,tie_pct,bias_24h_mw,", 0), 0u);
  EXPECT_EQ(lines[1].rfind("a,x,walkforward,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("b,y,walkforward,", 0), 0u);
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(commas(lines[0]), commas(lines[1]));
  EXPECT_EQ(report_csv(rows, ctx), csv);

  auto j = report_json(rows, ctx);
  EXPECT_EQ(j["models"].size(), 2u);
  const auto& m0 = j["models"][0];
  for (const char* k : {"model", "variant", "mode", "metrics", "per_lead_mape", "schedule_hash"}) {
    EXPECT_TRUE(m0.contains(k)) << k;
  }
  for (const char* k : {"1", "6", "12", "24"}) EXPECT_TRUE(m0["per_lead_mape"].contains(k)) << k;
  EXPECT_EQ(j["schedule_hash"], "0123456789abcdef");
}

TEST(Report, SeededBacktestJsonIsByteIdentical) {
  auto frame = synth_frame(300, 11);
  auto s = make_schedule(frame.range());
  ReportContext ctx;
  ctx.schedule_hash = schedule_hash(s);
  auto once = [&] {
    auto r = run_backtest(frame, s, linear_factory(10), run_options());
    std::vector<QuantileForecastSet> folds;
    for (const auto& f : r.folds) {
      if (!f.forecasts.empty()) folds.push_back(f.forecasts);
    }
    std::vector<ModelRow> rows{score_run({"lq", "default", r.forecasts, folds, ""}, ctx)};
    return report_json(rows, ctx).dump(2) + forecast_csv(r.forecasts);
  };
  EXPECT_EQ(once(), once());
}

TEST(Report, ForecastCsvRoundTrip) {
  auto fs = perfect_set(3, {1, 2, 24});
  const auto dir = testutil::scratch_dir("fcsv");
  testutil::write_text(dir / "f.csv", forecast_csv(fs, "config_hash=abc tool_version=1"));
  const auto text = testutil::read_text(dir / "f.csv");
  EXPECT_EQ(text.rfind("# config_hash=abc", 0), 0u);
  auto back = read_forecast_csv((dir / "f.csv").string());
  EXPECT_EQ(back.issue_count(), 3u);
  EXPECT_EQ(std::vector<int>(back.lead_hours().begin(), back.lead_hours().end()), (std::vector<int>{1, 2, 24}));
  EXPECT_TRUE(std::equal(back.predictions().begin(), back.predictions().end(), fs.predictions().begin()));
  EXPECT_TRUE(std::equal(back.actuals().begin(), back.actuals().end(), fs.actuals().begin()));
}
