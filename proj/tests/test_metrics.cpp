#include <gtest/gtest.h>

#include <random>

#include "gridrisk/metrics/dm_test.hpp"
#include "gridrisk/metrics/forecast_set.hpp"
#include "gridrisk/metrics/risk_metrics.hpp"
#include "gridrisk/metrics/risk_report.hpp"
#include "test_util.hpp"

using namespace gridrisk;
using namespace gridrisk::metrics;
using testutil::at_hour;
using testutil::code_of;

namespace {

/// One lead (24), median-only set built from point forecasts.
QuantileForecastSet point_set(const std::vector<double>& y, const std::vector<double>& yhat, int lead = 24) {
  std::vector<Instant> issues;
  for (std::size_t i = 0; i < y.size(); ++i) issues.push_back(at_hour(24 * static_cast<long>(i)));
  return QuantileForecastSet(issues, {lead}, {0.5}, yhat, y);
}

std::vector<double> normal_draws(std::size_t n, double mean, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(Mape, Examples) {
  std::vector<double> y{100, 200}, f{110, 180};
  EXPECT_DOUBLE_EQ(mape(y, f), 10.0);
  EXPECT_DOUBLE_EQ(mape(y, y), 0.0);
  std::vector<double> z{0, 200};
  EXPECT_EQ(code_of([&] { mape(z, f); }), ErrorCode::non_positive_actual);
  std::vector<double> one{1};
  EXPECT_EQ(code_of([&] { mape(y, one); }), ErrorCode::length_mismatch);
}

TEST(DirectionRates, Examples) {
  std::vector<double> y{1, 2, 3}, f{0, 3, 3};
  auto r = direction_rates(y, f);
  EXPECT_NEAR(r.upr_pct, 100.0 / 3, 1e-12);
  EXPECT_NEAR(r.opr_pct, 100.0 / 3, 1e-12);
  EXPECT_NEAR(r.tie_pct, 100.0 / 3, 1e-12);
  EXPECT_DOUBLE_EQ(r.upr_pct + r.opr_pct + r.tie_pct, 100.0);

  std::vector<double> up{2, 3, 4};
  r = direction_rates(y, up);
  EXPECT_DOUBLE_EQ(r.upr_pct, 0.0);
  EXPECT_DOUBLE_EQ(r.opr_pct, 100.0);
  EXPECT_DOUBLE_EQ(r.tie_pct, 0.0);
}

TEST(DirectionRates, SumToHundredOnRandomSets) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 200);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    std::vector<double> y(n), f(n);
    for (int i = 0; i < n; ++i) {
      y[i] = 1000 + small(rng);
      f[i] = 1000 + small(rng);
    }
    auto r = direction_rates(y, f);
    EXPECT_EQ(r.upr_pct + r.opr_pct + r.tie_pct, 100.0) << trial;
  }
}

TEST(DirectionRates, TableRowFixture) {
  // 435 under-forecast and 565 over-forecast points: UPR 43.5, OPR 56.5.
  std::vector<double> y(1000, 20000.0), f(1000);
  for (int i = 0; i < 1000; ++i) f[i] = i < 435 ? 19900.0 : 20100.0;
  auto rep = compute_risk_report(point_set(y, f));
  EXPECT_DOUBLE_EQ(rep.upr_pct, 43.5);
  EXPECT_DOUBLE_EQ(rep.opr_pct, 56.5);
  EXPECT_DOUBLE_EQ(rep.tie_pct, 0.0);
  const auto j = to_json(rep);
  EXPECT_DOUBLE_EQ(j["upr_pct"].get<double>() + j["opr_pct"].get<double>() + j["tie_pct"].get<double>(), 100.0);
}

TEST(Bias, Examples) {
  EXPECT_DOUBLE_EQ(bias_at_horizon(point_set({100}, {105}), 24), 5.0);
  EXPECT_DOUBLE_EQ(bias_at_horizon(point_set({100, 50}, {100, 50}), 24), 0.0);
  EXPECT_DOUBLE_EQ(bias_at_horizon(point_set({100, 100}, {110, 96}), 24), 3.0);
  EXPECT_EQ(code_of([] { bias_at_horizon(point_set({100}, {105}), 12); }), ErrorCode::missing_lead);
}

TEST(Bias, UsesPointHeadOfMultiQuantileSet) {
  QuantileForecastSet fs({at_hour(0)}, {24}, {0.1, 0.5, 0.9}, {90, 104, 120}, {100});
  EXPECT_DOUBLE_EQ(bias_at_horizon(fs, 24), 4.0);
}

TEST(Percentile, Examples) {
  std::vector<double> one{5};
  for (double p : {0.0, 37.0, 99.5, 100.0}) EXPECT_DOUBLE_EQ(percentile(one, p), 5.0);
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i + 1;
  EXPECT_NEAR(percentile(v, 99.5), 99.505, 1e-12);
  EXPECT_DOUBLE_EQ(percentile(v, 0), 1.0);
  EXPECT_DOUBLE_EQ(percentile(v, 100), 100.0);
  std::vector<double> none;
  EXPECT_EQ(code_of([&] { percentile(none, 50); }), ErrorCode::empty_set);
  EXPECT_EQ(code_of([&] { percentile(v, 101); }), ErrorCode::invalid_argument);
}

TEST(Percentile, MatchesSortOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(1, 300);
  std::uniform_real_distribution<double> p(0.0, 100.0);
  std::lognormal_distribution<double> val(5.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(len(rng));
    for (auto& x : v) x = val(rng);
    const double pp = p(rng);
    const double ref = testutil::oracle_percentile(v, pp);
    EXPECT_LE(std::abs(percentile(v, pp) - ref), 1e-12 * std::abs(ref)) << trial;
  }
}

TEST(Reserve, ZeroWhenNeverUnder) {
  std::vector<double> y{100, 200, 300}, f{100, 250, 301};
  EXPECT_EQ(reserve(y, f, 99.5, ReserveBasis::mw), 0.0);
  EXPECT_EQ(reserve(y, f, 99.5, ReserveBasis::pct), 0.0);
}

TEST(Reserve, AscendingUnderErrors) {
  std::vector<double> y(1000), f(1000, 10000.0), clipped(1000);
  for (int i = 0; i < 1000; ++i) {
    y[i] = 10000.0 + (i + 1);
    clipped[i] = i + 1;
  }
  EXPECT_DOUBLE_EQ(reserve(y, f, 99.5, ReserveBasis::mw), testutil::oracle_percentile(clipped, 99.5));
}

TEST(Reserve, ConstantDenominatorIdentity) {
  std::vector<double> y(400, 9000.0), f(400, 10000.0);
  y[123] = 10500.0;
  for (double p : {0.0, 50.0, 99.0, 99.5, 99.9, 100.0}) {
    const double mw = reserve(y, f, p, ReserveBasis::mw);
    EXPECT_NEAR(reserve(y, f, p, ReserveBasis::pct), 100.0 * mw / 10000.0, 1e-12) << p;
  }
  EXPECT_DOUBLE_EQ(reserve(y, f, 100.0, ReserveBasis::mw), 500.0);
}

TEST(Reserve, MonotoneInPercentile) {
  auto y = normal_draws(2000, 20000, 800, 2);
  auto f = normal_draws(2000, 20000, 800, 3);
  double prev = -1;
  for (double p = 0; p <= 100.0; p += 0.5) {
    const double r = reserve(y, f, p, ReserveBasis::mw);
    EXPECT_GE(r, prev);
    prev = r;
  }
  double mx = 0;
  for (std::size_t i = 0; i < y.size(); ++i) mx = std::max(mx, y[i] - f[i]);
  EXPECT_DOUBLE_EQ(reserve(y, f, 100.0, ReserveBasis::mw), mx);
}

TEST(Reserve, Errors) {
  std::vector<double> y{100}, f{0};
  EXPECT_EQ(code_of([&] { reserve(y, f, 99.5, ReserveBasis::pct); }), ErrorCode::non_positive_forecast);
  std::vector<double> none;
  EXPECT_EQ(code_of([&] { reserve(none, none, 99.5, ReserveBasis::mw); }), ErrorCode::empty_set);
}

TEST(Reserve, SetOverloadHonoursLeads) {
  // Lead 1 under by 50, lead 24 under by 10.
  QuantileForecastSet fs({at_hour(0)}, {1, 24}, {0.5}, {100, 100}, {150, 110});
  std::vector<int> l24{24};
  EXPECT_DOUBLE_EQ(reserve(fs, 100, ReserveBasis::mw, l24), 10.0);
  EXPECT_DOUBLE_EQ(reserve(fs, 100, ReserveBasis::mw), 50.0);
}

TEST(LargeErrors, Examples) {
  std::vector<double> y{10000, 10000, 10000}, f{10500, 8500, 12500}, th{1000, 2000};
  auto c = large_error_counts(y, f, th);
  EXPECT_EQ(c.at(1000), 2u);
  EXPECT_EQ(c.at(2000), 1u);
  auto z = large_error_counts(y, y, th);
  EXPECT_EQ(z.at(1000), 0u);
  EXPECT_EQ(z.at(2000), 0u);
}

TEST(LargeErrors, MatchesBruteForce) {
  auto y = normal_draws(10000, 20000, 1500, 8);
  auto f = normal_draws(10000, 20000, 1500, 9);
  std::vector<double> th{250, 1000, 1500, 2000, 5000};
  auto c = large_error_counts(y, f, th);
  for (double t : th) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < y.size(); ++i) n += std::abs(y[i] - f[i]) > t;
    EXPECT_EQ(c.at(t), n) << t;
  }
}

TEST(InflationPathology, ShiftingForecastsUpIsMonotone) {
  auto y = normal_draws(3000, 20000, 600, 21);
  auto f = normal_draws(3000, 20000, 600, 22);
  auto base = compute_risk_report(point_set(y, f));
  for (double c : {1.0, 50.0, 400.0, 2000.0}) {
    auto g = f;
    for (auto& x : g) x += c;
    auto r = compute_risk_report(point_set(y, g));
    EXPECT_LE(r.reserve_mw, base.reserve_mw) << c;
    EXPECT_LE(r.upr_pct, base.upr_pct) << c;
    EXPECT_GE(r.opr_pct, base.opr_pct) << c;
    EXPECT_GE(r.bias_mw, base.bias_mw) << c;
    base = r;
  }
}

TEST(DmTest, IdenticalSeries) {
  auto e = normal_draws(500, 0, 1, 4);
  auto r = dm_test(e, e, 24);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(DmTest, DetectsVarianceGap) {
  auto a = normal_draws(10000, 0, 1, 100);
  auto b = normal_draws(10000, 0, std::sqrt(2.0), 101);
  auto r = dm_test(a, b, 24);
  EXPECT_LT(r.p_value, 0.001);
  EXPECT_LT(r.statistic, 0.0);
}

TEST(DmTest, NullIsNotRejectedOften) {
  // Same distribution: a 5% test should reject in roughly 5% of trials.
  int rejections = 0;
  for (int s = 0; s < 200; ++s) {
    auto a = normal_draws(1000, 0, 1, 1000 + 2 * s);
    auto b = normal_draws(1000, 0, 1, 1001 + 2 * s);
    rejections += dm_test(a, b, 1).p_value < 0.05;
  }
  EXPECT_LT(rejections, 25);
}

TEST(DmTest, Antisymmetric) {
  auto a = normal_draws(800, 0, 1.1, 30);
  auto b = normal_draws(800, 0, 1.0, 31);
  auto ab = dm_test(a, b, 6);
  auto ba = dm_test(b, a, 6);
  EXPECT_DOUBLE_EQ(ab.statistic, -ba.statistic);
  EXPECT_DOUBLE_EQ(ab.p_value, ba.p_value);
}

TEST(DmTest, HandComputedHac) {
  // d = a^2 - b^2 = {1, 3, -1, 5}, h = 2 -> one Bartlett lag with weight 1/2.
  std::vector<double> a{1, 2, 0, 3}, b{0, 1, 1, 2};
  auto r = dm_test(a, b, 2);
  const double mean = 2.0;
  const std::vector<double> d{1, 3, -1, 5};
  double g0 = 0, g1 = 0;
  for (int i = 0; i < 4; ++i) g0 += (d[i] - mean) * (d[i] - mean);
  for (int i = 1; i < 4; ++i) g1 += (d[i] - mean) * (d[i - 1] - mean);
  g0 /= 4;
  g1 /= 4;
  const double v = g0 + 2 * 0.5 * g1;
  EXPECT_NEAR(r.long_run_variance, v, 1e-12);
  EXPECT_NEAR(r.statistic, mean / std::sqrt(v / 4), 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::abs(r.statistic) / std::sqrt(2.0)), 1e-12);
}

TEST(DmTest, Guards) {
  std::vector<double> a{1, 2, 3}, b{1, 2, 3};
  EXPECT_EQ(code_of([&] { dm_test(a, b, 3); }), ErrorCode::invalid_argument);
  std::vector<double> c{1, 2};
  EXPECT_EQ(code_of([&] { dm_test(a, c, 1); }), ErrorCode::length_mismatch);
  // Constant non-zero differential.
  std::vector<double> x{2, 2, 2, 2}, z{1, 1, 1, 1};
  EXPECT_EQ(code_of([&] { dm_test(x, z, 1); }), ErrorCode::degenerate_differential);
}

TEST(RiskReport, JsonKeysAndRoundTrip) {
  auto y = normal_draws(200, 20000, 500, 40);
  auto f = normal_draws(200, 20000, 500, 41);
  auto rep = compute_risk_report(point_set(y, f));
  auto j = to_json(rep);
  for (const char* k : {"mape_pct", "upr_pct", "reserve_p995_pct", "bias_24h_mw", "opr_pct", "reserve_p995_mw",
                        "tie_pct", "n_points", "large_error_counts"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j["n_points"].get<std::size_t>(), 200u);
  auto back = risk_report_from_json(j);
  EXPECT_DOUBLE_EQ(back.mape_pct, rep.mape_pct);
  EXPECT_DOUBLE_EQ(back.reserve_mw, rep.reserve_mw);
  EXPECT_EQ(back.large_error_counts, rep.large_error_counts);
}

TEST(ForecastSet, NonCrossingAndSlices) {
  QuantileForecastSet fs({at_hour(0), at_hour(24)}, {1, 2}, {0.1, 0.5, 0.9},
                         {1, 2, 3, 1, 1, 1, 3, 2, 1, 0, 5, 9}, {2, 2, 2, 2});
  EXPECT_FALSE(fs.non_crossing());
  auto first = fs.issue_slice(0, 1);
  EXPECT_TRUE(first.non_crossing());
  EXPECT_EQ(first.issue_count(), 1u);
  auto pts = fs.scored_points();
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_DOUBLE_EQ(pts.forecast[2], 2.0);
  EXPECT_EQ(code_of([] { QuantileForecastSet({at_hour(0)}, {1}, {0.9, 0.5}, {1, 2}, {1}); }),
            ErrorCode::invalid_level);
}
