#include <gtest/gtest.h>

#include <random>

#include "gridrisk/policy/asymmetry.hpp"
#include "test_util.hpp"

using namespace gridrisk;
using namespace gridrisk::policy;
using testutil::at_hour;
using testutil::code_of;

namespace {

HourlySeries price(const std::string& id, data::ChannelKind kind, const std::vector<double>& v) {
  return testutil::make_series(id, kind, v.size(), [&](std::size_t i) { return v[i]; });
}

}  // namespace

TEST(Spread, Examples) {
  std::vector<double> s{10, -5};
  auto d = spread_decompose(s);
  EXPECT_EQ(d.s_plus, (std::vector<double>{10, 0}));
  EXPECT_EQ(d.s_minus, (std::vector<double>{0, 5}));
  std::vector<double> z(4, 0.0);
  auto dz = spread_decompose(z);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(dz.s_plus[i] + dz.s_minus[i], 0.0);
}

TEST(Spread, PointwiseIdentities) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 20);
  std::vector<double> s(5000);
  for (auto& x : s) x = n(rng);
  auto d = spread_decompose(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(d.s_plus[i] * d.s_minus[i], 0.0);
    EXPECT_EQ(d.s_plus[i] - d.s_minus[i], s[i]);
    EXPECT_GE(d.s_plus[i], 0.0);
    EXPECT_GE(d.s_minus[i], 0.0);
  }
}

TEST(Spread, FromPriceSeriesUsesSharedHours) {
  auto da = price("N/DAM", data::ChannelKind::lmp_da, {30, 30, 30, 30});
  // RT covers hours 2..5 only.
  std::vector<data::Instant> ts{at_hour(2), at_hour(3), at_hour(4), at_hour(5)};
  HourlySeries rt("N/RTM", data::ChannelKind::lmp_rt, ts, {40, 25, 30, 99});
  auto d = spread_decompose(da, rt);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.spread, (std::vector<double>{10, -5}));
  EXPECT_EQ(d.timestamps[0], at_hour(2));

  HourlySeries late("N/RTM", data::ChannelKind::lmp_rt, {at_hour(50)}, {1});
  EXPECT_EQ(code_of([&] { spread_decompose(da, late); }), ErrorCode::no_overlap);
}

TEST(RhoPrice, Examples) {
  auto d = spread_decompose(std::vector<double>{10, -5});
  EXPECT_DOUBLE_EQ(rho_price(d.s_plus, d.s_minus), 2.0);
  auto sym = spread_decompose(std::vector<double>{3, -3, 7.5, -7.5, 1, -1});
  EXPECT_DOUBLE_EQ(rho_price(sym.s_plus, sym.s_minus), 1.0);
  auto pos = spread_decompose(std::vector<double>{1, 2, 3});
  EXPECT_EQ(code_of([&] { rho_price(pos.s_plus, pos.s_minus); }), ErrorCode::degenerate_spread);
}

TEST(RhoPrice, InvariantToZeroHoursAndScale) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(1, 15);
  std::vector<double> s(800);
  for (auto& x : s) x = n(rng);
  auto base = spread_decompose(s);
  const double r = rho_price(base.s_plus, base.s_minus);

  auto padded = s;
  padded.insert(padded.end(), 300, 0.0);
  auto p = spread_decompose(padded);
  EXPECT_NEAR(rho_price(p.s_plus, p.s_minus), r, 1e-12 * r);

  auto scaled = s;
  for (auto& x : scaled) x *= 3.7;
  auto sc = spread_decompose(scaled);
  EXPECT_NEAR(rho_price(sc.s_plus, sc.s_minus), r, 1e-12 * r);
}

TEST(RhoEvent, HandBuiltFourHours) {
  std::vector<double> delta{1, 1, -1, -1}, s{8, 4, -2, -6};
  std::vector<double> load(4, 100.0), fc(4);
  for (int i = 0; i < 4; ++i) fc[i] = load[i] - delta[i];
  auto e = rho_event(s, load, fc, 1);
  ASSERT_TRUE(e);
  EXPECT_DOUBLE_EQ(e->c_under, 6.0);
  EXPECT_DOUBLE_EQ(e->c_over, 4.0);
  EXPECT_DOUBLE_EQ(e->rho, 1.5);
  EXPECT_EQ(e->under_hours, 2u);
  EXPECT_EQ(e->over_hours, 2u);
}

TEST(RhoEvent, AbsentWhenOneSidedOrThin) {
  std::vector<double> s{8, 4, -2, -6}, load(4, 100.0), fc(4, 90.0);
  EXPECT_FALSE(rho_event(s, load, fc, 1));
  std::vector<double> fc2{99, 99, 101, 101};
  EXPECT_FALSE(rho_event(s, load, fc2, 3));
  // No negative spread on the over-forecast hours: C_over = 0.
  std::vector<double> s2{8, 4, 2, 6};
  EXPECT_FALSE(rho_event(s2, load, fc2, 1));
}

TEST(QStar, MappingAndProperties) {
  EXPECT_DOUBLE_EQ(q_star(1.0), 0.5);
  EXPECT_DOUBLE_EQ(q_star(3.0), 0.75);
  EXPECT_DOUBLE_EQ(q_star(0.0), 0.0);
  EXPECT_EQ(code_of([] { q_star(-0.1); }), ErrorCode::negative_rho);
  double prev = -1;
  for (double r = 0.01; r < 50; r *= 1.3) {
    const double q = q_star(r);
    EXPECT_GT(q, prev);
    EXPECT_NEAR(q_star(1.0 / r), 1.0 - q, 1e-12);
    EXPECT_NEAR(q / (1 - q), r, 1e-12 * std::max(1.0, r * r));
    prev = q;
  }
}

TEST(QStar, RoundedTableRows) {
  // Ratios carry two decimals and levels three; each level lies in the image of
  // the ratio's rounding interval.
  const struct {
    double rho, q;
  } rows[] = {{0.78, 0.439}, {0.71, 0.414}, {0.74, 0.426}, {0.26, 0.204}};
  for (const auto& r : rows) {
    EXPECT_LE(q_star(r.rho - 0.005), r.q + 0.0005) << r.rho;
    EXPECT_GE(q_star(r.rho + 0.005), r.q - 0.0005) << r.rho;
  }
  EXPECT_NEAR(q_star(0.78), 0.439, 1e-3);
  EXPECT_NEAR(q_star(0.78), 0.4382, 1e-4);
  EXPECT_NEAR(q_star(0.26), 0.206, 1e-3);
  EXPECT_NEAR(q_star(0.26), 0.204, 3e-3);
  EXPECT_LE(std::abs(std::lround(1000 * q_star(0.71)) - 414), 1);
}

TEST(QTarget, FloorAndKappa) {
  EXPECT_DOUBLE_EQ(q_target(0.78, 1.0), 0.5);
  EXPECT_NEAR(q_target(0.78, 2.0), 0.609, 1e-3);
  EXPECT_EQ(code_of([] { q_target(1.0, 0.9); }), ErrorCode::kappa_below_one);
  double prev = 0;
  for (double k = 1.0; k < 20; k += 0.25) {
    const double q = q_target(1.0, k);
    EXPECT_NEAR(q, k / (1 + k), 1e-15);
    EXPECT_GE(q, prev);
    EXPECT_GE(q, 0.5);
    EXPECT_GE(q_target(0.1, k), 0.5);
    prev = q;
  }
}

TEST(Estimate, EndToEndAndBiasInvariance) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0, 12), l(20000, 900);
  const std::size_t hours = 2000;
  std::vector<double> da(hours), rt(hours), load(hours), fc(hours);
  for (std::size_t i = 0; i < hours; ++i) {
    da[i] = 40 + 10 * std::sin(i * 0.26);
    rt[i] = da[i] + n(rng);
    load[i] = l(rng);
    fc[i] = load[i] + n(rng) * 40;
  }
  auto sda = price("N/DAM", data::ChannelKind::lmp_da, da);
  auto srt = price("N/RTM", data::ChannelKind::lmp_rt, rt);
  auto sload = price("N/load", data::ChannelKind::load, load);
  auto sfc = price("N/fc", data::ChannelKind::load, fc);

  EstimateOptions opt;
  opt.kappa = 1.5;
  auto est = estimate_asymmetry("N", sda, srt, &sload, &sfc, opt);
  EXPECT_EQ(est.hours, hours);
  EXPECT_NEAR(est.q_price_star, est.rho_price / (1 + est.rho_price), 1e-12);
  EXPECT_NEAR(est.rho_op, 1.5 * est.rho_price, 1e-12);
  EXPECT_DOUBLE_EQ(est.q_target, std::max(0.5, q_star(est.rho_op)));
  ASSERT_TRUE(est.rho_event);
  EXPECT_NEAR(*est.q_event_star, *est.rho_event / (1 + *est.rho_event), 1e-12);

  // Arbitrary forecast bias never reaches the price-only ratio.
  for (double b : {-5000.0, -1.0, 250.0, 1e5}) {
    auto biased = price("N/fc", data::ChannelKind::load, [&] {
      auto v = fc;
      for (auto& x : v) x += b;
      return v;
    }());
    auto e2 = estimate_asymmetry("N", sda, srt, &sload, &biased, opt);
    EXPECT_EQ(e2.rho_price, est.rho_price) << b;
    EXPECT_EQ(e2.q_price_star, est.q_price_star) << b;
  }
  auto without = estimate_asymmetry("N", sda, srt, nullptr, nullptr, opt);
  EXPECT_EQ(without.rho_price, est.rho_price);
  EXPECT_FALSE(without.rho_event);

  auto j = to_json(without);
  for (const char* k : {"node", "hours", "rho_price", "q_price_star", "rho_event", "q_event_star", "kappa", "rho_op",
                        "q_target"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_TRUE(j["rho_event"].is_null());
}

TEST(Rounding, TablePrecision) {
  EXPECT_DOUBLE_EQ(round_ratio(0.123456), 0.1235);
  EXPECT_DOUBLE_EQ(round_level(0.43820), 0.438);
}
