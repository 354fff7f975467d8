#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gridrisk/data/ingest.hpp"
#include "gridrisk/data/normalizer.hpp"
#include "gridrisk/data/series.hpp"
#include "gridrisk/data/time.hpp"
#include "test_util.hpp"

using namespace gridrisk;
using namespace gridrisk::data;
using testutil::at_hour;
using testutil::code_of;

namespace {

IngestResult ingest_text(const std::string& text, CsvSchema schema) {
  std::istringstream in(text);
  return ingest_csv(in, schema);
}

}  // namespace

TEST(Time, ParsesCommonForms) {
  const auto ref = parse_timestamp("2025-01-01T08:00:00Z");
  ASSERT_TRUE(ref);
  for (const char* s : {"2025-01-01T08:00:00-00:00", "2025-01-01T08:00:00", "2025-01-01 08:00:00", "2025-01-01T08:00"}) {
    auto t = parse_timestamp(s);
    ASSERT_TRUE(t) << s;
    EXPECT_EQ(*t, *ref) << s;
  }
  EXPECT_EQ(*parse_timestamp("2025-01-01T00:00:00-08:00"), *ref);
  EXPECT_FALSE(parse_timestamp("not a time"));
  EXPECT_EQ(format_timestamp(*ref), "2025-01-01T08:00:00Z");
}

TEST(Ingest, ThreeRowLoad) {
  auto r = ingest_text(
      "timestamp,area,load_mw\n"
      "2024-03-01T00:00:00Z,PGE,100\n"
      "2024-03-01T01:00:00Z,PGE,110\n"
      "2024-03-01T02:00:00Z,PGE,120\n",
      CsvSchema::load);
  ASSERT_EQ(r.series.size(), 1u);
  const auto& s = r.get("PGE/load");
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.gaps().empty());
  EXPECT_EQ(s.kind(), ChannelKind::load);
  EXPECT_DOUBLE_EQ(s.values()[2], 120.0);
}

TEST(Ingest, MissingHourIsAGap) {
  auto r = ingest_text(
      "timestamp,area,load_mw\n"
      "2024-03-01T00:00:00Z,PGE,100\n"
      "2024-03-01T02:00:00Z,PGE,120\n",
      CsvSchema::load);
  const auto& s = r.get("PGE/load");
  EXPECT_EQ(s.size(), 2u);
  auto gaps = s.gaps();
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_EQ(format_timestamp(gaps[0]), "2024-03-01T01:00:00Z");
}

TEST(Ingest, BadRowsAreDroppedAndCounted) {
  auto r = ingest_text(
      "timestamp,area,load_mw\n"
      "2024-03-01T00:00:00Z,PGE,100\n"
      "garbage,PGE,1\n"
      "2024-03-01T01:00:00Z,PGE,nan\n"
      "2024-03-01T02:00:00Z,PGE,\n"
      "2024-03-01T03:00:00Z,PGE,130\n",
      CsvSchema::load);
  EXPECT_EQ(r.dropped_rows, 3u);
  EXPECT_EQ(r.get("PGE/load").size(), 2u);
}

TEST(Ingest, RowOrderDoesNotMatter) {
  std::vector<std::string> rows;
  for (int h = 0; h < 24; ++h) {
    rows.push_back("2024-03-01T" + std::string(h < 10 ? "0" : "") + std::to_string(h) + ":00:00Z,SCE," +
                   std::to_string(1000 + 7 * h));
  }
  auto build = [&](const std::vector<std::string>& order) {
    std::string text = "timestamp,area,load_mw\n";
    for (const auto& r : order) text += r + "\n";
    return ingest_text(text, CsvSchema::load).get("SCE/load");
  };
  const auto a = build(rows);
  auto shuffled = rows;
  std::mt19937 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto b = build(shuffled);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  EXPECT_TRUE(std::equal(a.timestamps().begin(), a.timestamps().end(), b.timestamps().begin()));
}

TEST(Ingest, Duplicates) {
  auto same = ingest_text(
      "timestamp,area,load_mw\n"
      "2024-03-01T00:00:00Z,PGE,100\n"
      "2024-03-01T00:00:00Z,PGE,100\n",
      CsvSchema::load);
  EXPECT_EQ(same.get("PGE/load").size(), 1u);
  EXPECT_EQ(same.duplicate_rows, 1u);

  EXPECT_EQ(code_of([] {
              ingest_text(
                  "timestamp,area,load_mw\n"
                  "2024-03-01T00:00:00Z,PGE,100\n"
                  "2024-03-01T00:00:00Z,PGE,101\n",
                  CsvSchema::load);
            }),
            ErrorCode::duplicate_timestamp);
}

TEST(Ingest, HeaderAndEmptyErrors) {
  EXPECT_EQ(code_of([] { ingest_text("time,area,mw\n2024-03-01T00:00:00Z,PGE,1\n", CsvSchema::load); }),
            ErrorCode::missing_header);
  EXPECT_EQ(code_of([] { ingest_text("timestamp,area,load_mw\n", CsvSchema::load); }), ErrorCode::empty_series);
  EXPECT_EQ(code_of([] { ingest_csv(std::filesystem::path("/nonexistent/load.csv"), CsvSchema::load); }),
            ErrorCode::io_error);
}

TEST(Ingest, WeatherColumnsBecomeSeries) {
  auto r = ingest_text(
      "timestamp,area,temp_c,dewpoint_c,humidity_pct,wind_ms,wind_dir_deg,cloud_oktas,ghi_wm2,pressure_hpa\n"
      "2024-03-01T00:00:00Z,PGE,10,5,60,3,180,2,0,1013\n"
      "2024-03-01T01:00:00Z,PGE,11,5,61,3,190,2,0,1012\n",
      CsvSchema::weather);
  EXPECT_EQ(r.series.size(), 8u);
  EXPECT_EQ(r.get("PGE/temp_c").kind(), ChannelKind::temperature);
  EXPECT_EQ(r.get("PGE/ghi_wm2").kind(), ChannelKind::ghi);
  EXPECT_DOUBLE_EQ(r.get("PGE/pressure_hpa").values()[1], 1012.0);
}

TEST(Ingest, OasisFiveMinuteRowsAverageToTheHour) {
  std::string text =
      "INTERVALSTARTTIME_GMT,INTERVALENDTIME_GMT,OPR_DT,OPR_HR,NODE_ID_XML,NODE_ID,NODE,MARKET_RUN_ID,LMP_TYPE,XML_DATA_"
      "ITEM,PNODE_RESMRID,GRP_TYPE,POS,MW,OPR_INTERVAL,GROUP\n";
  // Hour 08: twelve equal values. Hour 09: 1..12, mean 6.5. Congestion rows are ignored.
  for (int m = 0; m < 12; ++m) {
    char ts[64];
    std::snprintf(ts, sizeof ts, "2025-01-01T08:%02d:00-00:00", 5 * m);
    text += std::string(ts) + ",x,2025-01-01,1,N,TH_NP15_GEN-APND,TH_NP15_GEN-APND,RTM,LMP,LMP_PRC,N,ALL,1,42.5,1,1\n";
    text += std::string(ts) + ",x,2025-01-01,1,N,TH_NP15_GEN-APND,TH_NP15_GEN-APND,RTM,MCC,X,N,ALL,1,999,1,1\n";
    std::snprintf(ts, sizeof ts, "2025-01-01T09:%02d:00-00:00", 5 * m);
    text += std::string(ts) + ",x,2025-01-01,2,N,TH_NP15_GEN-APND,TH_NP15_GEN-APND,RTM,LMP,LMP_PRC,N,ALL,1," +
            std::to_string(m + 1) + ",1,1\n";
  }
  auto r = ingest_text(text, CsvSchema::lmp_oasis);
  const auto& s = r.get("TH_NP15_GEN-APND/RTM");
  EXPECT_EQ(s.kind(), ChannelKind::lmp_rt);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.values()[0], 42.5);
  EXPECT_DOUBLE_EQ(s.values()[1], 6.5);
}

TEST(Ingest, OasisDayAheadKind) {
  auto r = ingest_text(
      "INTERVALSTARTTIME_GMT,INTERVALENDTIME_GMT,NODE,MARKET_RUN_ID,LMP_TYPE,MW\n"
      "2025-01-01T08:00:00-00:00,2025-01-01T09:00:00-00:00,N1,DAM,LMP,30\n"
      "2025-01-01T09:00:00-00:00,2025-01-01T10:00:00-00:00,N1,DAM,LMP,31\n",
      CsvSchema::lmp_oasis);
  EXPECT_EQ(r.get("N1/DAM").kind(), ChannelKind::lmp_da);
}

TEST(Series, RejectsOffGridAndUnsorted) {
  EXPECT_EQ(code_of([] { HourlySeries("x", ChannelKind::load, {at_hour(1), at_hour(0)}, {1, 2}); }),
            ErrorCode::invalid_series);
  EXPECT_EQ(code_of([] { HourlySeries("x", ChannelKind::load, {at_hour(0) + Seconds{60}}, {1}); }),
            ErrorCode::invalid_series);
  EXPECT_EQ(code_of([] {
              HourlySeries("x", ChannelKind::load, {at_hour(0)}, {std::numeric_limits<double>::infinity()});
            }),
            ErrorCode::invalid_series);
}

TEST(Align, IdenticalGrids) {
  auto a = testutil::make_series("a", ChannelKind::load, 10, [](std::size_t i) { return 1.0 + i; });
  auto b = testutil::make_series("b", ChannelKind::temperature, 10, [](std::size_t i) { return 2.0 * i; });
  std::vector<HourlySeries> s{a, b};
  auto f = align(s);
  EXPECT_EQ(f.length(), 10u);
  for (const auto& id : {"a", "b"}) {
    const auto& c = f.column(id);
    EXPECT_TRUE(std::all_of(c.mask.begin(), c.mask.end(), [](bool m) { return m; }));
  }
}

TEST(Align, IntersectionGrid) {
  std::vector<Instant> ta, tb;
  std::vector<double> va, vb;
  for (int h = 0; h <= 9; ++h) ta.push_back(at_hour(h)), va.push_back(h);
  for (int h = 5; h <= 14; ++h) tb.push_back(at_hour(h)), vb.push_back(h);
  std::vector<HourlySeries> s{HourlySeries("a", ChannelKind::load, ta, va),
                              HourlySeries("b", ChannelKind::load, tb, vb)};
  auto f = align(s);
  EXPECT_EQ(f.start(), at_hour(5));
  EXPECT_EQ(f.length(), 5u);
  EXPECT_EQ(*f.value("a", at_hour(9)), 9.0);

  GapPolicy u;
  u.grid = GridMode::union_all;
  auto g = align(s, u);
  EXPECT_EQ(g.length(), 15u);
  EXPECT_FALSE(g.present("a", at_hour(12)));
  EXPECT_FALSE(g.present("b", at_hour(2)));

  std::vector<HourlySeries> apart{HourlySeries("a", ChannelKind::load, {at_hour(0)}, {1}),
                                  HourlySeries("b", ChannelKind::load, {at_hour(3)}, {1})};
  EXPECT_EQ(code_of([&] { align(apart); }), ErrorCode::no_overlap);
}

TEST(Align, ForwardFillRespectsLimit) {
  // Hours 0..20 with a 2-hour gap (3, 4) and a 5-hour gap (10..14).
  std::vector<Instant> ts;
  std::vector<double> v;
  for (int h = 0; h <= 20; ++h) {
    if ((h >= 3 && h <= 4) || (h >= 10 && h <= 14)) continue;
    ts.push_back(at_hour(h));
    v.push_back(100.0 + h);
  }
  std::vector<HourlySeries> s{HourlySeries("a", ChannelKind::load, ts, v)};

  auto dropped = align(s);
  EXPECT_FALSE(dropped.present("a", at_hour(3)));

  GapPolicy ff;
  ff.fill = FillMode::forward_fill;
  ff.fill_limit = 3;
  auto f = align(s, ff);
  EXPECT_EQ(*f.value("a", at_hour(3)), 102.0);
  EXPECT_EQ(*f.value("a", at_hour(4)), 102.0);
  for (int h = 10; h <= 14; ++h) EXPECT_FALSE(f.present("a", at_hour(h))) << h;
  EXPECT_EQ(*f.value("a", at_hour(15)), 115.0);
}

TEST(Frame, SliceAndComplete) {
  auto f = testutil::make_frame({{"a", {ChannelKind::load, {1, 2, 3, 4, 5}}}});
  auto s = f.slice({at_hour(1), at_hour(4)});
  EXPECT_EQ(s.length(), 3u);
  EXPECT_EQ(*s.value("a", at_hour(1)), 2.0);
  EXPECT_FALSE(s.value("a", at_hour(4)));
  std::vector<std::string> ids{"a"};
  EXPECT_TRUE(f.complete(ids, {at_hour(0), at_hour(5)}));
  EXPECT_FALSE(f.complete(ids, {at_hour(0), at_hour(6)}));
}

TEST(Normalizer, HandArithmetic) {
  auto f = testutil::make_frame({{"x", {ChannelKind::load, {1, 3, 100}}}});
  auto n = fit_normalizer(f, {at_hour(0), at_hour(2)});
  EXPECT_DOUBLE_EQ(n.stats("x").mean, 2.0);
  EXPECT_DOUBLE_EQ(n.stats("x").std, 1.0);
  EXPECT_DOUBLE_EQ(n.apply("x", 3.0), 1.0);
}

TEST(Normalizer, RoundTrip) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d(20000.0, 3000.0);
  std::vector<double> v(500);
  for (auto& x : v) x = d(rng);
  auto f = testutil::make_frame({{"x", {ChannelKind::load, v}}});
  auto n = fit_normalizer(f, f.range());
  std::vector<double> probe{-1e6, -3.5, 0.0, 1e-9, 12345.678, 9.9e7};
  auto back = n.invert("x", n.apply("x", probe));
  for (std::size_t i = 0; i < probe.size(); ++i) {
    EXPECT_LE(std::abs(back[i] - probe[i]), 1e-10 * std::max(1.0, std::abs(probe[i])));
  }
}

TEST(Normalizer, IgnoresRowsOutsideTrainRange) {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.3 * i) * 50 + i;
  auto f = testutil::make_frame({{"x", {ChannelKind::load, v}}});
  const TimeRange train{at_hour(0), at_hour(60)};
  const auto n1 = fit_normalizer(f, train);
  auto g = f.transformed("x", [&](Instant t, double x) { return train.contains(t) ? x : x * 1e6 + 7; });
  const auto n2 = fit_normalizer(g, train);
  EXPECT_TRUE(n1 == n2);
  EXPECT_EQ(n1.stats("x").count, 60u);
}

TEST(Normalizer, ConstantChannelRejected) {
  auto f = testutil::make_frame({{"x", {ChannelKind::load, {5, 5, 5, 9}}}});
  EXPECT_EQ(code_of([&] { fit_normalizer(f, {at_hour(0), at_hour(3)}); }), ErrorCode::constant_channel);
}

TEST(Normalizer, FrameApplyKeepsMask) {
  std::map<std::string, AlignedFrame::Column> cols;
  cols["x"] = {ChannelKind::load, {1, 2, 3, 0}, {true, true, true, false}};
  AlignedFrame f(at_hour(0), 4, cols);
  auto n = fit_normalizer(f, f.range());
  auto z = n.apply(f);
  EXPECT_FALSE(z.present("x", at_hour(3)));
  EXPECT_NEAR(*z.value("x", at_hour(1)), 0.0, 1e-15);
}
