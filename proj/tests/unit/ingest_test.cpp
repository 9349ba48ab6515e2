#include "crossflow/common/error.hpp"
#include "crossflow/ingest/align.hpp"
#include "crossflow/ingest/panel.hpp"
#include "crossflow/ingest/parse.hpp"
#include "crossflow/ingest/registry.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace crossflow;
using namespace crossflow::ingest;

namespace {

IndicatorSource daily_source(const std::string& id, const std::string& column = "value") {
    IndicatorSource s;
    s.id = id;
    s.value_column = column;
    return s;
}

Date d(const char* iso) { return *parse_date(iso); }

IndicatorSeries full_series(const std::string& id, const char* start, std::vector<double> values) {
    IndicatorSeries s{id, "", d(start), std::move(values), {}};
    s.mask.assign(s.values.size(), FillFlag::Observed);
    return s;
}

}  // namespace

TEST_CASE("parse: well-formed daily rows") {
    auto r = parse_indicator_text("date,events\n2021-07-26,3\n2021-07-27,5\n2021-07-28,1\n",
                                  daily_source("acled", "events"));
    REQUIRE(r.records.size() == 3);
    CHECK(r.report.rows_read == 3);
    CHECK(r.report.rejected.empty());
    CHECK(r.records[1].date == d("2021-07-27"));
    CHECK(*r.records[1].value == 5);
}

TEST_CASE("parse: duplicate dates keep the last row") {
    auto r = parse_indicator_text("date,value\n2021-07-26,3\n2021-07-26,4\n", daily_source("x"));
    REQUIRE(r.records.size() == 1);
    CHECK(*r.records[0].value == 4);
    REQUIRE(r.report.rejected.size() == 1);
    CHECK(r.report.rejected[0].reason == "duplicate");
    CHECK(r.report.rejected[0].line == 2);
}

TEST_CASE("parse: malformed rows are rejected with reasons, never dropped") {
    auto r = parse_indicator_text(
        "value,date\n"
        "abc,2021-07-26\n"
        "2.5,2021-07-27\n"
        "1,2021-02-30\n"
        "1,2021-07-29,extra\n"
        "NA,2021-07-30\n"
        "\"1,5\",2021-07-31\n",
        daily_source("x"));
    CHECK(r.report.rows_read == 6);
    CHECK(r.report.rows_accepted + r.report.rejected.size() == r.report.rows_read);
    REQUIRE(r.report.rejected.size() == 4);
    CHECK(r.report.rejected[0].reason == "unparseable value");
    CHECK(r.report.rejected[1].reason == "unparseable date");
    CHECK(r.report.rejected[2].reason == "wrong column count");
    CHECK(r.report.rejected[3].reason == "unparseable value");
    REQUIRE(r.records.size() == 2);
    CHECK_FALSE(r.records[1].value.has_value());
}

TEST_CASE("parse: sorted output for shuffled input") {
    auto r = parse_indicator_text("date,value\n2021-08-03,3\n2021-08-01,1\n2021-08-02,2\n", daily_source("x"));
    REQUIRE(r.records.size() == 3);
    CHECK(std::is_sorted(r.records.begin(), r.records.end(),
                         [](const RawRecord& a, const RawRecord& b) { return a.date < b.date; }));
}

TEST_CASE("parse: errors") {
    CHECK_THROWS_AS(parse_indicator_file("/nonexistent/file.csv", daily_source("x")), NotFoundError);
    CHECK_THROWS_AS(parse_indicator_text("date,other\n2021-01-01,1\n", daily_source("x")), ValidationError);
    CHECK_THROWS_AS(parse_indicator_text("date,value\n2021-01-01,zz\n", daily_source("x")), ValidationError);
    CHECK_THROWS_AS(parse_indicator_text("", daily_source("x")), ValidationError);
}

TEST_CASE("parse: semicolon delimiter") {
    auto src = daily_source("fx", "rate");
    src.delimiter = ';';
    auto r = parse_indicator_text("date;rate\n2021-01-01;4.5\n", src);
    CHECK(*r.records[0].value == 4.5);
}

TEST_CASE("align: weekly value forward-fills its week") {
    IndicatorSource src = daily_source("trend");
    src.frequency = Frequency::Weekly;
    // 2021-08-02 is a Monday.
    std::vector<RawRecord> recs{{d("2021-08-02"), 7.0, "trend"}};
    IngestReport rep;
    auto s = align_daily(recs, src, {d("2021-08-02"), d("2021-08-08")}, 7, &rep);
    REQUIRE(s.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(s.values[i] == 7.0);
    CHECK(s.mask[0] == FillFlag::Observed);
    for (std::size_t i = 1; i < 7; ++i) CHECK(s.mask[i] == FillFlag::Filled);
    CHECK(rep.fill_count == 6);
    CHECK(rep.gap_count == 1);
    CHECK(rep.longest_gap == 6);
}

TEST_CASE("align: a gap longer than max_gap is left missing") {
    std::vector<RawRecord> recs{{d("2021-08-01"), 1.0, "x"}, {d("2021-08-10"), 2.0, "x"}};
    auto s = align_daily(recs, daily_source("x"), {d("2021-08-01"), d("2021-08-10")}, 7);
    for (std::size_t i = 1; i <= 7; ++i) CHECK(s.mask[i] == FillFlag::Filled);
    CHECK(s.mask[8] == FillFlag::Missing);
    CHECK(std::isnan(s.values[8]));
    CHECK(s.mask[9] == FillFlag::Observed);
    CHECK_FALSE(s.at(d("2021-08-09")).has_value());
    CHECK(*s.at(d("2021-08-08")) == 1.0);
}

TEST_CASE("align: complete daily series is the identity") {
    std::vector<RawRecord> recs;
    for (int i = 0; i < 5; ++i) recs.push_back({add_days(d("2021-08-01"), i), i * 1.5, "x"});
    auto s = align_daily(recs, daily_source("x"), {d("2021-08-01"), d("2021-08-05")}, 7);
    for (int i = 0; i < 5; ++i) {
        CHECK(s.values[i] == i * 1.5);
        CHECK(s.mask[i] == FillFlag::Observed);
    }
}

TEST_CASE("align: explicit NA cells count as gaps") {
    std::vector<RawRecord> recs{{d("2021-08-01"), 1.0, "x"}, {d("2021-08-02"), std::nullopt, "x"}};
    auto s = align_daily(recs, daily_source("x"), {d("2021-08-01"), d("2021-08-02")}, 0);
    CHECK(s.mask[1] == FillFlag::Missing);
}

TEST_CASE("property: filled days lie within max_gap after an observation") {
    std::mt19937_64 rng(5);
    std::bernoulli_distribution present(0.3);
    std::uniform_int_distribution<int> gap_dist(0, 10);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RawRecord> recs;
        for (int i = 0; i < 120; ++i) {
            if (present(rng)) recs.push_back({add_days(d("2022-01-01"), i), double(i), "x"});
        }
        if (recs.empty()) continue;
        const int max_gap = gap_dist(rng);
        auto s = align_daily(recs, daily_source("x"), {d("2022-01-01"), d("2022-04-30")}, max_gap);
        long last_obs = -100000;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.mask[i] == FillFlag::Observed) last_obs = static_cast<long>(i);
            if (s.mask[i] == FillFlag::Filled) {
                CHECK(static_cast<long>(i) - last_obs <= max_gap);
                CHECK(s.values[i] == s.values[static_cast<std::size_t>(last_obs)]);
            }
            if (s.mask[i] == FillFlag::Missing) CHECK(static_cast<long>(i) - last_obs > max_gap);
        }
    }
}

TEST_CASE("moving_average") {
    auto s = full_series("x", "2021-01-01", {0, 1, 2, 3, 4, 5, 6, 7});
    auto ma = moving_average(s, 7);
    CHECK(ma.source_id == "x_ma7");
    CHECK(ma.mask[5] == FillFlag::Missing);
    CHECK(ma.values[6] == 3.0);
    CHECK(ma.values[7] == 4.0);
}

TEST_CASE("build_panel: aligned, fully observed inputs") {
    auto pb = build_panel({full_series("b", "2021-01-01", {1, 2, 3}), full_series("a", "2021-01-01", {4, 5, 6})});
    CHECK(pb.panel.ids == std::vector<std::string>{"a", "b"});
    CHECK(pb.panel.days() == 3);
    CHECK(pb.coverage.flagged_rows == 0);
    CHECK(pb.panel.columns[0] == std::vector<double>{4, 5, 6});
}

TEST_CASE("build_panel: intersection and flags") {
    auto a = full_series("a", "2021-01-01", {1, 2, 3, 4, 5});
    auto b = full_series("b", "2021-01-03", {1, 2, 3, 4, 5});
    b.mask[1] = FillFlag::Missing;  // 2021-01-04
    b.values[1] = NAN;
    auto pb = build_panel({a, b});
    CHECK(pb.panel.range.first == d("2021-01-03"));
    CHECK(pb.panel.range.last == d("2021-01-05"));
    CHECK(pb.panel.row_flagged == std::vector<bool>{false, true, false});
    CHECK(pb.coverage.missing_per_indicator == std::vector<std::size_t>{0, 1});
}

TEST_CASE("build_panel: errors") {
    CHECK_THROWS_AS(build_panel({}), ValidationError);
    CHECK_THROWS_AS(build_panel({full_series("a", "2021-01-01", {1}), full_series("b", "2021-02-01", {1})}),
                    ValidationError);
    CHECK_THROWS_AS(build_panel({full_series("a", "2021-01-01", {1}), full_series("a", "2021-01-01", {1})}),
                    ValidationError);
}

TEST_CASE("build_panel: independent of input order") {
    auto a = full_series("a", "2021-01-01", {1, 2, 3});
    auto b = full_series("b", "2021-01-02", {4, 5, 6});
    auto c = full_series("c", "2020-12-31", {7, 8, 9, 10});
    auto p1 = build_panel({a, b, c}).panel;
    auto p2 = build_panel({c, a, b}).panel;
    CHECK(p1.ids == p2.ids);
    CHECK(p1.columns == p2.columns);
    CHECK(p1.range.first == p2.range.first);
}

TEST_CASE("panel csv with mask sidecar round-trips") {
    auto a = full_series("a", "2021-01-01", {1.25, 2, 3});
    a.mask[2] = FillFlag::Filled;
    auto b = full_series("b", "2021-01-01", {0.1, NAN, 3});
    b.mask[1] = FillFlag::Missing;
    auto p = build_panel({a, b}).panel;
    std::stringstream vals, mask;
    write_panel_csv(vals, p);
    write_mask_csv(mask, p);
    CHECK(vals.str() == "date,a,b\n2021-01-01,1.25,0.1\n2021-01-02,2,\n2021-01-03,3,3\n");
    auto q = read_panel_csv(vals, mask);
    CHECK(q.ids == p.ids);
    CHECK(q.masks == p.masks);
    CHECK(q.row_flagged == p.row_flagged);
    CHECK(q.columns[0] == p.columns[0]);
    CHECK(std::isnan(q.columns[1][1]));
}

TEST_CASE("normalize_for_display") {
    SUBCASE("min-max") {
        auto n = normalize_for_display(full_series("x", "2021-01-01", {0, 5, 10}));
        CHECK(n.values == std::vector<double>{0, 0.5, 1});
        CHECK_FALSE(n.degenerate);
    }
    SUBCASE("constant series is degenerate") {
        auto n = normalize_for_display(full_series("x", "2021-01-01", {3, 3, 3}));
        CHECK(n.degenerate);
        CHECK(n.values == std::vector<double>{0.5, 0.5, 0.5});
    }
    SUBCASE("order preserving and idempotent") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g(100, 30);
        std::vector<double> v(50);
        for (auto& x : v) x = g(rng);
        auto n = normalize_for_display(full_series("x", "2021-01-01", v));
        CHECK(std::max_element(n.values.begin(), n.values.end()) - n.values.begin() ==
              std::max_element(v.begin(), v.end()) - v.begin());
        CHECK(std::min_element(n.values.begin(), n.values.end()) - n.values.begin() ==
              std::min_element(v.begin(), v.end()) - v.begin());
        auto again = normalize_for_display(full_series("x", "2021-01-01", n.values));
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(again.values[i] == doctest::Approx(n.values[i]).epsilon(1e-15));
    }
    SUBCASE("missing days stay missing") {
        auto s = full_series("x", "2021-01-01", {0, NAN, 10});
        s.mask[1] = FillFlag::Missing;
        auto n = normalize_for_display(s);
        CHECK(std::isnan(n.values[1]));
        CHECK(n.values[2] == 1.0);
    }
}

TEST_CASE("registry: load and ingest every source") {
    const auto dir = std::filesystem::temp_directory_path() / "crossflow_registry_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "conflict.csv") << "date,events\n2021-08-01,2\n2021-08-02,4\n2021-08-03,4\n2021-08-04,1\n";
    std::ofstream(dir / "oil.csv") << "date,price\n2021-08-02,70\n2021-08-09,72\n";
    std::ofstream(dir / "registry.json") << R"({
      "sources": [
        {"id": "conflict_events", "name": "Conflict events", "file": "conflict.csv", "frequency": "daily",
         "units": "events", "value_column": "events"},
        {"id": "oil_price", "file": "oil.csv", "frequency": "weekly", "units": "USD", "value_column": "price"}
      ]
    })";
    auto reg = load_registry(dir / "registry.json");
    REQUIRE(reg.sources.size() == 2);
    CHECK(reg.sources[1].frequency == Frequency::Weekly);
    CHECK(reg.sources[1].effective_max_gap() == 7);
    auto res = ingest_all(reg);
    const auto& p = res.panel.panel;
    CHECK(p.ids == std::vector<std::string>{"conflict_events", "oil_price"});
    CHECK(p.range.first == d("2021-08-02"));
    CHECK(p.range.last == d("2021-08-04"));
    CHECK(p.columns[1] == std::vector<double>{70, 70, 70});
    CHECK(res.reports.size() == 2);
    std::filesystem::remove_all(dir);
}
