#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "cube_helpers.hpp"
#include "tdl/error.hpp"

using namespace tdl;
using tdl::test::day_from_monday;
using tdl::test::trip_row;

namespace {

DemandCube cube_of(const std::vector<std::string>& rows) { return build_demand_cube(test::dataset_from_rows(rows)); }

// Uniform random cube over `days` consecutive dates and `stations` stations.
DemandCube random_cube(std::mt19937_64& rng, int days, int stations) {
    std::vector<std::string> ids;
    for (int s = 0; s < stations; ++s) ids.push_back(fmt::format("S{}", s));
    std::uniform_int_distribution<std::int64_t> count(0, 30);
    std::vector<DatedCounts> slices;
    for (int d = 0; d < days; ++d) {
        DatedCounts dc{day_from_monday(d), std::vector<std::int64_t>(24 * static_cast<std::size_t>(stations))};
        for (auto& c : dc.counts) c = count(rng);
        slices.push_back(std::move(dc));
    }
    return DemandCube(ids, std::move(slices));
}

}  // namespace

TEST_CASE("build_demand_cube places a single record") {
    const auto cube = cube_of({trip_row(day_from_monday(0), 7, 15, "A")});
    REQUIRE(cube.station_count() == 1);
    CHECK(cube.count(Weekday::mon, 7, 0) == 1);
    CHECK(cube.total() == 1);
    CHECK(cube.multiplicity(Weekday::mon) == 1);
}

TEST_CASE("build_demand_cube sums repeated weekdays without averaging") {
    std::vector<std::string> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(trip_row(day_from_monday(0), 7, i, "A"));
    for (int i = 0; i < 5; ++i) rows.push_back(trip_row(day_from_monday(7), 7, i, "A"));
    const auto cube = cube_of(rows);
    CHECK(cube.count(Weekday::mon, 7, 0) == 8);
    CHECK(cube.multiplicity(Weekday::mon) == 2);
    CHECK(cube.slices().size() == 2);
}

TEST_CASE("empty dataset gives an all-zero cube") {
    const auto cube = build_demand_cube(TripDataset{});
    CHECK(cube.station_count() == 0);
    CHECK(cube.total() == 0);
    CHECK_THROWS_AS(day_share_profile(cube), ComputationError);
    CHECK_THROWS_AS(hourly_load_curve(cube), ComputationError);
    CHECK_THROWS_AS(station_ranking(cube, RankWindow::full_day), ComputationError);
}

TEST_CASE("property: cube conserves the record count") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> day(0, 13), hour(0, 23), minute(0, 59), station(0, 6);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> rows;
        const int n = 1 + trial * 17;
        for (int i = 0; i < n; ++i)
            rows.push_back(trip_row(day_from_monday(day(rng)), hour(rng), minute(rng), fmt::format("S{}", station(rng))));
        const auto ds = test::dataset_from_rows(rows);
        const auto cube = build_demand_cube(ds);
        CHECK(cube.total() == static_cast<std::int64_t>(ds.size()));
    }
}

TEST_CASE("day_share_profile uses per-date averages") {
    SUBCASE("equal per-date totals on all seven days") {
        std::vector<std::string> rows;
        for (int d = 0; d < 7; ++d)
            for (int i = 0; i < 4; ++i) rows.push_back(trip_row(day_from_monday(d), 8, i, "A"));
        const auto shares = day_share_profile(cube_of(rows));
        REQUIRE(shares.size() == 7);
        double sum = 0.0;
        for (const auto& s : shares) {
            CHECK(s.percent == doctest::Approx(100.0 / 7.0).epsilon(1e-12));
            sum += s.percent;
        }
        CHECK(std::fabs(sum - 100.0) < 1e-9);
    }
    SUBCASE("Mon 200/day over two dates, Tue 100/day") {
        std::vector<std::string> rows;
        for (int i = 0; i < 200; ++i) rows.push_back(trip_row(day_from_monday(0), 9, i % 60, "A"));
        for (int i = 0; i < 200; ++i) rows.push_back(trip_row(day_from_monday(7), 9, i % 60, "A"));
        for (int i = 0; i < 100; ++i) rows.push_back(trip_row(day_from_monday(1), 9, i % 60, "A"));
        const auto shares = day_share_profile(cube_of(rows));
        REQUIRE(shares.size() == 2);
        CHECK(shares[0].day == Weekday::mon);
        CHECK(shares[0].percent == doctest::Approx(200.0 / 3.0));
        CHECK(shares[1].percent == doctest::Approx(100.0 / 3.0));
    }
}

TEST_CASE("hourly_load_curve percentages") {
    SUBCASE("all trips at hour 7") {
        const auto curve = hourly_load_curve(cube_of({trip_row(day_from_monday(0), 7, 1, "A"),
                                                      trip_row(day_from_monday(2), 7, 2, "B")}));
        CHECK(curve.values[7] == doctest::Approx(100.0));
        CHECK(std::accumulate(curve.values.begin(), curve.values.end(), 0.0) == doctest::Approx(100.0));
        CHECK(local_maxima(curve) == std::vector<int>{7});
    }
    SUBCASE("60/40 split between hours 7 and 17") {
        std::vector<std::string> rows;
        for (int i = 0; i < 60; ++i) rows.push_back(trip_row(day_from_monday(1), 7, i, "A"));
        for (int i = 0; i < 40; ++i) rows.push_back(trip_row(day_from_monday(1), 17, i, "A"));
        const auto curve = hourly_load_curve(cube_of(rows), Weekday::tue);
        CHECK(curve.values[7] == doctest::Approx(60.0));
        CHECK(curve.values[17] == doctest::Approx(40.0));
        CHECK(curve.scope == CurveScope::day_of_week);
        CHECK_THROWS_AS(hourly_load_curve(cube_of(rows), Weekday::wed), ComputationError);
    }
    SUBCASE("city scope weights days by per-date averages") {
        // Monday seen twice with 10 trips at hour 6 each date; Tuesday once with 10 at hour 8.
        std::vector<std::string> rows;
        for (int i = 0; i < 10; ++i) {
            rows.push_back(trip_row(day_from_monday(0), 6, i, "A"));
            rows.push_back(trip_row(day_from_monday(7), 6, i, "A"));
            rows.push_back(trip_row(day_from_monday(1), 8, i, "A"));
        }
        const auto curve = hourly_load_curve(cube_of(rows));
        CHECK(curve.values[6] == doctest::Approx(50.0));
        CHECK(curve.values[8] == doctest::Approx(50.0));
    }
}

TEST_CASE("property: load curves and shares sum to 100") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const auto cube = random_cube(rng, 1 + trial % 14, 1 + trial % 5);
        const auto curve = hourly_load_curve(cube);
        CHECK(std::fabs(std::accumulate(curve.values.begin(), curve.values.end(), 0.0) - 100.0) < 1e-9);
        const auto shares = day_share_profile(cube);
        double sum = 0.0;
        for (const auto& s : shares) sum += s.percent;
        CHECK(std::fabs(sum - 100.0) < 1e-9);
        for (auto window : {RankWindow::full_day, RankWindow::morning, RankWindow::evening}) {
            const auto ranking = station_ranking(cube, window);
            double total = 0.0;
            for (std::size_t i = 0; i < ranking.size(); ++i) {
                total += ranking[i].percent;
                if (i > 0) CHECK(ranking[i - 1].percent >= ranking[i].percent);
            }
            CHECK(std::fabs(total - 100.0) < 1e-9);
        }
    }
}

TEST_CASE("station_ranking") {
    CHECK(station_ranking(cube_of({trip_row(day_from_monday(0), 9, 0, "A")}), RankWindow::full_day).front().percent ==
          doctest::Approx(100.0));

    const auto cube = cube_of({trip_row(day_from_monday(0), 9, 0, "A"), trip_row(day_from_monday(0), 9, 1, "A"),
                               trip_row(day_from_monday(0), 13, 0, "A"), trip_row(day_from_monday(0), 13, 2, "B")});
    const auto full = station_ranking(cube, RankWindow::full_day);
    REQUIRE(full.size() == 2);
    CHECK(full[0].station == "A");
    CHECK(full[0].percent == doctest::Approx(75.0));
    CHECK(full[1].percent == doctest::Approx(25.0));

    // evening: A=1, B=1 -> tie broken by id
    const auto evening = station_ranking(cube, RankWindow::evening);
    CHECK(evening[0].station == "A");
    CHECK(evening[0].percent == doctest::Approx(50.0));
    CHECK(evening[1].station == "B");

    // morning window is hours 0-11; hour 12 belongs to the evening
    CHECK(hour_in_window(11, RankWindow::morning));
    CHECK_FALSE(hour_in_window(12, RankWindow::morning));
    CHECK(hour_in_window(12, RankWindow::evening));

    const auto evening_only = cube_of({trip_row(day_from_monday(0), 18, 0, "A")});
    CHECK_THROWS_AS(station_ranking(evening_only, RankWindow::morning), ComputationError);
}

TEST_CASE("station_features") {
    SUBCASE("equal morning and evening counts give log ratio 0") {
        std::vector<std::string> rows;
        for (int i = 0; i < 6; ++i) {
            rows.push_back(trip_row(day_from_monday(0), 8, i, "A"));
            rows.push_back(trip_row(day_from_monday(0), 18, i, "A"));
        }
        const auto f = station_features(cube_of(rows));
        REQUIRE(f.features.size() == 1);
        CHECK(f.features[0].log_morning_evening_ratio == doctest::Approx(0.0));
        CHECK(f.features[0].log_pct_avg_weekday_demand == doctest::Approx(std::log(100.0)));
    }
    SUBCASE("station carrying 90% each weekday") {
        std::vector<std::string> rows;
        for (int d = 0; d < 5; ++d) {
            for (int i = 0; i < 45; ++i) {
                rows.push_back(trip_row(day_from_monday(d), 8, i, "A"));
                rows.push_back(trip_row(day_from_monday(d), 18, i, "A"));
            }
            for (int i = 0; i < 5; ++i) {
                rows.push_back(trip_row(day_from_monday(d), 8, i, "B"));
                rows.push_back(trip_row(day_from_monday(d), 18, i, "B"));
            }
        }
        const auto f = station_features(cube_of(rows));
        REQUIRE(f.features.size() == 2);
        CHECK(f.features[0].station == "A");
        CHECK(f.features[0].log_pct_avg_weekday_demand == doctest::Approx(std::log(90.0)).epsilon(1e-12));
        CHECK(f.features[0].log_pct_avg_weekday_demand == doctest::Approx(4.4998).epsilon(1e-4));
    }
    SUBCASE("morning 40, evening 10") {
        std::vector<std::string> rows;
        for (int i = 0; i < 40; ++i) rows.push_back(trip_row(day_from_monday(2), 7, i, "A"));
        for (int i = 0; i < 10; ++i) rows.push_back(trip_row(day_from_monday(2), 17, i, "A"));
        const auto f = station_features(cube_of(rows));
        REQUIRE(f.features.size() == 1);
        CHECK(f.features[0].log_morning_evening_ratio == doctest::Approx(std::log(4.0)));
        CHECK(f.features[0].log_morning_evening_ratio == doctest::Approx(1.3863).epsilon(1e-4));
    }
    SUBCASE("thin stations are excluded and reported; weekend-only data is an error") {
        std::vector<std::string> rows;
        for (int i = 0; i < 10; ++i) {
            rows.push_back(trip_row(day_from_monday(0), 7, i, "A"));
            rows.push_back(trip_row(day_from_monday(0), 17, i, "A"));
        }
        for (int i = 0; i < 4; ++i) rows.push_back(trip_row(day_from_monday(0), 7, i, "B"));
        rows.push_back(trip_row(day_from_monday(5), 7, 0, "C"));  // Saturday only
        const auto f = station_features(cube_of(rows));
        REQUIRE(f.features.size() == 1);
        CHECK(f.features[0].station == "A");
        REQUIRE(f.excluded.size() == 2);
        CHECK(f.excluded[0].station == "B");
        CHECK(f.excluded[1].station == "C");
        for (const auto& feat : f.features) {
            CHECK(std::isfinite(feat.log_pct_avg_weekday_demand));
            CHECK(std::isfinite(feat.log_morning_evening_ratio));
        }
        CHECK_THROWS_AS(station_features(cube_of({trip_row(day_from_monday(5), 7, 0, "A")})), ComputationError);
    }
}

TEST_CASE("property: uniform cube is symmetric in features") {
    std::vector<std::string> ids{"A", "B", "C"};
    std::vector<DatedCounts> slices;
    for (int d = 0; d < 5; ++d) slices.push_back({day_from_monday(d), std::vector<std::int64_t>(24 * 3, 7)});
    const auto f = station_features(DemandCube(ids, slices));
    REQUIRE(f.features.size() == 3);
    for (const auto& x : f.features) {
        CHECK(x.log_morning_evening_ratio == doctest::Approx(0.0));
        CHECK(x.log_pct_avg_weekday_demand == doctest::Approx(std::log(100.0 / 3.0)));
    }
}

TEST_CASE("route_demand counts exact pairs") {
    CHECK(route_demand(TripDataset{}).empty());
    const auto ds = test::dataset_from_rows({trip_row(day_from_monday(0), 7, 0, "A", "B"),
                                             trip_row(day_from_monday(0), 7, 1, "A", "B"),
                                             trip_row(day_from_monday(0), 7, 2, "B", "A")});
    const auto routes = route_demand(ds);
    REQUIRE(routes.size() == 2);
    CHECK(routes.at({"A", "B"}) == 2);
    CHECK(routes.at({"B", "A"}) == 1);
}

TEST_CASE("DemandCube rejects malformed slices") {
    CHECK_THROWS_AS(DemandCube({"A", "A"}, {}), ComputationError);
    CHECK_THROWS_AS(DemandCube({"A"}, {{day_from_monday(0), std::vector<std::int64_t>(5, 0)}}), ComputationError);
    CHECK_THROWS_AS(DemandCube({"A"}, {{day_from_monday(0), std::vector<std::int64_t>(24, -1)}}), ComputationError);
}
