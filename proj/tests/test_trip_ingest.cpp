#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "tdl/error.hpp"
#include "tdl/trip_ingest.hpp"

using namespace tdl;

namespace {

TripRecord ok(const ParseOutcome& outcome) {
    REQUIRE(std::holds_alternative<TripRecord>(outcome));
    return std::get<TripRecord>(outcome);
}

ParseErrorKind err(const ParseOutcome& outcome) {
    REQUIRE(std::holds_alternative<ParseError>(outcome));
    return std::get<ParseError>(outcome).kind;
}

}  // namespace

TEST_CASE("parse_trip_record decomposes the timestamp") {
    const auto r = ok(parse_trip_record("PRIMERO,2019-03-04 07:15:00,electronic,Ikorodu Terminal,TBS"));
    CHECK(r.minute_of_day == 435);
    CHECK(r.hour() == 7);
    CHECK(r.ticket == TicketKind::electronic);
    CHECK(r.entry_station == "Ikorodu Terminal");
    CHECK(r.exit_station == "TBS");
    CHECK(r.weekday() == Weekday::mon);

    CHECK(ok(parse_trip_record("PRIMERO,2019-03-04 00:00:00,paper,A,B")).minute_of_day == 0);
    CHECK(ok(parse_trip_record("PRIMERO,2019-03-04 23:59:59,paper,A,B")).minute_of_day == 1439);
}

TEST_CASE("parse_trip_record error variants are distinct") {
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 07:15:00,teleport,A,B")) == ParseErrorKind::unknown_ticket);
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 07:15,paper,A,B")) == ParseErrorKind::malformed_datetime);
    CHECK(err(parse_trip_record("PRIMERO,2019-02-30 07:15:00,paper,A,B")) == ParseErrorKind::malformed_datetime);
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 24:00:00,paper,A,B")) == ParseErrorKind::malformed_datetime);
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04T07:15:00,paper,A,B")) == ParseErrorKind::malformed_datetime);
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 07:15:00,paper,A")) == ParseErrorKind::wrong_field_count);
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 07:15:00,paper,A,B,C")) == ParseErrorKind::wrong_field_count);
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 07:15:00,paper,,B")) == ParseErrorKind::empty_station);
}

TEST_CASE("quoted fields and trimming") {
    const auto r = ok(parse_trip_record("PRIMERO, 2019-03-04 07:15:00 ,paper,\"Oshodi, Terminal 2\",  TBS "));
    CHECK(r.entry_station == "Oshodi, Terminal 2");
    CHECK(r.exit_station == "TBS");
    CHECK(err(parse_trip_record("PRIMERO,2019-03-04 07:15:00,paper,\"A,B")) == ParseErrorKind::wrong_field_count);
}

TEST_CASE("loop trips are accepted and flagged") {
    const auto r = ok(parse_trip_record("PRIMERO,2019-03-04 07:15:00,paper,A,A"));
    CHECK(r.is_loop());
    std::istringstream in("PRIMERO,2019-03-04 07:15:00,paper,A,A\nPRIMERO,2019-03-04 07:16:00,paper,A,B\n");
    const auto loaded = load_trips(in);
    CHECK(loaded.report.accepted == 2);
    CHECK(loaded.report.loop_trips == 1);
}

TEST_CASE("load_trips on an empty stream") {
    std::istringstream in("");
    const auto loaded = load_trips(in);
    CHECK(loaded.dataset.empty());
    CHECK(loaded.report.total_rows == 0);
    CHECK(loaded.report.accepted == 0);
    CHECK(loaded.report.rejected == 0);
}

TEST_CASE("load_trips tallies rejects by reason and skips the header") {
    std::istringstream in(
        "company,datetime,ticket,entry_station,exit_station\n"
        "PRIMERO,2019-03-04 07:15:00,electronic,A,B\n"
        "PRIMERO,2019-03-04 07:20:00,paper,A,C\n"
        "\n"
        "PRIMERO,not-a-date,paper,A,C\n"
        "PRIMERO,2019-03-05 08:00:00,paper,B,A\r\n");
    const auto loaded = load_trips(in);
    CHECK(loaded.dataset.size() == 3);
    CHECK(loaded.report.total_rows == 4);
    CHECK(loaded.report.accepted == 3);
    CHECK(loaded.report.rejected == 1);
    CHECK(loaded.report.rejection_reasons.size() == 1);
    CHECK(loaded.report.rejection_reasons.at("malformed_datetime") == 1);
}

TEST_CASE("weekday multiplicity counts distinct dates") {
    std::istringstream in(
        "PRIMERO,2019-03-04 07:15:00,electronic,A,B\n"
        "PRIMERO,2019-03-04 09:15:00,electronic,A,B\n"
        "PRIMERO,2019-03-11 07:15:00,electronic,A,B\n"
        "PRIMERO,2019-03-09 07:15:00,electronic,A,B\n");
    const auto ds = load_trips(in).dataset;
    CHECK(ds.weekday_multiplicity()[0] == 2);  // Mon
    CHECK(ds.weekday_multiplicity()[5] == 1);  // Sat
    CHECK(ds.dates_covered().size() == 3);
    for (const auto& r : ds.records()) CHECK(ds.dates_covered().count(r.date) == 1);
}

TEST_CASE("unreadable stream is fatal") {
    std::istringstream in("x");
    in.setstate(std::ios::badbit);
    CHECK_THROWS_AS(load_trips(in), InputError);
    CHECK_THROWS_AS(load_trips_file("/nonexistent/trips.csv"), InputError);
}

TEST_CASE("property: format then parse round-trips random records") {
    std::mt19937_64 rng(7);
    const std::vector<std::string> names{"A", "Ikorodu Terminal", "Oshodi, Terminal 2", "Say \"hi\"", "TBS"};
    std::uniform_int_distribution<int> pick(0, static_cast<int>(names.size()) - 1);
    std::uniform_int_distribution<int> minute(0, 1439);
    std::uniform_int_distribution<int> day(0, 400);
    const Date base{std::chrono::year{2019}, std::chrono::January, std::chrono::day{1}};
    for (int i = 0; i < 500; ++i) {
        TripRecord r{names[static_cast<std::size_t>(pick(rng))], add_days(base, day(rng)), minute(rng),
                     rng() % 2 ? TicketKind::paper : TicketKind::electronic, names[static_cast<std::size_t>(pick(rng))],
                     names[static_cast<std::size_t>(pick(rng))]};
        const auto back = parse_trip_record(format_trip_record(r));
        REQUIRE(std::holds_alternative<TripRecord>(back));
        CHECK(std::get<TripRecord>(back) == r);
    }
}

TEST_CASE("property: aggregates are order-insensitive and accepted + rejected = total") {
    std::vector<std::string> rows{
        "PRIMERO,2019-03-04 07:15:00,electronic,A,B", "PRIMERO,2019-03-05 07:15:00,paper,A,B",
        "PRIMERO,2019-03-11 07:15:00,electronic,B,A", "PRIMERO,bad,paper,A,B",
        "PRIMERO,2019-03-06 07:15:00,bus,A,B",        "PRIMERO,2019-03-09 12:00:00,paper,C,C",
        "too,few",
    };
    std::mt19937_64 rng(3);
    std::optional<LoadResult> first;
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(rows.begin(), rows.end(), rng);
        std::string text;
        for (const auto& r : rows) text += r + "\n";
        std::istringstream in(text);
        auto loaded = load_trips(in);
        CHECK(loaded.report.accepted + loaded.report.rejected == loaded.report.total_rows);
        if (!first) {
            first = std::move(loaded);
            continue;
        }
        CHECK(loaded.dataset.dates_covered() == first->dataset.dates_covered());
        CHECK(loaded.dataset.weekday_multiplicity() == first->dataset.weekday_multiplicity());
        CHECK(loaded.report.rejection_reasons == first->report.rejection_reasons);
        CHECK(loaded.report.loop_trips == first->report.loop_trips);
    }
}
