#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tdl/calendar.hpp"

namespace tdl {

enum class TicketKind { paper, electronic };

std::string_view ticket_name(TicketKind kind);

// One ticketed boarding. Seconds are dropped at parse time.
struct TripRecord {
    std::string operator_name;
    Date date;
    int minute_of_day = 0;  // [0, 1439]
    TicketKind ticket = TicketKind::electronic;
    std::string entry_station;
    std::string exit_station;

    int hour() const { return minute_of_day / 60; }
    Weekday weekday() const { return weekday_of(date); }
    bool is_loop() const { return entry_station == exit_station; }

    bool operator==(const TripRecord&) const = default;
};

enum class ParseErrorKind { wrong_field_count, malformed_datetime, unknown_ticket, empty_station };

std::string_view reason_key(ParseErrorKind kind);

struct ParseError {
    ParseErrorKind kind;
    std::string detail;
};

using ParseOutcome = std::variant<TripRecord, ParseError>;

// Parses `operator,YYYY-MM-DD HH:MM:SS,ticket,entry,exit`.
ParseOutcome parse_trip_record(std::string_view row);

// Inverse of parse_trip_record (seconds written as 00).
std::string format_trip_record(const TripRecord& record);

struct ValidationReport {
    std::int64_t total_rows = 0;
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::map<std::string, std::int64_t> rejection_reasons;
    std::int64_t loop_trips = 0;
};

// Immutable after construction.
class TripDataset {
public:
    TripDataset() = default;
    explicit TripDataset(std::vector<TripRecord> records);

    const std::vector<TripRecord>& records() const { return records_; }
    const std::set<Date>& dates_covered() const { return dates_; }
    // Number of distinct dates observed per weekday, indexed Mon..Sun.
    const std::array<int, 7>& weekday_multiplicity() const { return multiplicity_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

private:
    std::vector<TripRecord> records_;
    std::set<Date> dates_;
    std::array<int, 7> multiplicity_{};
};

struct LoadResult {
    TripDataset dataset;
    ValidationReport report;
};

// Header rows (first field "company") and blank lines are skipped and not
// counted. Bad rows are tallied in the report. Throws InputError if the
// stream itself fails.
LoadResult load_trips(std::istream& in);
LoadResult load_trips_file(const std::string& path);

}  // namespace tdl
