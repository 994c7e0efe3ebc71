#include "tdl/trip_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "tdl/csv.hpp"
#include "tdl/error.hpp"

namespace tdl {

namespace {

bool parse_two_digits(std::string_view text, int max_value, int& out) {
    if (text.size() != 2 || !std::isdigit(static_cast<unsigned char>(text[0])) ||
        !std::isdigit(static_cast<unsigned char>(text[1])))
        return false;
    out = (text[0] - '0') * 10 + (text[1] - '0');
    return out <= max_value;
}

bool is_header(const std::vector<std::string>& fields) {
    if (fields.empty()) return false;
    std::string first = fields.front();
    std::transform(first.begin(), first.end(), first.begin(), [](unsigned char c) { return std::tolower(c); });
    return first == "company";
}

}  // namespace

std::string_view ticket_name(TicketKind kind) { return kind == TicketKind::paper ? "paper" : "electronic"; }

std::string_view reason_key(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::wrong_field_count: return "wrong_field_count";
        case ParseErrorKind::malformed_datetime: return "malformed_datetime";
        case ParseErrorKind::unknown_ticket: return "unknown_ticket";
        case ParseErrorKind::empty_station: return "empty_station";
    }
    return "unknown";
}

ParseOutcome parse_trip_record(std::string_view row) {
    auto split = csv::split_row(row);
    if (!split) return ParseError{ParseErrorKind::wrong_field_count, "unterminated quoted field"};
    auto& fields = *split;
    if (fields.size() != 5)
        return ParseError{ParseErrorKind::wrong_field_count, fmt::format("expected 5 fields, got {}", fields.size())};

    const std::string_view stamp = fields[1];
    // YYYY-MM-DD HH:MM:SS
    if (stamp.size() != 19 || stamp[10] != ' ' || stamp[13] != ':' || stamp[16] != ':')
        return ParseError{ParseErrorKind::malformed_datetime, std::string(stamp)};
    const auto date = parse_date(stamp.substr(0, 10));
    int hh = 0, mm = 0, ss = 0;
    if (!date || !parse_two_digits(stamp.substr(11, 2), 23, hh) || !parse_two_digits(stamp.substr(14, 2), 59, mm) ||
        !parse_two_digits(stamp.substr(17, 2), 59, ss))
        return ParseError{ParseErrorKind::malformed_datetime, std::string(stamp)};

    TicketKind ticket;
    if (fields[2] == "paper") ticket = TicketKind::paper;
    else if (fields[2] == "electronic") ticket = TicketKind::electronic;
    else return ParseError{ParseErrorKind::unknown_ticket, fields[2]};

    if (fields[3].empty() || fields[4].empty())
        return ParseError{ParseErrorKind::empty_station, "entry and exit station must be non-empty"};

    return TripRecord{std::move(fields[0]), *date, hh * 60 + mm, ticket, std::move(fields[3]), std::move(fields[4])};
}

std::string format_trip_record(const TripRecord& r) {
    return fmt::format("{},{} {:02d}:{:02d}:00,{},{},{}", csv::quote_field(r.operator_name), format_date(r.date),
                       r.minute_of_day / 60, r.minute_of_day % 60, ticket_name(r.ticket),
                       csv::quote_field(r.entry_station), csv::quote_field(r.exit_station));
}

TripDataset::TripDataset(std::vector<TripRecord> records) : records_(std::move(records)) {
    for (const auto& r : records_) dates_.insert(r.date);
    for (const auto& d : dates_) ++multiplicity_[static_cast<std::size_t>(index_of(weekday_of(d)))];
}

LoadResult load_trips(std::istream& in) {
    if (!in) throw InputError("trip stream is not readable");
    std::vector<TripRecord> records;
    ValidationReport report;
    std::string line;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty()) continue;
        if (first_content_row) {
            first_content_row = false;
            if (const auto fields = csv::split_row(line); fields && is_header(*fields)) continue;
        }
        ++report.total_rows;
        auto outcome = parse_trip_record(line);
        if (auto* rec = std::get_if<TripRecord>(&outcome)) {
            ++report.accepted;
            if (rec->is_loop()) ++report.loop_trips;
            records.push_back(std::move(*rec));
        } else {
            ++report.rejected;
            ++report.rejection_reasons[std::string(reason_key(std::get<ParseError>(outcome).kind))];
        }
    }
    if (in.bad()) throw InputError("I/O error while reading trip stream");
    return {TripDataset(std::move(records)), std::move(report)};
}

LoadResult load_trips_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open trips file '{}'", path));
    return load_trips(in);
}

}  // namespace tdl
