#include "tdl/calendar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace tdl {

namespace {

constexpr std::array<std::string_view, 7> kShortNames{"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
constexpr std::array<std::string_view, 7> kLongNames{"monday", "tuesday", "wednesday", "thursday",
                                                     "friday", "saturday", "sunday"};

bool parse_fixed_int(std::string_view text, int& out) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Weekday weekday_of(const Date& date) {
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    return static_cast<Weekday>(wd.iso_encoding() - 1);
}

std::string_view weekday_name(Weekday d) { return kShortNames[static_cast<std::size_t>(index_of(d))]; }

std::optional<Weekday> parse_weekday(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (std::size_t i = 0; i < kLongNames.size(); ++i) {
        if (lower == kLongNames[i] || lower == kLongNames[i].substr(0, 3)) return static_cast<Weekday>(i);
    }
    return std::nullopt;
}

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_fixed_int(text.substr(0, 4), y) || !parse_fixed_int(text.substr(5, 2), m) ||
        !parse_fixed_int(text.substr(8, 2), d))
        return std::nullopt;
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& date) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                       static_cast<unsigned>(date.day()));
}

Date add_days(const Date& date, int days) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

}  // namespace tdl
