#pragma once

#include <array>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace tdl {

using Date = std::chrono::year_month_day;

// ISO ordering: Monday is 0, Sunday is 6.
enum class Weekday : int { mon = 0, tue, wed, thu, fri, sat, sun };

inline constexpr int kDaysPerWeek = 7;
inline constexpr int kHoursPerDay = 24;
inline constexpr int kMinutesPerDay = 1440;

inline constexpr std::array<Weekday, 7> kAllWeekdays{Weekday::mon, Weekday::tue, Weekday::wed, Weekday::thu,
                                                     Weekday::fri, Weekday::sat, Weekday::sun};

constexpr int index_of(Weekday d) { return static_cast<int>(d); }

Weekday weekday_of(const Date& date);

std::string_view weekday_name(Weekday d);  // "Mon", "Tue", ...

// Accepts "mon", "Monday", "MON", ... Returns nullopt for anything else.
std::optional<Weekday> parse_weekday(std::string_view text);

// Strict "YYYY-MM-DD". Returns nullopt for malformed or impossible dates.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& date);

Date add_days(const Date& date, int days);

}  // namespace tdl
