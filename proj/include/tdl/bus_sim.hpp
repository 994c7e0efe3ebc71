#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tdl/calendar.hpp"

namespace tdl {

enum class ArrivalMode { deterministic, stochastic };

std::string_view arrival_mode_name(ArrivalMode mode);

// Single-corridor, minute-resolution day. Arrivals follow a two-Gaussian
// mixture centred on the morning and evening peaks.
struct SimConfig {
    std::int64_t total_passengers = 100000;
    int capacity = 60;
    double resource_factor = 1.5;
    int peak1_minute = 420;   // 07:00
    int peak2_minute = 1020;  // 17:00
    double sigma1 = 120.0;
    double sigma2 = 150.0;
    double weight1 = 0.5;
    int day_length = kMinutesPerDay;
    ArrivalMode mode = ArrivalMode::deterministic;
    std::uint64_t seed = 42;
};

// Throws UsageError naming the first invalid field.
void validate(const SimConfig& config);

struct ArrivalSchedule {
    std::vector<std::int64_t> arrivals;  // passengers arriving in each minute

    std::int64_t total() const;
    int day_length() const { return static_cast<int>(arrivals.size()); }
};

enum class ScheduleKind { fixed, dynamic };

std::string_view schedule_kind_name(ScheduleKind kind);

struct BusSchedule {
    std::vector<int> times;  // non-decreasing bus minutes; repeats allowed
    ScheduleKind kind = ScheduleKind::fixed;
};

struct SimResult {
    double avg_wait_min = 0.0;
    double median_wait_min = 0.0;
    int max_wait_min = 0;
    std::int64_t boarded = 0;
    std::int64_t stranded = 0;
    std::vector<std::int64_t> per_bus_load;
    std::vector<std::int64_t> queue_length;  // after boarding, per minute
    std::optional<SimConfig> config_echo;
};

// Deterministic mode integrates the truncated mixture over each minute
// [m - 0.5, m + 0.5) and apportions exactly N by largest remainder (ties to
// the earlier minute). Stochastic mode draws N minutes from the mixture.
ArrivalSchedule bimodal_arrivals(const SimConfig& config);

// Bus k (1-based) at round((k - 0.5) * day_length / B), halves rounded down,
// clamped to the day.
BusSchedule fixed_schedule(std::int64_t buses, int day_length = kMinutesPerDay);

// Bus k at the first minute whose cumulative arrivals reach (k - 0.5) * N / B.
BusSchedule dynamic_schedule(std::int64_t buses, const ArrivalSchedule& arrivals);

// FIFO queue. Each minute arrivals join first, then every bus due that minute
// boards up to `capacity` from the head. Passengers left at day end are
// stranded with their wait censored at the day boundary.
SimResult simulate_day(const ArrivalSchedule& arrivals, const BusSchedule& buses, int capacity);

// ceil(f * N / C)
std::int64_t bus_count(double resource_factor, std::int64_t passengers, int capacity);

// (fixed - dynamic) / fixed * 100. Throws ComputationError if fixed <= 0.
double reduction_pct(double fixed_wait, double dynamic_wait);

struct SweepRow {
    double f = 0.0;
    std::int64_t buses = 0;
    SimResult fixed;
    SimResult dynamic;
    double reduction = 0.0;  // percent; 0 when both waits are 0
};

std::vector<SweepRow> sweep_f(const SimConfig& config, const std::vector<double>& f_values);
std::vector<SweepRow> sweep_f(const ArrivalSchedule& arrivals, int capacity, const std::vector<double>& f_values);

struct SchedulePair {
    std::int64_t buses = 0;
    BusSchedule fixed_buses;
    BusSchedule dynamic_buses;
    SimResult fixed;
    SimResult dynamic;
};

// Both schedules for config.resource_factor on one arrival profile.
SchedulePair simulate_pair(const SimConfig& config, const ArrivalSchedule& arrivals);

}  // namespace tdl
