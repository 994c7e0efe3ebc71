#include "tdl/bus_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "tdl/error.hpp"

namespace tdl {

namespace {

double normal_cdf(double x, double mean, double sigma) {
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::numbers::sqrt2));
}

double mixture_cdf(const SimConfig& c, double x) {
    return c.weight1 * normal_cdf(x, c.peak1_minute, c.sigma1) +
           (1.0 - c.weight1) * normal_cdf(x, c.peak2_minute, c.sigma2);
}

// Integer divide rounding toward negative infinity.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

double wait_median(const std::vector<std::int64_t>& histogram, std::int64_t total) {
    if (total == 0) return 0.0;
    auto nth = [&](std::int64_t rank) {  // 0-based rank
        std::int64_t seen = 0;
        for (std::size_t w = 0; w < histogram.size(); ++w) {
            seen += histogram[w];
            if (seen > rank) return static_cast<double>(w);
        }
        return static_cast<double>(histogram.size() - 1);
    };
    if (total % 2 == 1) return nth(total / 2);
    return 0.5 * (nth(total / 2 - 1) + nth(total / 2));
}

}  // namespace

std::string_view arrival_mode_name(ArrivalMode mode) {
    return mode == ArrivalMode::deterministic ? "deterministic" : "stochastic";
}

std::string_view schedule_kind_name(ScheduleKind kind) { return kind == ScheduleKind::fixed ? "fixed" : "dynamic"; }

void validate(const SimConfig& c) {
    if (c.total_passengers < 0) throw UsageError("passengers must be >= 0");
    if (c.capacity < 1) throw UsageError("capacity must be >= 1");
    if (!(c.resource_factor > 0.0) || !std::isfinite(c.resource_factor)) throw UsageError("f must be > 0");
    if (c.day_length < 1) throw UsageError("day length must be >= 1");
    if (c.peak1_minute < 0 || c.peak1_minute >= c.day_length) throw UsageError("peak1 must lie within the day");
    if (c.peak2_minute < 0 || c.peak2_minute >= c.day_length) throw UsageError("peak2 must lie within the day");
    if (!(c.sigma1 > 0.0) || !(c.sigma2 > 0.0)) throw UsageError("sigmas must be > 0");
    if (!(c.weight1 >= 0.0 && c.weight1 <= 1.0)) throw UsageError("weight1 must lie in [0, 1]");
}

std::int64_t ArrivalSchedule::total() const { return std::accumulate(arrivals.begin(), arrivals.end(), std::int64_t{0}); }

ArrivalSchedule bimodal_arrivals(const SimConfig& config) {
    validate(config);
    const auto length = static_cast<std::size_t>(config.day_length);
    ArrivalSchedule out{std::vector<std::int64_t>(length, 0)};
    const std::int64_t n = config.total_passengers;
    if (n == 0) return out;

    if (config.mode == ArrivalMode::stochastic) {
        std::mt19937_64 rng(config.seed);
        std::bernoulli_distribution first(config.weight1);
        std::normal_distribution<double> morning(config.peak1_minute, config.sigma1);
        std::normal_distribution<double> evening(config.peak2_minute, config.sigma2);
        for (std::int64_t i = 0; i < n; ++i) {
            const double t = first(rng) ? morning(rng) : evening(rng);
            const double clamped = std::clamp(std::round(t), 0.0, static_cast<double>(config.day_length - 1));
            ++out.arrivals[static_cast<std::size_t>(clamped)];
        }
        return out;
    }

    std::vector<double> mass(length);
    double prev = mixture_cdf(config, -0.5);
    for (std::size_t m = 0; m < length; ++m) {
        const double next = mixture_cdf(config, static_cast<double>(m) + 0.5);
        mass[m] = next - prev;
        prev = next;
    }
    const double total_mass = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(total_mass > 0.0)) throw ComputationError("arrival mixture has no mass inside the day");

    std::vector<double> remainder(length);
    std::int64_t assigned = 0;
    for (std::size_t m = 0; m < length; ++m) {
        const double expected = static_cast<double>(n) * mass[m] / total_mass;
        const double whole = std::floor(expected);
        out.arrivals[m] = static_cast<std::int64_t>(whole);
        remainder[m] = expected - whole;
        assigned += out.arrivals[m];
    }
    std::vector<std::size_t> order(length);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    // sum of floors never exceeds n, and the shortfall is below the minute count
    for (std::size_t i = 0; assigned < n && i < length; ++i) {
        ++out.arrivals[order[i]];
        ++assigned;
    }
    if (assigned != n) throw ComputationError("largest-remainder apportionment did not conserve the total");
    return out;
}

BusSchedule fixed_schedule(std::int64_t buses, int day_length) {
    if (buses < 1) throw ComputationError("fixed schedule needs at least one bus");
    if (day_length < 1) throw ComputationError("day length must be positive");
    BusSchedule schedule{{}, ScheduleKind::fixed};
    schedule.times.reserve(static_cast<std::size_t>(buses));
    const std::int64_t length = day_length;
    for (std::int64_t k = 1; k <= buses; ++k) {
        // ceil(x - 1/2) with x = (2k - 1) L / 2B, in integers
        const std::int64_t numerator = (2 * k - 1) * length - buses;
        const std::int64_t t = -floor_div(-numerator, 2 * buses);
        schedule.times.push_back(static_cast<int>(std::clamp<std::int64_t>(t, 0, length - 1)));
    }
    return schedule;
}

BusSchedule dynamic_schedule(std::int64_t buses, const ArrivalSchedule& arrivals) {
    if (buses < 1) throw ComputationError("dynamic schedule needs at least one bus");
    const std::int64_t n = arrivals.total();
    if (n <= 0) throw ComputationError("dynamic schedule needs non-zero total demand");
    BusSchedule schedule{{}, ScheduleKind::dynamic};
    schedule.times.reserve(static_cast<std::size_t>(buses));
    std::int64_t cumulative = 0;
    std::size_t minute = 0;
    cumulative = arrivals.arrivals[0];
    for (std::int64_t k = 1; k <= buses; ++k) {
        // cumulative >= (k - 1/2) N / B  <=>  2 B cumulative >= (2k - 1) N
        while (2 * buses * cumulative < (2 * k - 1) * n) {
            ++minute;
            cumulative += arrivals.arrivals[minute];
        }
        schedule.times.push_back(static_cast<int>(minute));
    }
    return schedule;
}

SimResult simulate_day(const ArrivalSchedule& arrivals, const BusSchedule& buses, int capacity) {
    if (capacity < 1) throw ComputationError("bus capacity must be >= 1");
    const int length = arrivals.day_length();
    if (!std::is_sorted(buses.times.begin(), buses.times.end()))
        throw ComputationError("bus times must be sorted");
    if (!buses.times.empty() && (buses.times.front() < 0 || buses.times.back() >= length))
        throw ComputationError("bus times must lie within the day");
    for (auto a : arrivals.arrivals)
        if (a < 0) throw ComputationError("arrival counts must be non-negative");

    SimResult result;
    result.per_bus_load.reserve(buses.times.size());
    result.queue_length.reserve(static_cast<std::size_t>(length));
    std::vector<std::int64_t> wait_hist(static_cast<std::size_t>(length) + 1, 0);

    struct Cohort {
        int minute;
        std::int64_t waiting;
    };
    std::deque<Cohort> queue;
    std::int64_t queued = 0;
    std::size_t next_bus = 0;

    for (int t = 0; t < length; ++t) {
        if (const auto a = arrivals.arrivals[static_cast<std::size_t>(t)]; a > 0) {
            queue.push_back({t, a});
            queued += a;
        }
        while (next_bus < buses.times.size() && buses.times[next_bus] == t) {
            std::int64_t room = capacity;
            while (room > 0 && !queue.empty()) {
                auto& head = queue.front();
                const auto take = std::min(room, head.waiting);
                wait_hist[static_cast<std::size_t>(t - head.minute)] += take;
                head.waiting -= take;
                room -= take;
                if (head.waiting == 0) queue.pop_front();
            }
            const auto load = capacity - room;
            result.per_bus_load.push_back(load);
            result.boarded += load;
            queued -= load;
            ++next_bus;
        }
        result.queue_length.push_back(queued);
    }
    for (const auto& c : queue) {
        wait_hist[static_cast<std::size_t>(length - c.minute)] += c.waiting;
        result.stranded += c.waiting;
    }

    const std::int64_t total = result.boarded + result.stranded;
    double wait_sum = 0.0;
    for (std::size_t w = 0; w < wait_hist.size(); ++w) {
        if (wait_hist[w] == 0) continue;
        wait_sum += static_cast<double>(w) * static_cast<double>(wait_hist[w]);
        result.max_wait_min = static_cast<int>(w);
    }
    result.avg_wait_min = total > 0 ? wait_sum / static_cast<double>(total) : 0.0;
    result.median_wait_min = wait_median(wait_hist, total);
    return result;
}

std::int64_t bus_count(double resource_factor, std::int64_t passengers, int capacity) {
    if (!(resource_factor > 0.0)) throw UsageError("f must be > 0");
    if (capacity < 1) throw UsageError("capacity must be >= 1");
    const double exact = resource_factor * static_cast<double>(passengers) / static_cast<double>(capacity);
    // guard against f*N/C landing a hair above an integer through rounding
    const double nearest = std::round(exact);
    const auto buses = std::fabs(exact - nearest) < 1e-9 * std::max(1.0, nearest) ? static_cast<std::int64_t>(nearest)
                                                                                : static_cast<std::int64_t>(std::ceil(exact));
    return std::max<std::int64_t>(buses, 1);
}

double reduction_pct(double fixed_wait, double dynamic_wait) {
    if (!(fixed_wait > 0.0)) throw ComputationError("reduction: fixed-schedule wait must be positive");
    return (fixed_wait - dynamic_wait) / fixed_wait * 100.0;
}

std::vector<SweepRow> sweep_f(const ArrivalSchedule& arrivals, int capacity, const std::vector<double>& f_values) {
    if (f_values.empty()) throw UsageError("sweep needs at least one f value");
    std::vector<SweepRow> rows;
    rows.reserve(f_values.size());
    const auto n = arrivals.total();
    for (double f : f_values) {
        SweepRow row;
        row.f = f;
        row.buses = bus_count(f, n, capacity);
        row.fixed = simulate_day(arrivals, fixed_schedule(row.buses, arrivals.day_length()), capacity);
        row.dynamic = simulate_day(arrivals, dynamic_schedule(row.buses, arrivals), capacity);
        row.reduction = row.fixed.avg_wait_min > 0.0 ? reduction_pct(row.fixed.avg_wait_min, row.dynamic.avg_wait_min) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep_f(const SimConfig& config, const std::vector<double>& f_values) {
    validate(config);
    for (double f : f_values)
        if (!(f > 0.0) || !std::isfinite(f)) throw UsageError(fmt::format("f values must be positive, got {}", f));
    auto rows = sweep_f(bimodal_arrivals(config), config.capacity, f_values);
    for (auto& row : rows) {
        SimConfig echo = config;
        echo.resource_factor = row.f;
        row.fixed.config_echo = echo;
        row.dynamic.config_echo = echo;
    }
    return rows;
}

SchedulePair simulate_pair(const SimConfig& config, const ArrivalSchedule& arrivals) {
    validate(config);
    SchedulePair pair;
    pair.buses = bus_count(config.resource_factor, arrivals.total(), config.capacity);
    pair.fixed_buses = fixed_schedule(pair.buses, arrivals.day_length());
    pair.dynamic_buses = dynamic_schedule(pair.buses, arrivals);
    pair.fixed = simulate_day(arrivals, pair.fixed_buses, config.capacity);
    pair.dynamic = simulate_day(arrivals, pair.dynamic_buses, config.capacity);
    pair.fixed.config_echo = config;
    pair.dynamic.config_echo = config;
    return pair;
}

}  // namespace tdl
