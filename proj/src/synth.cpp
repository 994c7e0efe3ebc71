#include "tdl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "tdl/csv.hpp"
#include "tdl/error.hpp"

namespace tdl {

namespace {

// Group scale and share of boardings in the morning wave. Ordered by demand:
// a busy mixed group, an afternoon group, a busy morning group, a quiet
// morning group.
struct GroupPlan {
    double scale;
    double morning_share;
};
constexpr std::array<GroupPlan, kPlantedGroups> kGroups{{{8.0, 0.5}, {2.5, 0.2}, {2.5, 0.8}, {0.8, 0.8}}};

constexpr int kFirstServiceHour = 4;

enum class DayType { workday, saturday, sunday };

DayType day_type(Weekday d) {
    if (d == Weekday::sat) return DayType::saturday;
    if (d == Weekday::sun) return DayType::sunday;
    return DayType::workday;
}

std::array<double, 24> hour_wave(double centre, double sigma) {
    std::array<double, 24> w{};
    double sum = 0.0;
    for (int h = kFirstServiceHour; h < kHoursPerDay; ++h) {
        const double z = (h - centre) / sigma;
        w[static_cast<std::size_t>(h)] = std::exp(-0.5 * z * z);
        sum += w[static_cast<std::size_t>(h)];
    }
    for (auto& v : w) v /= sum;
    return w;
}

struct Waves {
    std::array<double, 24> morning;
    std::array<double, 24> evening;
};

Waves waves_for(DayType type) {
    switch (type) {
        case DayType::workday: return {hour_wave(7.0, 2.0), hour_wave(17.0, 2.5)};
        case DayType::saturday: return {hour_wave(9.0, 2.0), hour_wave(17.0, 2.5)};
        case DayType::sunday: return {hour_wave(9.0, 2.5), hour_wave(16.0, 4.0)};
    }
    return {};
}

double morning_share_for(DayType type, double base) {
    return type == DayType::sunday ? 0.5 * base + 0.4 : base;
}

void validate(const SynthSpec& spec) {
    if (spec.dates.empty()) throw UsageError("synth: at least one date is required");
    if (spec.stations_per_group < 1) throw UsageError("synth: stations per group must be >= 1");
    if (!(spec.trips_per_day > 0.0)) throw UsageError("synth: trips per day must be > 0");
    if (!(spec.relative_noise >= 0.0)) throw UsageError("synth: noise must be >= 0");
    if (!(spec.electronic_share >= 0.0 && spec.electronic_share <= 1.0))
        throw UsageError("synth: electronic share must lie in [0, 1]");
    for (double f : spec.day_factor)
        if (!(f >= 0.0)) throw UsageError("synth: day factors must be >= 0");
}

}  // namespace

std::vector<Date> SynthSpec::default_dates() {
    const Date start{std::chrono::year{2019}, std::chrono::March, std::chrono::day{4}};
    std::vector<Date> dates;
    for (int offset : {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12}) dates.push_back(add_days(start, offset));
    return dates;
}

std::vector<Date> SynthSpec::consecutive_dates(int days) {
    const Date start{std::chrono::year{2019}, std::chrono::March, std::chrono::day{4}};
    std::vector<Date> dates;
    for (int i = 0; i < days; ++i) dates.push_back(add_days(start, i));
    return dates;
}

SynthOutput synth_trips(const SynthSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n_stations = spec.stations_per_group * kPlantedGroups;
    const auto n = static_cast<std::size_t>(n_stations);
    SynthOutput out;
    std::vector<double> scale(n), morning_share(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int group = static_cast<int>(i % kPlantedGroups);
        const auto& plan = kGroups[static_cast<std::size_t>(group)];
        scale[i] = plan.scale * std::exp(0.08 * gauss(rng));
        morning_share[i] = std::clamp(plan.morning_share + 0.02 * gauss(rng), 0.05, 0.95);
        // stations strung along a ~25 km corridor
        const double along = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        const GeoPoint loc{6.629 - 0.174 * along + 0.002 * gauss(rng), 3.509 - 0.130 * along + 0.002 * gauss(rng)};
        const auto population = static_cast<std::int64_t>(std::llround(150000.0 * std::pow(scale[i], 0.8) * std::exp(0.3 * gauss(rng))));
        out.stations.push_back({fmt::format("S{:02d}", i + 1), fmt::format("Stop {:02d}", i + 1), loc,
                                std::max<std::int64_t>(population, 1)});
        out.planted_group.push_back(group);
    }
    const double scale_total = std::accumulate(scale.begin(), scale.end(), 0.0);

    // exit choice: attraction grows with destination population and distance
    std::vector<std::vector<double>> exit_cdf(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) {
        double running = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b) {
                const double km = haversine_km(out.stations[a].location, out.stations[b].location);
                running += std::pow(static_cast<double>(out.stations[b].lga_population), 0.6) * (0.2 + km / 10.0);
            }
            exit_cdf[a][b] = running;
        }
    }

    for (const Date& date : spec.dates) {
        const Weekday wd = weekday_of(date);
        const DayType type = day_type(wd);
        const Waves waves = waves_for(type);
        const double level = spec.trips_per_day * spec.day_factor[static_cast<std::size_t>(index_of(wd))];
        std::vector<TripRecord> day_trips;
        for (int h = 0; h < kHoursPerDay; ++h) {
            const auto hu = static_cast<std::size_t>(h);
            for (std::size_t s = 0; s < n; ++s) {
                const double ms = morning_share_for(type, morning_share[s]);
                const double expected = level * (scale[s] / scale_total) * (ms * waves.morning[hu] + (1.0 - ms) * waves.evening[hu]);
                const double noisy = expected * std::max(0.0, 1.0 + spec.relative_noise * gauss(rng));
                const auto count = static_cast<std::int64_t>(std::llround(noisy));
                for (std::int64_t c = 0; c < count; ++c) {
                    const double pick = unit(rng) * exit_cdf[s].back();
                    auto exit = static_cast<std::size_t>(
                        std::distance(exit_cdf[s].begin(), std::upper_bound(exit_cdf[s].begin(), exit_cdf[s].end(), pick)));
                    exit = std::min(exit, n - 1);
                    if (exit == s) exit = s + 1 < n ? s + 1 : s - 1;
                    const int minute = h * 60 + static_cast<int>(unit(rng) * 60.0) % 60;
                    const auto ticket = unit(rng) < spec.electronic_share ? TicketKind::electronic : TicketKind::paper;
                    day_trips.push_back({"PRIMERO", date, minute, ticket, out.stations[s].station, out.stations[exit].station});
                }
            }
        }
        std::stable_sort(day_trips.begin(), day_trips.end(),
                         [](const TripRecord& a, const TripRecord& b) { return a.minute_of_day < b.minute_of_day; });
        std::move(day_trips.begin(), day_trips.end(), std::back_inserter(out.trips));
    }
    std::stable_sort(out.trips.begin(), out.trips.end(), [](const TripRecord& a, const TripRecord& b) { return a.date < b.date; });
    return out;
}

void write_trips_csv(std::ostream& out, const std::vector<TripRecord>& trips) {
    out << "company,datetime,ticket,entry_station,exit_station\n";
    for (const auto& t : trips) out << format_trip_record(t) << '\n';
}

void write_station_meta_csv(std::ostream& out, const std::vector<StationMeta>& stations) {
    out << "station_id,name,latitude,longitude,lga_population\n";
    for (const auto& s : stations)
        out << fmt::format("{},{},{:.6f},{:.6f},{}\n", csv::quote_field(s.station), csv::quote_field(s.name),
                           s.location.latitude, s.location.longitude, s.lga_population);
}

}  // namespace tdl
