#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "tdl/explain.hpp"
#include "tdl/trip_ingest.hpp"

namespace tdl {

// Generator for trip files shaped like a weekday-double-peak BRT corridor:
// multiplicative day x hour x station effects with relative noise per
// (date, hour, station) cell, and stations planted in four demand groups.
struct SynthSpec {
    std::vector<Date> dates = default_dates();
    int stations_per_group = 15;
    double trips_per_day = 10000.0;  // expected boardings on a day with factor 1
    double relative_noise = 0.10;
    // Mon..Sun level multipliers; Monday carries the week's highest demand.
    std::array<double, 7> day_factor{1.15, 1.0, 1.0, 0.98, 0.95, 0.6, 0.35};
    double electronic_share = 0.8;
    std::uint64_t seed = 42;

    // 12 dates from 2019-03-04: Mon-Thu and Sat twice, Fri and Sun once.
    static std::vector<Date> default_dates();
    // `days` consecutive dates from 2019-03-04 (a Monday).
    static std::vector<Date> consecutive_dates(int days);
};

inline constexpr int kPlantedGroups = 4;

struct SynthOutput {
    std::vector<TripRecord> trips;         // sorted by date, then minute
    std::vector<StationMeta> stations;
    std::vector<int> planted_group;        // parallel to stations, 0 = highest demand
};

// Throws UsageError for an invalid spec.
SynthOutput synth_trips(const SynthSpec& spec);

void write_trips_csv(std::ostream& out, const std::vector<TripRecord>& trips);
void write_station_meta_csv(std::ostream& out, const std::vector<StationMeta>& stations);

}  // namespace tdl
