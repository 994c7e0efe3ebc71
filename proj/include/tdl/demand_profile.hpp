#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdl/calendar.hpp"
#include "tdl/trip_ingest.hpp"

namespace tdl {

// Boardings for one calendar date, laid out [hour][station].
struct DatedCounts {
    Date date;
    std::vector<std::int64_t> counts;
};

// Boarding counts indexed by weekday x hour x entry station. Counts are raw
// sums over every observed date; the per-weekday date multiplicity travels
// alongside so callers can average. The per-date slices are kept for
// forecasting, which treats each date as a separate observation.
class DemandCube {
public:
    DemandCube() = default;

    // `stations` must be unique; each slice holds 24 * stations.size() counts.
    // Two slices with the same date are merged.
    DemandCube(std::vector<std::string> stations, std::vector<DatedCounts> slices);

    const std::vector<std::string>& stations() const { return stations_; }
    std::size_t station_count() const { return stations_.size(); }
    std::optional<std::size_t> station_index(const std::string& id) const;

    std::int64_t count(Weekday day, int hour, std::size_t station) const {
        return counts_[offset(index_of(day), hour, station)];
    }
    const std::array<int, 7>& weekday_multiplicity() const { return multiplicity_; }
    int multiplicity(Weekday day) const { return multiplicity_[static_cast<std::size_t>(index_of(day))]; }

    // Sorted by date.
    const std::vector<DatedCounts>& slices() const { return slices_; }

    std::int64_t total() const;
    std::int64_t day_total(Weekday day) const;
    std::int64_t hour_total(Weekday day, int hour) const;

private:
    std::size_t offset(int day, int hour, std::size_t station) const {
        return (static_cast<std::size_t>(day) * kHoursPerDay + static_cast<std::size_t>(hour)) * stations_.size() +
               station;
    }

    std::vector<std::string> stations_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::int64_t> counts_;
    std::array<int, 7> multiplicity_{};
    std::vector<DatedCounts> slices_;
};

// Stations are ordered lexicographically by identifier.
DemandCube build_demand_cube(const TripDataset& dataset);

struct DayShare {
    Weekday day;
    double percent;
};

// Per-date-averaged share of each observed weekday, in weekday order.
// Weekdays never observed are omitted. Throws ComputationError on zero total.
std::vector<DayShare> day_share_profile(const DemandCube& cube);

enum class CurveScope { city, day_of_week, station };

struct LoadCurve {
    std::array<double, 24> values{};  // percent of the scope's total
    CurveScope scope = CurveScope::city;
    std::optional<Weekday> day;
};

// Without a day, every weekday is weighted by its per-date average.
LoadCurve hourly_load_curve(const DemandCube& cube, std::optional<Weekday> day = std::nullopt);

// Hours that are strictly greater than each existing neighbour.
std::vector<int> local_maxima(const LoadCurve& curve);

enum class RankWindow { full_day, morning, evening };

// morning = hours [0, 12), evening = hours [12, 24).
bool hour_in_window(int hour, RankWindow window);

struct StationShare {
    std::string station;
    double percent;
};

// Descending by percent, ties by station id ascending.
std::vector<StationShare> station_ranking(const DemandCube& cube, RankWindow window);

struct StationFeature {
    std::string station;
    double log_pct_avg_weekday_demand;
    double log_morning_evening_ratio;
};

struct ExcludedStation {
    std::string station;
    std::string reason;
};

struct StationFeatureSet {
    std::vector<StationFeature> features;
    std::vector<ExcludedStation> excluded;
};

inline constexpr std::int64_t kMinWindowCount = 5;

// Weekday (Mon-Fri) features used for segmentation. Stations whose morning or
// evening count is below kMinWindowCount are excluded and listed.
StationFeatureSet station_features(const DemandCube& cube);

using RouteDemand = std::map<std::pair<std::string, std::string>, std::int64_t>;

RouteDemand route_demand(const TripDataset& dataset);

}  // namespace tdl
