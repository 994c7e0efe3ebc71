#include "tdl/demand_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "tdl/error.hpp"

namespace tdl {

DemandCube::DemandCube(std::vector<std::string> stations, std::vector<DatedCounts> slices)
    : stations_(std::move(stations)) {
    for (std::size_t i = 0; i < stations_.size(); ++i) {
        if (!index_.emplace(stations_[i], i).second)
            throw ComputationError(fmt::format("duplicate station id '{}'", stations_[i]));
    }
    const std::size_t slice_size = kHoursPerDay * stations_.size();
    counts_.assign(kDaysPerWeek * slice_size, 0);

    std::sort(slices.begin(), slices.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
    for (auto& s : slices) {
        if (s.counts.size() != slice_size)
            throw ComputationError(fmt::format("slice for {} has {} counts, expected {}", format_date(s.date),
                                               s.counts.size(), slice_size));
        if (std::any_of(s.counts.begin(), s.counts.end(), [](std::int64_t c) { return c < 0; }))
            throw ComputationError(fmt::format("slice for {} has negative counts", format_date(s.date)));
        if (!slices_.empty() && slices_.back().date == s.date) {
            std::transform(s.counts.begin(), s.counts.end(), slices_.back().counts.begin(),
                           slices_.back().counts.begin(), std::plus<>{});
        } else {
            ++multiplicity_[static_cast<std::size_t>(index_of(weekday_of(s.date)))];
            slices_.push_back(std::move(s));
        }
    }
    for (const auto& s : slices_) {
        const auto base = static_cast<std::size_t>(index_of(weekday_of(s.date))) * slice_size;
        for (std::size_t i = 0; i < slice_size; ++i) counts_[base + i] += s.counts[i];
    }
}

std::optional<std::size_t> DemandCube::station_index(const std::string& id) const {
    if (auto it = index_.find(id); it != index_.end()) return it->second;
    return std::nullopt;
}

std::int64_t DemandCube::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}); }

std::int64_t DemandCube::day_total(Weekday day) const {
    const std::size_t slice_size = kHoursPerDay * stations_.size();
    const auto begin = counts_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(index_of(day)) * slice_size);
    return std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(slice_size), std::int64_t{0});
}

std::int64_t DemandCube::hour_total(Weekday day, int hour) const {
    std::int64_t sum = 0;
    for (std::size_t s = 0; s < stations_.size(); ++s) sum += count(day, hour, s);
    return sum;
}

DemandCube build_demand_cube(const TripDataset& dataset) {
    std::vector<std::string> stations;
    for (const auto& r : dataset.records()) stations.push_back(r.entry_station);
    std::sort(stations.begin(), stations.end());
    stations.erase(std::unique(stations.begin(), stations.end()), stations.end());

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < stations.size(); ++i) index.emplace(stations[i], i);

    std::map<Date, std::vector<std::int64_t>> per_date;
    const std::size_t slice_size = kHoursPerDay * stations.size();
    for (const auto& d : dataset.dates_covered()) per_date[d].assign(slice_size, 0);
    for (const auto& r : dataset.records()) {
        per_date[r.date][static_cast<std::size_t>(r.hour()) * stations.size() + index.at(r.entry_station)] += 1;
    }

    std::vector<DatedCounts> slices;
    slices.reserve(per_date.size());
    for (auto& [date, counts] : per_date) slices.push_back({date, std::move(counts)});
    return DemandCube(std::move(stations), std::move(slices));
}

std::vector<DayShare> day_share_profile(const DemandCube& cube) {
    std::vector<DayShare> shares;
    double sum = 0.0;
    for (Weekday d : kAllWeekdays) {
        const int m = cube.multiplicity(d);
        if (m == 0) continue;
        const double avg = static_cast<double>(cube.day_total(d)) / m;
        shares.push_back({d, avg});
        sum += avg;
    }
    if (sum <= 0.0) throw ComputationError("day share profile: cube has zero total demand");
    for (auto& s : shares) s.percent = s.percent / sum * 100.0;
    return shares;
}

LoadCurve hourly_load_curve(const DemandCube& cube, std::optional<Weekday> day) {
    LoadCurve curve;
    curve.day = day;
    curve.scope = day ? CurveScope::day_of_week : CurveScope::city;
    std::array<double, 24> raw{};
    for (Weekday d : kAllWeekdays) {
        if (day && d != *day) continue;
        const int m = cube.multiplicity(d);
        if (m == 0) continue;
        for (int h = 0; h < kHoursPerDay; ++h)
            raw[static_cast<std::size_t>(h)] += static_cast<double>(cube.hour_total(d, h)) / m;
    }
    const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (total <= 0.0)
        throw ComputationError(day ? fmt::format("load curve: no demand on {}", weekday_name(*day))
                                   : std::string("load curve: cube has zero total demand"));
    for (std::size_t h = 0; h < raw.size(); ++h) curve.values[h] = raw[h] / total * 100.0;
    return curve;
}

std::vector<int> local_maxima(const LoadCurve& curve) {
    std::vector<int> peaks;
    const auto& v = curve.values;
    for (std::size_t h = 0; h < v.size(); ++h) {
        const bool above_left = h == 0 || v[h] > v[h - 1];
        const bool above_right = h + 1 == v.size() || v[h] > v[h + 1];
        if (above_left && above_right) peaks.push_back(static_cast<int>(h));
    }
    return peaks;
}

bool hour_in_window(int hour, RankWindow window) {
    switch (window) {
        case RankWindow::full_day: return true;
        case RankWindow::morning: return hour < 12;
        case RankWindow::evening: return hour >= 12;
    }
    return false;
}

std::vector<StationShare> station_ranking(const DemandCube& cube, RankWindow window) {
    std::vector<std::int64_t> per_station(cube.station_count(), 0);
    for (Weekday d : kAllWeekdays)
        for (int h = 0; h < kHoursPerDay; ++h) {
            if (!hour_in_window(h, window)) continue;
            for (std::size_t s = 0; s < cube.station_count(); ++s) per_station[s] += cube.count(d, h, s);
        }
    const auto total = std::accumulate(per_station.begin(), per_station.end(), std::int64_t{0});
    if (total <= 0) throw ComputationError("station ranking: window has zero total demand");

    std::vector<StationShare> ranking;
    ranking.reserve(per_station.size());
    for (std::size_t s = 0; s < per_station.size(); ++s)
        ranking.push_back({cube.stations()[s], static_cast<double>(per_station[s]) / static_cast<double>(total) * 100.0});
    std::sort(ranking.begin(), ranking.end(), [](const StationShare& a, const StationShare& b) {
        if (a.percent != b.percent) return a.percent > b.percent;
        return a.station < b.station;
    });
    return ranking;
}

StationFeatureSet station_features(const DemandCube& cube) {
    constexpr std::array<Weekday, 5> workdays{Weekday::mon, Weekday::tue, Weekday::wed, Weekday::thu, Weekday::fri};
    const std::size_t n = cube.station_count();
    std::vector<double> pct_sum(n, 0.0);
    std::vector<std::int64_t> morning(n, 0), evening(n, 0);
    int days_used = 0;
    for (Weekday d : workdays) {
        const auto day_total = cube.day_total(d);
        if (cube.multiplicity(d) == 0 || day_total == 0) continue;
        ++days_used;
        for (std::size_t s = 0; s < n; ++s) {
            std::int64_t station_day = 0;
            for (int h = 0; h < kHoursPerDay; ++h) {
                const auto c = cube.count(d, h, s);
                station_day += c;
                (h < 12 ? morning : evening)[s] += c;
            }
            pct_sum[s] += static_cast<double>(station_day) / static_cast<double>(day_total) * 100.0;
        }
    }
    if (days_used == 0) throw ComputationError("station features: no weekday (Mon-Fri) demand in cube");

    StationFeatureSet out;
    for (std::size_t s = 0; s < n; ++s) {
        const auto& id = cube.stations()[s];
        if (morning[s] < kMinWindowCount || evening[s] < kMinWindowCount) {
            out.excluded.push_back({id, fmt::format("morning={} evening={} below minimum {}", morning[s], evening[s],
                                                    kMinWindowCount)});
            continue;
        }
        out.features.push_back({id, std::log(pct_sum[s] / days_used),
                                std::log(static_cast<double>(morning[s]) / static_cast<double>(evening[s]))});
    }
    return out;
}

RouteDemand route_demand(const TripDataset& dataset) {
    RouteDemand routes;
    for (const auto& r : dataset.records()) ++routes[{r.entry_station, r.exit_station}];
    return routes;
}

}  // namespace tdl
