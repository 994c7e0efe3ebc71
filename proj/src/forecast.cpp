#include "tdl/forecast.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "tdl/error.hpp"
#include "tdl/simd/kernels.hpp"

namespace tdl {

namespace {

// Actual and predicted values for every evaluation pair, in panel order.
struct PairBuffers {
    std::vector<double> actual;
    std::vector<double> predicted;
};

PairBuffers collect_pairs(const ForecastModel& model, const DemandPanel& panel) {
    const auto& dims = panel.dims();
    if (dims.days != model.dims.days || dims.hours != model.dims.hours || dims.stations != model.dims.stations)
        throw ComputationError("evaluation panel dimensions do not match the model");
    PairBuffers out;
    const bool city = model.level == ForecastLevel::city;
    const std::size_t per_slice = static_cast<std::size_t>(dims.hours) * (city ? 1 : static_cast<std::size_t>(dims.stations));
    out.actual.reserve(per_slice * panel.slices().size());
    out.predicted.reserve(out.actual.capacity());
    for (const auto& slice : panel.slices()) {
        for (int h = 0; h < dims.hours; ++h) {
            if (city) {
                double total = 0.0;
                for (int s = 0; s < dims.stations; ++s) total += panel.value(slice, h, s);
                out.actual.push_back(total);
                out.predicted.push_back(model.params[model.param_index(slice.day, h, 0)]);
            } else {
                for (int s = 0; s < dims.stations; ++s) {
                    out.actual.push_back(panel.value(slice, h, s));
                    out.predicted.push_back(model.params[model.param_index(slice.day, h, s)]);
                }
            }
        }
    }
    return out;
}

}  // namespace

std::string_view level_name(ForecastLevel level) { return level == ForecastLevel::city ? "city" : "station"; }

ForecastMethod method_from_int(int method) {
    if (method < 1 || method > 4) throw UsageError(fmt::format("forecast method must be 1-4, got {}", method));
    return static_cast<ForecastMethod>(method);
}

DemandPanel::DemandPanel(PanelDims dims, std::vector<PanelSlice> slices) : dims_(dims), slices_(std::move(slices)) {
    if (dims_.days <= 0 || dims_.hours <= 0 || dims_.stations <= 0)
        throw ComputationError(fmt::format("panel dimensions must be positive (D={}, H={}, S={})", dims_.days,
                                           dims_.hours, dims_.stations));
    const auto expected = static_cast<std::size_t>(dims_.hours) * static_cast<std::size_t>(dims_.stations);
    for (const auto& s : slices_) {
        if (s.day < 0 || s.day >= dims_.days) throw ComputationError("panel slice day index out of range");
        if (s.values.size() != expected) throw ComputationError("panel slice has the wrong number of values");
    }
}

DemandPanel panel_from_cube(const DemandCube& cube, const std::vector<Weekday>& days, const std::set<Date>& exclude,
                            bool require_every_day) {
    if (days.empty()) throw ComputationError("forecast training slice has no weekdays");
    if (cube.station_count() == 0) throw ComputationError("forecast training slice is empty (no stations)");
    std::vector<PanelSlice> slices;
    std::vector<int> seen(days.size(), 0);
    for (const auto& dc : cube.slices()) {
        if (exclude.count(dc.date)) continue;
        const auto it = std::find(days.begin(), days.end(), weekday_of(dc.date));
        if (it == days.end()) continue;
        const auto day = static_cast<int>(std::distance(days.begin(), it));
        ++seen[static_cast<std::size_t>(day)];
        slices.push_back({day, dc.date, std::vector<double>(dc.counts.begin(), dc.counts.end())});
    }
    if (slices.empty()) throw ComputationError("forecast training slice is empty");
    if (require_every_day) {
        for (std::size_t i = 0; i < days.size(); ++i)
            if (seen[i] == 0)
                throw ComputationError(fmt::format("forecast training slice has no {} data", weekday_name(days[i])));
    }
    return DemandPanel({static_cast<int>(days.size()), kHoursPerDay, static_cast<int>(cube.station_count())},
                       std::move(slices));
}

PanelSplit holdout_split(const DemandCube& cube, const std::vector<Weekday>& days) {
    std::map<Weekday, Date> latest;
    std::map<Weekday, int> seen;
    for (const auto& dc : cube.slices()) {
        const auto wd = weekday_of(dc.date);
        if (std::find(days.begin(), days.end(), wd) == days.end()) continue;
        ++seen[wd];
        latest[wd] = dc.date;  // slices are date-sorted
    }
    std::set<Date> held;
    for (const auto& [wd, n] : seen)
        if (n >= 2) held.insert(latest[wd]);
    if (held.empty()) throw ComputationError("held-out evaluation needs a training weekday observed on two dates");

    std::set<Date> kept;
    for (const auto& dc : cube.slices())
        if (!held.count(dc.date)) kept.insert(dc.date);
    return {panel_from_cube(cube, days, held), panel_from_cube(cube, days, kept, false)};
}

std::size_t param_count(ForecastMethod method, ForecastLevel level, PanelDims dims) {
    const auto d = static_cast<std::size_t>(dims.days);
    const auto h = static_cast<std::size_t>(dims.hours);
    const auto s = level == ForecastLevel::station ? static_cast<std::size_t>(dims.stations) : 1;
    switch (method) {
        case ForecastMethod::fixed: return s;
        case ForecastMethod::daily: return d * s;
        case ForecastMethod::hourly: return h * s;
        case ForecastMethod::daily_hourly: return d * h * s;
    }
    return 0;
}

std::size_t ForecastModel::param_index(int day, int hour, int station) const {
    const auto d = static_cast<std::size_t>(day);
    const auto h = static_cast<std::size_t>(hour);
    const auto stations = level == ForecastLevel::station ? static_cast<std::size_t>(dims.stations) : 1;
    const auto s = level == ForecastLevel::station ? static_cast<std::size_t>(station) : 0;
    switch (method) {
        case ForecastMethod::fixed: return s;
        case ForecastMethod::daily: return d * stations + s;
        case ForecastMethod::hourly: return h * stations + s;
        case ForecastMethod::daily_hourly: return (d * static_cast<std::size_t>(dims.hours) + h) * stations + s;
    }
    return 0;
}

ForecastModel fit_conditional_mean(const DemandPanel& panel, ForecastMethod method, ForecastLevel level) {
    if (panel.slices().empty()) throw ComputationError("forecast training slice is empty");
    ForecastModel model{level, method, panel.dims(), {}};
    const auto size = param_count(method, level, panel.dims());
    std::vector<double> sums(size, 0.0);
    std::vector<std::size_t> counts(size, 0);
    const auto& dims = panel.dims();
    for (const auto& slice : panel.slices()) {
        for (int h = 0; h < dims.hours; ++h) {
            if (level == ForecastLevel::city) {
                double total = 0.0;
                for (int s = 0; s < dims.stations; ++s) total += panel.value(slice, h, s);
                const auto idx = model.param_index(slice.day, h, 0);
                sums[idx] += total;
                ++counts[idx];
            } else {
                for (int s = 0; s < dims.stations; ++s) {
                    const auto idx = model.param_index(slice.day, h, s);
                    sums[idx] += panel.value(slice, h, s);
                    ++counts[idx];
                }
            }
        }
    }
    model.params.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        if (counts[i] == 0)
            throw ComputationError(fmt::format("forecast method {} has a parameter cell with no training data",
                                               method_number(method)));
        model.params[i] = sums[i] / static_cast<double>(counts[i]);
    }
    return model;
}

ForecastModel fit_conditional_mean(const DemandCube& cube, ForecastMethod method, ForecastLevel level,
                                   const ForecastOptions& options) {
    return fit_conditional_mean(panel_from_cube(cube, options.training_days), method, level);
}

double predict(const ForecastModel& model, int day, int hour, std::optional<int> station) {
    if (day < 0 || day >= model.dims.days || hour < 0 || hour >= model.dims.hours)
        throw ComputationError(fmt::format("forecast key (day={}, hour={}) outside model dimensions", day, hour));
    if (model.level == ForecastLevel::station) {
        if (!station) throw ComputationError("station-level forecast needs a station");
        if (*station < 0 || *station >= model.dims.stations)
            throw ComputationError(fmt::format("station index {} outside model dimensions", *station));
    }
    return model.params[model.param_index(day, hour, station.value_or(0))];
}

MapeScore mape(const ForecastModel& model, const DemandPanel& panel) {
    const auto pairs = collect_pairs(model, panel);
    const auto sum = simd::abs_pct_error_sum(pairs.actual, pairs.predicted);
    MapeScore score;
    score.pairs_used = sum.used;
    score.pairs_excluded_zero_actual = pairs.actual.size() - sum.used;
    if (sum.used == 0) throw ComputationError("MAPE: no evaluation pairs with non-zero actual demand");
    score.value = sum.sum / static_cast<double>(sum.used) * 100.0;
    return score;
}

double mse(const ForecastModel& model, const DemandPanel& panel) {
    const auto pairs = collect_pairs(model, panel);
    if (pairs.actual.empty()) throw ComputationError("MSE: no evaluation pairs");
    return simd::squared_error_sum(pairs.actual, pairs.predicted) / static_cast<double>(pairs.actual.size());
}

std::vector<MethodScore> compare_methods(const DemandPanel& train, const DemandPanel& eval) {
    std::vector<MethodScore> out;
    for (ForecastLevel level : kAllLevels)
        for (ForecastMethod method : kAllMethods) {
            const auto model = fit_conditional_mean(train, method, level);
            out.push_back({level, method, mape(model, eval), mse(model, eval), model.params.size()});
        }
    return out;
}

std::vector<MethodScore> compare_methods(const DemandCube& cube, const ForecastOptions& options) {
    if (options.holdout_latest) {
        const auto split = holdout_split(cube, options.training_days);
        return compare_methods(split.train, split.test);
    }
    const auto panel = panel_from_cube(cube, options.training_days);
    return compare_methods(panel, panel);
}

}  // namespace tdl
