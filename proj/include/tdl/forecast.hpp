#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "tdl/demand_profile.hpp"

namespace tdl {

enum class ForecastLevel { city, station };

// Nested conditional-mean methods, in order of increasing conditioning.
enum class ForecastMethod : int { fixed = 1, daily = 2, hourly = 3, daily_hourly = 4 };

inline constexpr std::array<ForecastMethod, 4> kAllMethods{ForecastMethod::fixed, ForecastMethod::daily,
                                                           ForecastMethod::hourly, ForecastMethod::daily_hourly};
inline constexpr std::array<ForecastLevel, 2> kAllLevels{ForecastLevel::city, ForecastLevel::station};

std::string_view level_name(ForecastLevel level);
// Throws UsageError outside 1..4.
ForecastMethod method_from_int(int method);
constexpr int method_number(ForecastMethod m) { return static_cast<int>(m); }

struct PanelDims {
    int days = 0;
    int hours = kHoursPerDay;
    int stations = 0;
};

// One date of observations, [hour][station].
struct PanelSlice {
    int day = 0;  // index into the panel's day axis
    Date date{};
    std::vector<double> values;
};

// Observations on a (day, hour, station) grid where every day index may be
// observed on several dates. The forecasting methods treat each slice as a
// separate observation of its cells.
class DemandPanel {
public:
    DemandPanel(PanelDims dims, std::vector<PanelSlice> slices);

    const PanelDims& dims() const { return dims_; }
    const std::vector<PanelSlice>& slices() const { return slices_; }
    double value(const PanelSlice& slice, int hour, int station) const {
        return slice.values[static_cast<std::size_t>(hour * dims_.stations + station)];
    }

private:
    PanelDims dims_;
    std::vector<PanelSlice> slices_;
};

struct ForecastOptions {
    // The day axis of the panel, in order. Mon-Thu unless widened.
    std::vector<Weekday> training_days{Weekday::mon, Weekday::tue, Weekday::wed, Weekday::thu};
    // Hold out the latest date of every training weekday seen more than once
    // and score on those dates instead of in-sample.
    bool holdout_latest = false;
};

// Slices of `cube` whose weekday is in options.training_days, skipping
// `exclude`. Throws ComputationError when a training weekday has no dates.
DemandPanel panel_from_cube(const DemandCube& cube, const std::vector<Weekday>& days,
                            const std::set<Date>& exclude = {}, bool require_every_day = true);

struct PanelSplit {
    DemandPanel train;
    DemandPanel test;
};

// Holds out the latest date of each weekday observed on two or more dates.
PanelSplit holdout_split(const DemandCube& cube, const std::vector<Weekday>& days);

std::size_t param_count(ForecastMethod method, ForecastLevel level, PanelDims dims);

struct ForecastModel {
    ForecastLevel level = ForecastLevel::city;
    ForecastMethod method = ForecastMethod::fixed;
    PanelDims dims;
    std::vector<double> params;  // layout given by param_index()

    std::size_t param_index(int day, int hour, int station) const;
};

ForecastModel fit_conditional_mean(const DemandPanel& panel, ForecastMethod method, ForecastLevel level);
ForecastModel fit_conditional_mean(const DemandCube& cube, ForecastMethod method, ForecastLevel level,
                                   const ForecastOptions& options = {});

// `station` is required at station level and ignored at city level.
double predict(const ForecastModel& model, int day, int hour, std::optional<int> station = std::nullopt);

struct MapeScore {
    double value = 0.0;  // percent
    std::size_t pairs_used = 0;
    std::size_t pairs_excluded_zero_actual = 0;
};

MapeScore mape(const ForecastModel& model, const DemandPanel& panel);

// Mean squared error over every pair, zeros included.
double mse(const ForecastModel& model, const DemandPanel& panel);

struct MethodScore {
    ForecastLevel level;
    ForecastMethod method;
    MapeScore mape;
    double mse;
    std::size_t params;
};

// All eight level x method combinations, city first, methods ascending.
std::vector<MethodScore> compare_methods(const DemandCube& cube, const ForecastOptions& options = {});
std::vector<MethodScore> compare_methods(const DemandPanel& train, const DemandPanel& eval);

}  // namespace tdl
