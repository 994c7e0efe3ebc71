#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tdl/bus_sim.hpp"
#include "tdl/demand_profile.hpp"
#include "tdl/forecast.hpp"

namespace tdl::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kComputation = 3 };

enum class Command { ingest, profile, rank, cluster, forecast, explain, simulate, sweep, synth };

std::string_view command_name(Command command);

enum class Format { json, csv };

inline constexpr std::uint64_t kDefaultSeed = 42;

struct RunConfig {
    Command command = Command::simulate;
    std::string trips;
    std::string stations;
    std::string out;  // empty: stdout
    Format format = Format::json;
    std::uint64_t seed = kDefaultSeed;

    // profile
    std::optional<Weekday> day;
    // rank
    RankWindow window = RankWindow::full_day;
    // forecast
    std::optional<ForecastMethod> method;
    std::optional<ForecastLevel> level;
    bool holdout = false;
    bool widen_to_friday = false;
    // explain
    bool log_distance = false;
    // simulate / sweep
    SimConfig sim;
    std::vector<double> f_values{1.0, 1.25, 1.5, 2.0};
    std::string trace;
    // synth
    std::string stations_out;
    int days = 0;  // 0: the default 12-date calendar
    double trips_per_day = 10000.0;
    double noise = 0.10;
};

// Runs one configured command. Reports are rendered fully before anything is
// written, so a failing command leaves no partial output file.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (CLI11) and dispatches. Seed falls back to TDL_SEED, then 42.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tdl::cli
