#include "tdl/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tdl/error.hpp"
#include "tdl/explain.hpp"
#include "tdl/report.hpp"
#include "tdl/station_cluster.hpp"
#include "tdl/synth.hpp"
#include "tdl/trip_ingest.hpp"

namespace tdl::cli {

namespace {

struct Artifact {
    explicit Artifact(std::string b, std::string s = {}) : body(std::move(b)), stations(std::move(s)) {}

    std::string body;
    std::string trace;     // optional queue trace for simulate
    std::string stations;  // optional station metadata for synth
};

void write_atomically(const std::string& path, const std::string& body) {
    const std::filesystem::path target(path);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError(fmt::format("cannot write '{}'", path));
        f << body;
        if (!f.flush()) throw InputError(fmt::format("cannot write '{}'", path));
    }
    std::filesystem::rename(tmp, target);
}

std::string render(const report::Json& j) { return j.dump(2) + "\n"; }

TripDataset load_dataset(const RunConfig& c) {
    if (c.trips.empty()) throw UsageError("--trips is required");
    return load_trips_file(c.trips).dataset;
}

Artifact run_ingest(const RunConfig& c) {
    if (c.trips.empty()) throw UsageError("--trips is required");
    const auto loaded = load_trips_file(c.trips);
    return Artifact(c.format == Format::json ? render(report::ingest_json(loaded.dataset, loaded.report))
                                     : report::ingest_csv(loaded.dataset, loaded.report));
}

Artifact run_profile(const RunConfig& c) {
    const auto cube = build_demand_cube(load_dataset(c));
    const auto shares = day_share_profile(cube);
    const auto curve = hourly_load_curve(cube, c.day);
    return Artifact(c.format == Format::json ? render(report::profile_json(shares, curve)) : report::load_curve_csv(curve));
}

Artifact run_rank(const RunConfig& c) {
    const auto ranking = station_ranking(build_demand_cube(load_dataset(c)), c.window);
    return Artifact(c.format == Format::json ? render(report::ranking_json(c.window, ranking)) : report::ranking_csv(ranking));
}

Artifact run_cluster(const RunConfig& c) {
    const auto features = station_features(build_demand_cube(load_dataset(c)));
    const auto seg = segment_stations(features.features, c.seed);
    return Artifact(c.format == Format::json ? render(report::cluster_json(seg, features.excluded)) : report::cluster_csv(seg));
}

Artifact run_forecast(const RunConfig& c) {
    const auto cube = build_demand_cube(load_dataset(c));
    ForecastOptions options;
    options.holdout_latest = c.holdout;
    if (c.widen_to_friday) options.training_days.push_back(Weekday::fri);
    auto scores = compare_methods(cube, options);
    std::erase_if(scores, [&](const MethodScore& s) {
        return (c.method && s.method != *c.method) || (c.level && s.level != *c.level);
    });
    return Artifact(c.format == Format::json ? render(report::forecast_json(scores, options)) : report::forecast_csv(scores));
}

Artifact run_explain(const RunConfig& c) {
    if (c.stations.empty()) throw UsageError("--stations is required");
    const auto routes = route_demand(load_dataset(c));
    const auto meta = load_station_meta_file(c.stations);
    const ExplainOptions options{c.log_distance};
    const auto corr = log_correlations(routes, meta, options);
    const auto reg = fit_ols(routes, meta, options);
    return Artifact(c.format == Format::json ? render(report::explain_json(corr, reg)) : report::explain_csv(corr, reg));
}

Artifact run_simulate(const RunConfig& c) {
    SimConfig sim = c.sim;
    sim.seed = c.seed;
    if (!c.f_values.empty()) sim.resource_factor = c.f_values.front();
    validate(sim);
    const auto arrivals = bimodal_arrivals(sim);
    const auto pair = simulate_pair(sim, arrivals);
    Artifact a(c.format == Format::json ? render(report::simulate_json(pair)) : report::simulate_csv(pair));
    if (!c.trace.empty()) a.trace = report::queue_trace_csv(arrivals, pair);
    return a;
}

Artifact run_sweep(const RunConfig& c) {
    SimConfig sim = c.sim;
    sim.seed = c.seed;
    const auto rows = sweep_f(sim, c.f_values);
    return Artifact(c.format == Format::json ? render(report::sweep_json(sim, rows)) : report::sweep_csv(rows));
}

Artifact run_synth(const RunConfig& c) {
    SynthSpec spec;
    spec.seed = c.seed;
    if (c.days < 0) throw UsageError("--days must be >= 0");
    if (c.days > 0) spec.dates = SynthSpec::consecutive_dates(c.days);
    spec.trips_per_day = c.trips_per_day;
    spec.relative_noise = c.noise;
    const auto out = synth_trips(spec);
    std::ostringstream trips, stations;
    write_trips_csv(trips, out.trips);
    write_station_meta_csv(stations, out.stations);
    return Artifact(trips.str(), stations.str());
}

Artifact build(const RunConfig& c) {
    switch (c.command) {
        case Command::ingest: return run_ingest(c);
        case Command::profile: return run_profile(c);
        case Command::rank: return run_rank(c);
        case Command::cluster: return run_cluster(c);
        case Command::forecast: return run_forecast(c);
        case Command::explain: return run_explain(c);
        case Command::simulate: return run_simulate(c);
        case Command::sweep: return run_sweep(c);
        case Command::synth: return run_synth(c);
    }
    throw UsageError("unknown command");
}

std::uint64_t seed_from_env() {
    const char* env = std::getenv("TDL_SEED");
    if (!env || !*env) return kDefaultSeed;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(fmt::format("TDL_SEED is not an unsigned integer: '{}'", env));
}

}  // namespace

std::string_view command_name(Command command) {
    switch (command) {
        case Command::ingest: return "ingest";
        case Command::profile: return "profile";
        case Command::rank: return "rank";
        case Command::cluster: return "cluster";
        case Command::forecast: return "forecast";
        case Command::explain: return "explain";
        case Command::simulate: return "simulate";
        case Command::sweep: return "sweep";
        case Command::synth: return "synth";
    }
    return "?";
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto stage = command_name(config.command);
    try {
        const Artifact a = build(config);
        if (config.out.empty()) out << a.body;
        else write_atomically(config.out, a.body);
        if (!config.trace.empty() && !a.trace.empty()) write_atomically(config.trace, a.trace);
        if (!config.stations_out.empty() && !a.stations.empty()) write_atomically(config.stations_out, a.stations);
        return kOk;
    } catch (const UsageError& e) {
        err << "tdl " << stage << ": usage: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        err << "tdl " << stage << ": input: " << e.what() << '\n';
        return kInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "tdl " << stage << ": input: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        err << "tdl " << stage << ": computation: " << e.what() << '\n';
        return kComputation;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transit demand analytics and bus scheduling simulation", "tdl"};
    app.require_subcommand(1);

    RunConfig c;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::string day, window = "full", level, mode = "deterministic";
    int method = 0;

    const std::vector<std::pair<Command, std::string>> commands{
        {Command::ingest, "Validate a trips CSV and summarise it"},
        {Command::profile, "Day-of-week shares and hourly load curve"},
        {Command::rank, "Stations ranked by share of boardings"},
        {Command::cluster, "K-means station segmentation (k = 4)"},
        {Command::forecast, "Conditional-mean forecast comparison with MAPE"},
        {Command::explain, "Route demand correlations and OLS regression"},
        {Command::simulate, "Fixed vs dynamic scheduling for one f"},
        {Command::sweep, "Fixed vs dynamic scheduling across an f grid"},
        {Command::synth, "Generate a synthetic trips CSV"},
    };

    for (const auto& [cmd, help] : commands) {
        auto* sub = app.add_subcommand(std::string(command_name(cmd)), help);
        sub->callback([&c, cmd = cmd] { c.command = cmd; });
        sub->add_option("--out", c.out, "Output path (default stdout)");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", seed, "Random seed (falls back to TDL_SEED, then 42)");
        switch (cmd) {
            case Command::ingest:
            case Command::profile:
            case Command::rank:
            case Command::cluster:
            case Command::forecast:
            case Command::explain:
                sub->add_option("--trips", c.trips, "Trips CSV")->required();
                break;
            default: break;
        }
        if (cmd == Command::profile) sub->add_option("--day", day, "Restrict the hourly curve to one weekday");
        if (cmd == Command::rank)
            sub->add_option("--window", window, "full, morning or evening")
                ->check(CLI::IsMember({"full", "morning", "evening"}));
        if (cmd == Command::forecast) {
            sub->add_option("--method", method, "Only report method 1-4")->check(CLI::Range(1, 4));
            sub->add_option("--level", level, "Only report city or station")->check(CLI::IsMember({"city", "station"}));
            sub->add_flag("--holdout", c.holdout, "Score on the latest date of each repeated weekday");
            sub->add_flag("--with-friday", c.widen_to_friday, "Train on Mon-Fri instead of Mon-Thu");
        }
        if (cmd == Command::explain) {
            sub->add_option("--stations", c.stations, "Station metadata CSV")->required();
            sub->add_flag("--log-distance", c.log_distance, "Use log distance as the third predictor");
        }
        if (cmd == Command::simulate || cmd == Command::sweep) {
            sub->add_option("--f", c.f_values, "Resource factor(s), comma separated")->delimiter(',');
            sub->add_option("--passengers", c.sim.total_passengers, "Passengers per day");
            sub->add_option("--capacity", c.sim.capacity, "Seats per bus");
            sub->add_option("--peak1", c.sim.peak1_minute, "Morning peak minute");
            sub->add_option("--peak2", c.sim.peak2_minute, "Evening peak minute");
            sub->add_option("--sigma1", c.sim.sigma1, "Morning spread (minutes)");
            sub->add_option("--sigma2", c.sim.sigma2, "Evening spread (minutes)");
            sub->add_option("--weight1", c.sim.weight1, "Morning share of passengers");
            sub->add_option("--mode", mode, "deterministic or stochastic")
                ->check(CLI::IsMember({"deterministic", "stochastic"}));
        }
        if (cmd == Command::simulate) sub->add_option("--trace", c.trace, "Per-minute queue trace CSV");
        if (cmd == Command::synth) {
            sub->add_option("--stations-out", c.stations_out, "Also write station metadata CSV here");
            sub->add_option("--days", c.days, "Consecutive days from 2019-03-04 (default: 12-date calendar)");
            sub->add_option("--trips-per-day", c.trips_per_day, "Expected boardings on a base day");
            sub->add_option("--noise", c.noise, "Relative noise per (date, hour, station) cell");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "tdl: usage: " << e.what() << '\n';
        return kUsage;
    }

    try {
        c.format = format == "csv" ? Format::csv : Format::json;
        c.seed = seed ? *seed : seed_from_env();
        if (!day.empty()) {
            c.day = parse_weekday(day);
            if (!c.day) throw UsageError(fmt::format("unknown weekday '{}'", day));
        }
        c.window = window == "morning" ? RankWindow::morning : window == "evening" ? RankWindow::evening : RankWindow::full_day;
        if (method != 0) c.method = method_from_int(method);
        if (!level.empty()) c.level = level == "city" ? ForecastLevel::city : ForecastLevel::station;
        c.sim.mode = mode == "stochastic" ? ArrivalMode::stochastic : ArrivalMode::deterministic;
    } catch (const UsageError& e) {
        err << "tdl " << command_name(c.command) << ": usage: " << e.what() << '\n';
        return kUsage;
    }
    return dispatch(c, out, err);
}

}  // namespace tdl::cli
