#include "tdl/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tdl/csv.hpp"

namespace tdl::report {

std::string num(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    auto text = fmt::format("{:.6f}", value);
    return text == "-0.000000" ? "0.000000" : text;
}

Json envelope(const std::string& command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    return j;
}

std::string_view window_name(RankWindow window) {
    switch (window) {
        case RankWindow::full_day: return "full";
        case RankWindow::morning: return "morning";
        case RankWindow::evening: return "evening";
    }
    return "full";
}

Json ingest_json(const TripDataset& dataset, const ValidationReport& report) {
    Json j = envelope("ingest");
    Json reasons = Json::object();
    for (const auto& [k, v] : report.rejection_reasons) reasons[k] = v;
    j["validation"] = {{"total_rows", report.total_rows},
                       {"accepted", report.accepted},
                       {"rejected", report.rejected},
                       {"rejection_reasons", reasons},
                       {"loop_trips", report.loop_trips}};
    Json dates = Json::array();
    for (const auto& d : dataset.dates_covered()) dates.push_back(format_date(d));
    Json mult = Json::object();
    for (Weekday d : kAllWeekdays)
        mult[std::string(weekday_name(d))] = dataset.weekday_multiplicity()[static_cast<std::size_t>(index_of(d))];
    j["dataset"] = {{"records", dataset.size()}, {"dates_covered", dates}, {"weekday_multiplicity", mult}};
    return j;
}

std::string ingest_csv(const TripDataset& dataset, const ValidationReport& report) {
    std::string out = "metric,value\n";
    out += fmt::format("total_rows,{}\naccepted,{}\nrejected,{}\nloop_trips,{}\n", report.total_rows, report.accepted,
                       report.rejected, report.loop_trips);
    for (const auto& [k, v] : report.rejection_reasons) out += fmt::format("rejected_{},{}\n", k, v);
    out += fmt::format("dates_covered,{}\n", dataset.dates_covered().size());
    for (Weekday d : kAllWeekdays)
        out += fmt::format("multiplicity_{},{}\n", weekday_name(d),
                           dataset.weekday_multiplicity()[static_cast<std::size_t>(index_of(d))]);
    return out;
}

Json profile_json(const std::vector<DayShare>& shares, const LoadCurve& curve) {
    Json j = envelope("profile");
    Json days = Json::array();
    for (const auto& s : shares) days.push_back({{"day", weekday_name(s.day)}, {"percent", s.percent}});
    j["day_shares"] = days;
    j["hourly"] = {{"scope", curve.day ? "day_of_week" : "city"},
                   {"day", curve.day ? Json(std::string(weekday_name(*curve.day))) : Json(nullptr)},
                   {"percent", curve.values},
                   {"local_maxima", local_maxima(curve)}};
    return j;
}

std::string load_curve_csv(const LoadCurve& curve) {
    std::string out = "hour,percent\n";
    for (std::size_t h = 0; h < curve.values.size(); ++h) out += fmt::format("{},{}\n", h, num(curve.values[h]));
    return out;
}

Json ranking_json(RankWindow window, const std::vector<StationShare>& ranking) {
    Json j = envelope("rank");
    j["window"] = window_name(window);
    Json rows = Json::array();
    for (const auto& r : ranking) rows.push_back({{"station", r.station}, {"percent", r.percent}});
    j["ranking"] = rows;
    return j;
}

std::string ranking_csv(const std::vector<StationShare>& ranking) {
    std::string out = "station,percent\n";
    for (const auto& r : ranking) out += fmt::format("{},{}\n", csv::quote_field(r.station), num(r.percent));
    return out;
}

Json cluster_json(const StationSegmentation& seg, const std::vector<ExcludedStation>& excluded) {
    Json j = envelope("cluster");
    const auto& m = seg.model;
    std::vector<int> sizes(m.centroids.size(), 0);
    for (int l : m.labels) ++sizes[static_cast<std::size_t>(l)];
    Json clusters = Json::array();
    for (std::size_t c = 0; c < m.centroids.size(); ++c)
        clusters.push_back({{"cluster", c + 1},
                            {"centroid", {{"log_pct", m.centroids[c].x}, {"log_ratio", m.centroids[c].y}}},
                            {"lean", lean_name(seg.lean[c])},
                            {"size", sizes[c]}});
    j["k"] = m.k;
    j["clusters"] = clusters;
    j["inertia"] = m.inertia;
    j["iterations"] = m.iterations;
    j["converged"] = m.converged;
    j["inertia_trace"] = m.inertia_trace;
    Json stations = Json::array();
    for (std::size_t i = 0; i < seg.stations.size(); ++i)
        stations.push_back({{"station", seg.stations[i].station},
                            {"cluster", m.labels[i] + 1},
                            {"log_pct", seg.stations[i].log_pct_avg_weekday_demand},
                            {"log_ratio", seg.stations[i].log_morning_evening_ratio}});
    j["stations"] = stations;
    Json ex = Json::array();
    for (const auto& e : excluded) ex.push_back({{"station", e.station}, {"reason", e.reason}});
    j["excluded"] = ex;
    return j;
}

std::string cluster_csv(const StationSegmentation& seg) {
    std::string out = "station,cluster,log_pct,log_ratio\n";
    for (std::size_t i = 0; i < seg.stations.size(); ++i)
        out += fmt::format("{},{},{},{}\n", csv::quote_field(seg.stations[i].station), seg.model.labels[i] + 1,
                           num(seg.stations[i].log_pct_avg_weekday_demand), num(seg.stations[i].log_morning_evening_ratio));
    return out;
}

Json forecast_json(const std::vector<MethodScore>& scores, const ForecastOptions& options) {
    Json j = envelope("forecast");
    j["evaluation"] = options.holdout_latest ? "holdout_latest" : "in_sample";
    Json days = Json::array();
    for (Weekday d : options.training_days) days.push_back(weekday_name(d));
    j["training_days"] = days;
    Json rows = Json::array();
    for (const auto& s : scores)
        rows.push_back({{"level", level_name(s.level)},
                        {"method", method_number(s.method)},
                        {"mape_pct", s.mape.value},
                        {"params", s.params},
                        {"pairs_used", s.mape.pairs_used},
                        {"pairs_excluded", s.mape.pairs_excluded_zero_actual},
                        {"mse", s.mse}});
    j["methods"] = rows;
    return j;
}

std::string forecast_csv(const std::vector<MethodScore>& scores) {
    std::string out = "level,method,mape_pct,params,pairs_used,pairs_excluded\n";
    for (const auto& s : scores)
        out += fmt::format("{},{},{},{},{},{}\n", level_name(s.level), method_number(s.method), num(s.mape.value), s.params,
                           s.mape.pairs_used, s.mape.pairs_excluded_zero_actual);
    return out;
}

Json explain_json(const CorrelationReport& correlations, const RegressionResult& regression) {
    Json j = envelope("explain");
    const auto& obs = correlations.observations;
    j["observations"] = correlations.n;
    j["excluded"] = {{"zero_demand", obs.excluded_zero_demand},
                     {"missing_metadata", obs.excluded_missing_meta},
                     {"invalid_distance", obs.excluded_invalid_distance}};
    Json corr = Json::object();
    for (const auto& name : obs.predictor_names) corr[name] = correlations.r.at(name);
    j["correlations"] = corr;
    Json coef = Json::array();
    for (const auto& name : regression.predictors)
        coef.push_back({{"predictor", name},
                        {"coefficient", regression.coefficients.at(name)},
                        {"std_error", regression.std_errors.at(name)},
                        {"t_stat", regression.t_stats.at(name)},
                        {"p_value", regression.p_values.at(name)},
                        {"significant_5pct", regression.significant_at_5pct.at(name)}});
    j["regression"] = {{"intercept", regression.intercept},
                       {"intercept_std_error", regression.intercept_std_error},
                       {"coefficients", coef},
                       {"r_squared", regression.r_squared},
                       {"n", regression.n},
                       {"residual_dof", regression.residual_dof}};
    return j;
}

std::string explain_csv(const CorrelationReport& correlations, const RegressionResult& regression) {
    std::string out = "predictor,correlation,coefficient,std_error,t_stat,p_value,significant_5pct\n";
    out += fmt::format("intercept,,{},{},,,\n", num(regression.intercept), num(regression.intercept_std_error));
    for (const auto& name : regression.predictors)
        out += fmt::format("{},{},{},{},{},{},{}\n", name, num(correlations.r.at(name)),
                           num(regression.coefficients.at(name)), num(regression.std_errors.at(name)),
                           num(regression.t_stats.at(name)), num(regression.p_values.at(name)),
                           regression.significant_at_5pct.at(name) ? "true" : "false");
    return out;
}

Json sim_config_json(const SimConfig& c) {
    return {{"passengers", c.total_passengers}, {"capacity", c.capacity},   {"f", c.resource_factor},
            {"peak1_minute", c.peak1_minute},   {"peak2_minute", c.peak2_minute}, {"sigma1", c.sigma1},
            {"sigma2", c.sigma2},               {"weight1", c.weight1},     {"day_length", c.day_length},
            {"mode", arrival_mode_name(c.mode)}, {"seed", c.seed}};
}

Json sim_result_json(const SimResult& r) {
    Json j = {{"avg_wait_min", r.avg_wait_min}, {"median_wait_min", r.median_wait_min}, {"max_wait_min", r.max_wait_min},
              {"boarded", r.boarded},           {"stranded", r.stranded},               {"buses", r.per_bus_load.size()},
              {"per_bus_load", r.per_bus_load}};
    if (r.config_echo) j["config"] = sim_config_json(*r.config_echo);
    return j;
}

namespace {

double safe_reduction(const SimResult& fixed, const SimResult& dynamic) {
    return fixed.avg_wait_min > 0.0 ? reduction_pct(fixed.avg_wait_min, dynamic.avg_wait_min) : 0.0;
}

}  // namespace

Json simulate_json(const SchedulePair& pair) {
    Json j = envelope("simulate");
    if (pair.fixed.config_echo) j["config"] = sim_config_json(*pair.fixed.config_echo);
    j["buses"] = pair.buses;
    Json fixed = sim_result_json(pair.fixed);
    Json dynamic = sim_result_json(pair.dynamic);
    fixed.erase("config");
    dynamic.erase("config");
    j["fixed"] = fixed;
    j["dynamic"] = dynamic;
    j["reduction_pct"] = safe_reduction(pair.fixed, pair.dynamic);
    return j;
}

std::string simulate_csv(const SchedulePair& pair) {
    std::string out = "schedule,buses,avg_wait,median_wait,max_wait,boarded,stranded\n";
    for (const auto* r : {&pair.fixed, &pair.dynamic})
        out += fmt::format("{},{},{},{},{},{},{}\n", r == &pair.fixed ? "fixed" : "dynamic", pair.buses,
                           num(r->avg_wait_min), num(r->median_wait_min), r->max_wait_min, r->boarded, r->stranded);
    return out;
}

Json sweep_json(const SimConfig& config, const std::vector<SweepRow>& rows) {
    Json j = envelope("sweep");
    j["config"] = sim_config_json(config);
    Json out = Json::array();
    for (const auto& r : rows) {
        Json fixed = sim_result_json(r.fixed);
        Json dynamic = sim_result_json(r.dynamic);
        fixed.erase("config");
        dynamic.erase("config");
        out.push_back({{"f", r.f}, {"buses", r.buses}, {"fixed", fixed}, {"dynamic", dynamic}, {"reduction_pct", r.reduction}});
    }
    j["rows"] = out;
    return j;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "f,buses,fixed_avg_wait,dynamic_avg_wait,reduction_pct,fixed_stranded,dynamic_stranded\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{}\n", num(r.f), r.buses, num(r.fixed.avg_wait_min),
                           num(r.dynamic.avg_wait_min), num(r.reduction), r.fixed.stranded, r.dynamic.stranded);
    return out;
}

std::string queue_trace_csv(const ArrivalSchedule& arrivals, const SchedulePair& pair) {
    std::string out = "minute,arrivals,fixed_queue,dynamic_queue\n";
    for (std::size_t t = 0; t < arrivals.arrivals.size(); ++t)
        out += fmt::format("{},{},{},{}\n", t, arrivals.arrivals[t], pair.fixed.queue_length[t], pair.dynamic.queue_length[t]);
    return out;
}

}  // namespace tdl::report
