#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tdl/bus_sim.hpp"
#include "tdl/demand_profile.hpp"
#include "tdl/explain.hpp"
#include "tdl/forecast.hpp"
#include "tdl/station_cluster.hpp"
#include "tdl/trip_ingest.hpp"

namespace tdl::report {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// {"schema_version": 1, "command": <command>}
Json envelope(const std::string& command);

std::string_view window_name(RankWindow window);

Json ingest_json(const TripDataset& dataset, const ValidationReport& report);
std::string ingest_csv(const TripDataset& dataset, const ValidationReport& report);

Json profile_json(const std::vector<DayShare>& shares, const LoadCurve& curve);
std::string load_curve_csv(const LoadCurve& curve);

Json ranking_json(RankWindow window, const std::vector<StationShare>& ranking);
std::string ranking_csv(const std::vector<StationShare>& ranking);

// Cluster ids are reported 1-based: cluster 1 has the highest demand.
Json cluster_json(const StationSegmentation& seg, const std::vector<ExcludedStation>& excluded);
std::string cluster_csv(const StationSegmentation& seg);

Json forecast_json(const std::vector<MethodScore>& scores, const ForecastOptions& options);
std::string forecast_csv(const std::vector<MethodScore>& scores);

Json explain_json(const CorrelationReport& correlations, const RegressionResult& regression);
std::string explain_csv(const CorrelationReport& correlations, const RegressionResult& regression);

Json sim_config_json(const SimConfig& config);
Json sim_result_json(const SimResult& result);
Json simulate_json(const SchedulePair& pair);
std::string simulate_csv(const SchedulePair& pair);

Json sweep_json(const SimConfig& config, const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// minute,arrivals,fixed_queue,dynamic_queue
std::string queue_trace_csv(const ArrivalSchedule& arrivals, const SchedulePair& pair);

// Fixed 6-decimal rendering used by every CSV emitter.
std::string num(double value);

}  // namespace tdl::report
