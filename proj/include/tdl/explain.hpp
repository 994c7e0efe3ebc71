#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdl/demand_profile.hpp"

namespace tdl {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double latitude = 0.0;   // degrees, [-90, 90]
    double longitude = 0.0;  // degrees, [-180, 180]
};

// Great-circle distance on a sphere of radius kEarthRadiusKm.
// Throws ComputationError for out-of-range coordinates.
double haversine_km(GeoPoint a, GeoPoint b);

struct StationMeta {
    std::string station;
    std::string name;
    GeoPoint location;
    std::int64_t lga_population = 0;
};

// CSV with header `station_id,name,latitude,longitude,lga_population`.
// Throws InputError on malformed rows, invalid coordinates or populations.
std::vector<StationMeta> load_station_meta(std::istream& in);
std::vector<StationMeta> load_station_meta_file(const std::string& path);

struct ExplainOptions {
    bool log_distance = false;
};

// Route-level design: ln entry population, ln exit population and the
// entry-exit distance (km, or its log) against ln route demand.
struct RouteObservations {
    std::vector<std::string> predictor_names;
    std::vector<std::vector<double>> predictors;  // one column per name
    std::vector<double> response;
    std::size_t excluded_zero_demand = 0;
    std::size_t excluded_missing_meta = 0;
    std::size_t excluded_invalid_distance = 0;  // zero distance under log_distance
};

RouteObservations route_observations(const RouteDemand& routes, const std::vector<StationMeta>& meta,
                                     const ExplainOptions& options = {});

// Throws ComputationError for fewer than 3 points, length mismatch or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
    std::map<std::string, double> r;
    std::size_t n = 0;
    RouteObservations observations;
};

CorrelationReport log_correlations(const RouteDemand& routes, const std::vector<StationMeta>& meta,
                                   const ExplainOptions& options = {});

struct OlsInput {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::vector<double> response;
};

struct RegressionResult {
    std::vector<std::string> predictors;  // ordered as supplied
    std::map<std::string, double> coefficients;
    double intercept = 0.0;
    double intercept_std_error = 0.0;
    std::map<std::string, double> std_errors;
    std::map<std::string, double> t_stats;
    std::map<std::string, double> p_values;
    std::map<std::string, bool> significant_at_5pct;
    double r_squared = 0.0;
    std::size_t n = 0;
    double residual_dof = 0.0;
    std::vector<double> residuals;
};

inline constexpr double kSignificanceLevel = 0.05;

// Two-sided tail probability of Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

// Least squares with an intercept. Throws ComputationError when n <= k + 1,
// when the response is constant, or when the design is rank deficient (the
// message names the collinear columns).
RegressionResult fit_ols(const OlsInput& input);
RegressionResult fit_ols(const RouteDemand& routes, const std::vector<StationMeta>& meta,
                         const ExplainOptions& options = {});

}  // namespace tdl
