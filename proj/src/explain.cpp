#include "tdl/explain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "tdl/csv.hpp"
#include "tdl/error.hpp"
#include "tdl/simd/kernels.hpp"

namespace tdl {

namespace {

bool valid(GeoPoint p) {
    return std::isfinite(p.latitude) && std::isfinite(p.longitude) && p.latitude >= -90.0 && p.latitude <= 90.0 &&
           p.longitude >= -180.0 && p.longitude <= 180.0;
}

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

double parse_double(const std::string& text, const char* what, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError(fmt::format("station metadata line {}: bad {} '{}'", line, what, text));
}

std::vector<double> centered(std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    std::vector<double> out(v.begin(), v.end());
    for (auto& x : out) x -= mean;
    return out;
}

}  // namespace

double haversine_km(GeoPoint a, GeoPoint b) {
    if (!valid(a) || !valid(b)) throw ComputationError("haversine: coordinates out of range");
    const double dlat = radians(b.latitude - a.latitude);
    const double dlon = radians(b.longitude - a.longitude);
    const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(radians(a.latitude)) * std::cos(radians(b.latitude)) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<StationMeta> load_station_meta(std::istream& in) {
    if (!in) throw InputError("station metadata stream is not readable");
    std::vector<StationMeta> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty()) continue;
        auto fields = csv::split_row(line);
        if (!fields || fields->size() != 5)
            throw InputError(fmt::format("station metadata line {}: expected 5 fields", line_no));
        if (out.empty() && (*fields)[0] == "station_id") continue;
        StationMeta m;
        m.station = (*fields)[0];
        m.name = (*fields)[1];
        m.location = {parse_double((*fields)[2], "latitude", line_no), parse_double((*fields)[3], "longitude", line_no)};
        const double pop = parse_double((*fields)[4], "lga_population", line_no);
        if (m.station.empty()) throw InputError(fmt::format("station metadata line {}: empty station_id", line_no));
        if (!valid(m.location)) throw InputError(fmt::format("station metadata line {}: coordinates out of range", line_no));
        if (!(pop > 0) || pop != std::floor(pop))
            throw InputError(fmt::format("station metadata line {}: lga_population must be a positive integer", line_no));
        m.lga_population = static_cast<std::int64_t>(pop);
        if (std::any_of(out.begin(), out.end(), [&](const StationMeta& o) { return o.station == m.station; }))
            throw InputError(fmt::format("station metadata line {}: duplicate station_id '{}'", line_no, m.station));
        out.push_back(std::move(m));
    }
    if (in.bad()) throw InputError("I/O error while reading station metadata");
    return out;
}

std::vector<StationMeta> load_station_meta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open stations file '{}'", path));
    return load_station_meta(in);
}

RouteObservations route_observations(const RouteDemand& routes, const std::vector<StationMeta>& meta,
                                     const ExplainOptions& options) {
    std::map<std::string, const StationMeta*> by_id;
    for (const auto& m : meta) by_id[m.station] = &m;

    RouteObservations obs;
    obs.predictor_names = {"log_entry_population", "log_exit_population",
                           options.log_distance ? "log_distance_km" : "distance_km"};
    obs.predictors.resize(3);
    for (const auto& [route, demand] : routes) {
        if (demand <= 0) {
            ++obs.excluded_zero_demand;
            continue;
        }
        const auto entry = by_id.find(route.first);
        const auto exit = by_id.find(route.second);
        if (entry == by_id.end() || exit == by_id.end()) {
            ++obs.excluded_missing_meta;
            continue;
        }
        double distance = haversine_km(entry->second->location, exit->second->location);
        if (options.log_distance) {
            if (distance <= 0.0) {
                ++obs.excluded_invalid_distance;
                continue;
            }
            distance = std::log(distance);
        }
        obs.predictors[0].push_back(std::log(static_cast<double>(entry->second->lga_population)));
        obs.predictors[1].push_back(std::log(static_cast<double>(exit->second->lga_population)));
        obs.predictors[2].push_back(distance);
        obs.response.push_back(std::log(static_cast<double>(demand)));
    }
    return obs;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ComputationError("pearson: series lengths differ");
    if (x.size() < 3) throw ComputationError(fmt::format("pearson: need at least 3 observations, got {}", x.size()));
    const auto cx = centered(x);
    const auto cy = centered(y);
    const double sxx = simd::dot(cx, cx);
    const double syy = simd::dot(cy, cy);
    if (sxx == 0.0 || syy == 0.0) throw ComputationError("pearson: zero-variance series");
    return std::clamp(simd::dot(cx, cy) / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport log_correlations(const RouteDemand& routes, const std::vector<StationMeta>& meta,
                                   const ExplainOptions& options) {
    CorrelationReport report;
    report.observations = route_observations(routes, meta, options);
    const auto& obs = report.observations;
    report.n = obs.response.size();
    if (report.n < 3)
        throw ComputationError(fmt::format("correlations need at least 3 usable routes, got {}", report.n));
    for (std::size_t j = 0; j < obs.predictor_names.size(); ++j) {
        try {
            report.r[obs.predictor_names[j]] = pearson(obs.predictors[j], obs.response);
        } catch (const ComputationError& e) {
            throw ComputationError(fmt::format("correlation of {}: {}", obs.predictor_names[j], e.what()));
        }
    }
    return report;
}

double student_t_two_sided_p(double t, double dof) {
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

RegressionResult fit_ols(const OlsInput& input) {
    const std::size_t k = input.names.size();
    const std::size_t n = input.response.size();
    if (input.columns.size() != k) throw ComputationError("OLS: predictor names and columns differ in count");
    for (const auto& c : input.columns)
        if (c.size() != n) throw ComputationError("OLS: predictor column length differs from response");
    if (n <= k + 1)
        throw ComputationError(fmt::format("OLS: {} observations are too few for {} predictors plus intercept", n, k));

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        x(row, 0) = 1.0;
        for (std::size_t j = 0; j < k; ++j) x(row, static_cast<Eigen::Index>(j + 1)) = input.columns[j][i];
        y(row) = input.response[i];
    }

    const double y_mean = y.mean();
    const double tss = (y.array() - y_mean).square().sum();
    if (tss == 0.0) throw ComputationError("OLS: response has zero variance");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) {
        const auto& perm = qr.colsPermutation().indices();
        const auto column_name = [&](Eigen::Index c) {
            return c == 0 ? std::string("'intercept'") : fmt::format("'{}'", input.names[static_cast<std::size_t>(c - 1)]);
        };
        Eigen::MatrixXd kept(x.rows(), qr.rank());
        for (Eigen::Index r = 0; r < qr.rank(); ++r) kept.col(r) = x.col(perm(r));
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> kept_qr(kept);
        std::vector<std::string> parts;
        for (Eigen::Index r = qr.rank(); r < x.cols(); ++r) {
            const Eigen::VectorXd c = kept_qr.solve(x.col(perm(r)));
            std::vector<std::string> deps;
            for (Eigen::Index j = 0; j < c.size(); ++j)
                if (std::fabs(c(j)) > 1e-8) deps.push_back(column_name(perm(j)));
            parts.push_back(fmt::format("{} ~ {}", column_name(perm(r)), fmt::join(deps, " + ")));
        }
        throw ComputationError(fmt::format("OLS: singular design matrix; collinear columns: {}", fmt::join(parts, "; ")));
    }
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - x * beta;
    const double rss = resid.squaredNorm();
    const double dof = static_cast<double>(n - k - 1);
    const double sigma2 = rss / dof;

    // (X'X)^-1 = P R^-1 R^-T P'
    const auto p = static_cast<Eigen::Index>(k + 1);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    const Eigen::MatrixXd cov = qr.colsPermutation() * cov_perm * qr.colsPermutation().transpose();

    RegressionResult out;
    out.predictors = input.names;
    out.n = n;
    out.residual_dof = dof;
    out.intercept = beta(0);
    out.intercept_std_error = std::sqrt(sigma2 * cov(0, 0));
    out.r_squared = std::clamp(1.0 - rss / tss, 0.0, 1.0);
    out.residuals.assign(resid.data(), resid.data() + resid.size());
    for (std::size_t j = 0; j < k; ++j) {
        const auto idx = static_cast<Eigen::Index>(j + 1);
        const auto& name = input.names[j];
        const double coef = beta(idx);
        const double se = std::sqrt(sigma2 * cov(idx, idx));
        double t;
        if (se > 0.0) t = coef / se;
        else t = coef == 0.0 ? std::nan("") : std::copysign(std::numeric_limits<double>::infinity(), coef);
        const double pv = student_t_two_sided_p(t, dof);
        out.coefficients[name] = coef;
        out.std_errors[name] = se;
        out.t_stats[name] = t;
        out.p_values[name] = pv;
        out.significant_at_5pct[name] = pv < kSignificanceLevel;
    }
    return out;
}

RegressionResult fit_ols(const RouteDemand& routes, const std::vector<StationMeta>& meta,
                         const ExplainOptions& options) {
    auto obs = route_observations(routes, meta, options);
    return fit_ols(OlsInput{std::move(obs.predictor_names), std::move(obs.predictors), std::move(obs.response)});
}

}  // namespace tdl
