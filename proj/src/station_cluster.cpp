#include "tdl/station_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "tdl/error.hpp"
#include "tdl/simd/kernels.hpp"

namespace tdl {

namespace {

double sqdist(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::size_t distinct_count(std::span<const Point2> points) {
    std::vector<Point2> sorted(points.begin(), points.end());
    auto less = [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
    std::sort(sorted.begin(), sorted.end(), less);
    return static_cast<std::size_t>(std::distance(sorted.begin(), std::unique(sorted.begin(), sorted.end())));
}

// Greedy k-means++: each step draws several D^2-weighted candidates and keeps
// the one giving the lowest potential.
std::vector<Point2> plus_plus_seeds(std::span<const Point2> points, int k, std::mt19937_64& rng) {
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    std::vector<Point2> seeds;
    seeds.reserve(static_cast<std::size_t>(k));
    std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
    seeds.push_back(points[first(rng)]);

    std::vector<double> nearest(points.size()), candidate(points.size()), best(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) nearest[i] = sqdist(points[i], seeds[0]);
    while (seeds.size() < static_cast<std::size_t>(k)) {
        const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
        std::uniform_real_distribution<double> pick(0.0, total);
        std::size_t best_index = points.size();
        double best_potential = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double target = pick(rng);
            std::size_t chosen = points.size();
            double running = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (nearest[i] == 0.0) continue;
                running += nearest[i];
                chosen = i;
                if (running > target) break;
            }
            double potential = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                candidate[i] = std::min(nearest[i], sqdist(points[i], points[chosen]));
                potential += candidate[i];
            }
            if (best_index == points.size() || potential < best_potential) {
                best_index = chosen;
                best_potential = potential;
                best.swap(candidate);
            }
        }
        seeds.push_back(points[best_index]);
        nearest.swap(best);
    }
    return seeds;
}

void recompute_centroid(std::span<const Point2> points, const std::vector<int>& labels, int cluster, Point2& centroid) {
    double sx = 0.0, sy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] != cluster) continue;
        sx += points[i].x;
        sy += points[i].y;
        ++count;
    }
    if (count > 0) centroid = {sx / static_cast<double>(count), sy / static_cast<double>(count)};
}

double objective(std::span<const Point2> points, const std::vector<int>& labels, const std::vector<Point2>& centroids) {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) sum += sqdist(points[i], centroids[static_cast<std::size_t>(labels[i])]);
    return sum;
}

std::vector<int> order_by_demand(const std::vector<Point2>& centroids) {
    std::vector<int> order(centroids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return centroids[static_cast<std::size_t>(a)].x > centroids[static_cast<std::size_t>(b)].x;
    });
    return order;
}

}  // namespace

ClusterModel kmeans_fit(std::span<const Point2> points, int k, std::uint64_t seed, int max_iterations) {
    if (k < 1) throw ComputationError(fmt::format("k-means: k must be at least 1, got {}", k));
    const auto distinct = distinct_count(points);
    if (distinct < static_cast<std::size_t>(k))
        throw ComputationError(fmt::format("k-means: {} distinct points cannot form {} clusters", distinct, k));

    const std::size_t n = points.size();
    const auto ku = static_cast<std::size_t>(k);
    std::mt19937_64 rng(seed);

    ClusterModel model;
    model.k = k;
    model.centroids = plus_plus_seeds(points, k, rng);
    model.labels.assign(n, -1);

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
    }
    std::vector<double> cx(ku), cy(ku), dist(n);
    std::vector<std::int32_t> assigned(n);

    for (int iter = 1; iter <= max_iterations; ++iter) {
        for (std::size_t j = 0; j < ku; ++j) {
            cx[j] = model.centroids[j].x;
            cy[j] = model.centroids[j].y;
        }
        simd::assign_nearest_2d(xs, ys, cx, cy, assigned, dist);

        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (model.labels[i] != assigned[i]) {
                changed = true;
                model.labels[i] = assigned[i];
            }
        }
        if (!changed) {
            model.converged = true;
            break;
        }
        model.iterations = iter;

        std::vector<std::size_t> sizes(ku, 0);
        for (int label : model.labels) ++sizes[static_cast<std::size_t>(label)];
        for (int j = 0; j < k; ++j) recompute_centroid(points, model.labels, j, model.centroids[static_cast<std::size_t>(j)]);

        for (std::size_t j = 0; j < ku; ++j) {
            if (sizes[j] > 0) continue;
            // farthest point among clusters that can spare one
            std::size_t far = n;
            double far_dist = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto own = static_cast<std::size_t>(model.labels[i]);
                if (sizes[own] < 2) continue;
                const double d = sqdist(points[i], model.centroids[own]);
                if (d > far_dist) {
                    far_dist = d;
                    far = i;
                }
            }
            const auto donor = model.labels[far];
            --sizes[static_cast<std::size_t>(donor)];
            ++sizes[j];
            model.labels[far] = static_cast<int>(j);
            model.centroids[j] = points[far];
            recompute_centroid(points, model.labels, donor, model.centroids[static_cast<std::size_t>(donor)]);
        }
        model.inertia_trace.push_back(objective(points, model.labels, model.centroids));
    }

    model.inertia = objective(points, model.labels, model.centroids);
    model.demand_order = order_by_demand(model.centroids);
    return model;
}

ClusterModel relabel_by_demand(const ClusterModel& model) {
    std::vector<int> rank_of(model.demand_order.size());
    for (std::size_t r = 0; r < model.demand_order.size(); ++r)
        rank_of[static_cast<std::size_t>(model.demand_order[r])] = static_cast<int>(r);

    ClusterModel out = model;
    for (auto& label : out.labels) label = rank_of[static_cast<std::size_t>(label)];
    for (std::size_t j = 0; j < model.centroids.size(); ++j)
        out.centroids[static_cast<std::size_t>(rank_of[j])] = model.centroids[j];
    std::iota(out.demand_order.begin(), out.demand_order.end(), 0);
    return out;
}

std::string_view lean_name(ClusterLean lean) {
    switch (lean) {
        case ClusterLean::morning: return "morning";
        case ClusterLean::afternoon: return "afternoon";
        case ClusterLean::balanced: return "balanced";
    }
    return "balanced";
}

std::map<std::string, int> StationSegmentation::labels_by_station() const {
    std::map<std::string, int> out;
    for (std::size_t i = 0; i < stations.size(); ++i) out.emplace(stations[i].station, model.labels[i]);
    return out;
}

StationSegmentation segment_stations(const std::vector<StationFeature>& features, std::uint64_t seed) {
    if (features.size() < static_cast<std::size_t>(kStationClusters))
        throw ComputationError(fmt::format("station segmentation needs at least {} usable stations, got {}",
                                           kStationClusters, features.size()));
    std::vector<Point2> points;
    points.reserve(features.size());
    for (const auto& f : features) points.push_back({f.log_pct_avg_weekday_demand, f.log_morning_evening_ratio});

    StationSegmentation seg;
    std::mt19937_64 restart_seeds(seed);
    ClusterModel best;
    for (int r = 0; r < kSegmentationRestarts; ++r) {
        auto fit = kmeans_fit(points, kStationClusters, restart_seeds());
        if (r == 0 || fit.inertia < best.inertia) best = std::move(fit);
    }
    seg.model = relabel_by_demand(best);
    seg.stations = features;
    for (const auto& c : seg.model.centroids)
        seg.lean.push_back(c.y > 0.0 ? ClusterLean::morning : c.y < 0.0 ? ClusterLean::afternoon : ClusterLean::balanced);
    return seg;
}

}  // namespace tdl
