#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdl/demand_profile.hpp"

namespace tdl {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

inline constexpr int kMaxLloydIterations = 300;

struct ClusterModel {
    int k = 0;
    std::vector<Point2> centroids;
    std::vector<int> labels;            // parallel to the fitted points
    double inertia = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> inertia_trace;  // objective after every centroid update
    std::vector<int> demand_order;      // cluster ids by descending centroid x
};

// Greedy k-means++ seeding followed by Lloyd iterations until no label changes or
// max_iterations. Ties in the nearest-centroid step go to the lower id. An
// empty cluster takes over the point farthest from its own centroid.
// Throws ComputationError when k < 1 or there are fewer than k distinct points.
ClusterModel kmeans_fit(std::span<const Point2> points, int k, std::uint64_t seed,
                        int max_iterations = kMaxLloydIterations);

// Renumbers clusters so that id r is the cluster ranked r in demand_order.
// The partition is unchanged.
ClusterModel relabel_by_demand(const ClusterModel& model);

enum class ClusterLean { morning, afternoon, balanced };

std::string_view lean_name(ClusterLean lean);

struct StationSegmentation {
    ClusterModel model;                     // id 0 is the highest-demand cluster
    std::vector<StationFeature> stations;   // parallel to model.labels
    std::vector<ClusterLean> lean;          // per cluster, from the sign of the centroid's log ratio

    std::map<std::string, int> labels_by_station() const;
};

inline constexpr int kStationClusters = 4;
inline constexpr int kSegmentationRestarts = 10;  // lowest-inertia fit is kept

StationSegmentation segment_stations(const std::vector<StationFeature>& features, std::uint64_t seed);

}  // namespace tdl
