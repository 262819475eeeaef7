#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "mmh/navgraph.hpp"
#include "mmh/sim.hpp"
#include "mmh/world.hpp"

namespace mmh {

struct MetricsConfig {
    double success_radius = 3.0;  // tau, meters
    double cls_sigma = 3.0;       // sigma, meters
};

struct MetricsReport {
    double sr = 0.0;
    double osr = 0.0;
    double spd = 0.0;  // +inf when the goal is unreachable from the final position
    double cls = 0.0;
};

struct Episode {
    Trajectory trajectory;
    std::vector<Point> reference;  // route waypoints, >= 2 points
    Point goal;
    const WorldMap* map = nullptr;
};

// Grid geodesic from the final position to the goal; +inf across components.
inline double spd(Point final_pos, Point goal, const GridGraph& grid) {
    const int from = snap(grid, final_pos);
    const int to = snap(grid, goal);
    return grid_distances(grid, {to})[from];
}

// Success is geodesic, not Euclidean: a final position across a wall from the
// goal does not count.
inline bool success(Point final_pos, Point goal, const GridGraph& grid, double tau) {
    return spd(final_pos, goal, grid) <= tau;
}

inline bool oracle_success(const Trajectory& trajectory, Point goal, const GridGraph& grid,
                           double tau) {
    const std::vector<double> dist = grid_distances(grid, {snap(grid, goal)});
    for (const auto& s : trajectory.samples)
        if (dist[snap(grid, s.pose.position())] <= tau) return true;
    return false;
}

// Path length as summed hop weights (Euclidean node distance, which equals the
// grid edge weight whenever consecutive nodes are grid-adjacent).
inline double path_length(const GridGraph& grid, const std::vector<int>& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i)
        total += (grid.points[path[i]] - grid.points[path[i - 1]]).norm();
    return total;
}

// Coverage weighted by length: CLS = PC * LS with
//   PC = (1/|R|) sum_r exp(-d(r, P) / sigma), d geodesic to the nearest P node,
//   LS = EPL / (EPL + |EPL - PL(P)|), EPL = PC * PL(R).
inline double cls(const std::vector<int>& predicted, const std::vector<int>& reference,
                  const GridGraph& grid, double sigma) {
    if (predicted.empty() || reference.empty()) return 0.0;
    const std::vector<double> to_predicted = grid_distances(grid, predicted);
    double pc = 0.0;
    for (const int r : reference) {
        const double d = to_predicted[r];
        pc += std::isinf(d) ? 0.0 : std::exp(-d / sigma);
    }
    pc /= static_cast<double>(reference.size());

    const double epl = pc * path_length(grid, reference);
    const double denom = epl + std::abs(epl - path_length(grid, predicted));
    const double ls = denom == 0.0 ? 1.0 : epl / denom;
    return pc * ls;
}

// Snaps trajectory samples to grid nodes, dropping consecutive repeats.
inline std::vector<int> snap_trajectory(const Trajectory& trajectory, const GridGraph& grid) {
    std::vector<int> nodes;
    for (const auto& s : trajectory.samples) {
        const int n = snap(grid, s.pose.position());
        if (nodes.empty() || nodes.back() != n) nodes.push_back(n);
    }
    return nodes;
}

// Densifies reference waypoints into a grid node path by joining consecutive
// snapped waypoints with shortest paths.
inline std::vector<int> densify_reference(const std::vector<Point>& waypoints,
                                          const GridGraph& grid) {
    std::vector<int> nodes;
    for (const Point& w : waypoints) {
        const int n = snap(grid, w);
        if (!nodes.empty() && nodes.back() == n) continue;
        if (nodes.empty()) {
            nodes.push_back(n);
            continue;
        }
        if (const auto leg = shortest_path(grid, nodes.back(), n)) {
            nodes.insert(nodes.end(), leg->nodes.begin() + 1, leg->nodes.end());
        } else {
            nodes.push_back(n);  // disconnected reference; scored as-is
        }
    }
    return nodes;
}

inline MetricsReport evaluate_episode(const Episode& episode, const GridGraph& grid,
                                      const MetricsConfig& cfg = {}) {
    MetricsReport report;
    const Point final_pos = episode.trajectory.samples.empty()
                                ? episode.reference.front()
                                : episode.trajectory.samples.back().pose.position();
    report.spd = spd(final_pos, episode.goal, grid);
    report.sr = report.spd <= cfg.success_radius ? 1.0 : 0.0;
    report.osr = oracle_success(episode.trajectory, episode.goal, grid, cfg.success_radius)
                     ? 1.0
                     : 0.0;
    report.cls = cls(snap_trajectory(episode.trajectory, grid),
                     densify_reference(episode.reference, grid), grid, cfg.cls_sigma);
    return report;
}

}  // namespace mmh
