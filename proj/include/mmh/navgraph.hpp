#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmh/errors.hpp"
#include "mmh/world.hpp"

namespace mmh {

struct GraphEdge {
    int a = 0;
    int b = 0;
    double length = 0.0;
};

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double mean_edge_length = 0.0;  // 0.0 by convention when edgeless
    double mean_degree = 0.0;
};

// Sparse sampled waypoint graph. Sampled nodes come first, corner nodes after
// sample_count; both participate in edges.
struct NavGraph {
    std::vector<Point> points;
    std::vector<GraphEdge> edges;
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    std::size_t sample_count = 0;

    std::size_t size() const { return points.size(); }
    bool is_corner(int id) const { return static_cast<std::size_t>(id) >= sample_count; }

    template <typename F>
    void for_each_neighbor(int u, F&& f) const {
        for (const auto& [v, w] : adjacency[u]) f(v, w);
    }
};

// Dense lattice over the map bounding box; one node per passable cell center,
// 4-neighbor edges of uniform weight `cell`.
struct GridGraph {
    double cell = 0.5;
    Point origin;
    int cols = 0;
    int rows = 0;
    std::vector<int> cell_node;  // cols*rows, -1 where impassable
    std::vector<Point> points;   // node id -> cell center

    std::size_t size() const { return points.size(); }

    int node_at(int i, int j) const {
        if (i < 0 || j < 0 || i >= cols || j >= rows) return -1;
        return cell_node[static_cast<std::size_t>(j) * cols + i];
    }

    template <typename F>
    void for_each_neighbor(int u, F&& f) const {
        const Point p = points[u];
        const int i = static_cast<int>(std::floor((p.x - origin.x) / cell));
        const int j = static_cast<int>(std::floor((p.y - origin.y) / cell));
        for (const auto [di, dj] : std::array<std::array<int, 2>, 4>{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}}) {
            const int v = node_at(i + di, j + dj);
            if (v >= 0) f(v, cell);
        }
    }
};

namespace detail {

// Deterministic uniform double in [0, 1); avoids distribution objects whose
// output differs across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// A point is a union corner when its four diagonal neighborhoods split 1/3
// or 3/1 between passable and impassable (convex or reflex 90-degree corner).
inline bool is_union_corner(const WorldMap& map, Point p) {
    constexpr double delta = 1e-4;
    int inside = 0;
    for (const auto [sx, sy] : std::array<std::array<double, 2>, 4>{
             {{delta, delta}, {-delta, delta}, {-delta, -delta}, {delta, -delta}}})
        inside += is_passable(map, {p.x + sx, p.y + sy}) ? 1 : 0;
    return inside == 1 || inside == 3;
}

}  // namespace detail

struct NavGraphParams {
    int n_candidates = 1000;
    double min_dist = 2.5;
    double node_clearance = 0.5;
};

// Samples candidate nodes over the passable union, thins them greedily to
// min_dist, adds union-corner nodes, then connects each node to its nearest
// neighbor in each cardinal sector, pruning edges that cross walls or pass
// within node_clearance of a third node.
inline NavGraph build_nav_graph(const WorldMap& map, const NavGraphParams& params,
                                std::uint64_t seed) {
    double area = 0.0;
    for (const auto& c : map.corridors) area += c.rect.area();
    if (map.corridors.empty() || area <= 0.0)
        throw DegenerateMap("map has no passable area");

    const Rect box = map.bounding_box();
    std::mt19937_64 rng(seed);

    NavGraph g;
    // (1)-(2) rejection-sample over the bounding box, thin greedily in order.
    long attempts = 0;
    const long attempt_cap = 20000L * std::max(params.n_candidates, 1) + 100000L;
    for (int k = 0; k < params.n_candidates; ++k) {
        for (;;) {
            if (++attempts > attempt_cap)
                throw DegenerateMap("sampling failed to find passable points");
            const Point p{box.lo.x + detail::uniform01(rng) * box.width(),
                          box.lo.y + detail::uniform01(rng) * box.height()};
            if (!is_passable(map, p)) continue;
            bool ok = true;
            for (const auto& q : g.points) {
                if ((p - q).norm() < params.min_dist) {
                    ok = false;
                    break;
                }
            }
            if (ok) g.points.push_back(p);
            break;  // a candidate inside the union counts whether accepted or thinned
        }
    }
    g.sample_count = g.points.size();

    // (3) union corners, deduplicated, added unconditionally.
    std::set<std::pair<long long, long long>> seen;
    for (const auto& c : map.corridors) {
        for (const Point corner : {c.rect.lo, Point{c.rect.hi.x, c.rect.lo.y}, c.rect.hi,
                                   Point{c.rect.lo.x, c.rect.hi.y}}) {
            const auto key = std::make_pair(std::llround(corner.x * 1e6), std::llround(corner.y * 1e6));
            if (!seen.insert(key).second) continue;
            if (detail::is_union_corner(map, corner)) g.points.push_back(corner);
        }
    }

    // (4) per-node nearest neighbor in each cardinal sector.
    const int n = static_cast<int>(g.points.size());
    std::set<std::pair<int, int>> proposed;
    for (int u = 0; u < n; ++u) {
        std::array<int, 4> best{-1, -1, -1, -1};
        std::array<double, 4> best_d{};
        best_d.fill(std::numeric_limits<double>::infinity());
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            const Vec2 d = g.points[v] - g.points[u];
            int sector;
            if (d.x > 0.0 && std::abs(d.y) <= d.x)
                sector = 0;  // E
            else if (d.x < 0.0 && std::abs(d.y) <= -d.x)
                sector = 1;  // W
            else if (d.y > 0.0)
                sector = 2;  // N
            else
                sector = 3;  // S
            const double dist = d.norm();
            if (dist < best_d[sector] - 1e-12 ||
                (std::abs(dist - best_d[sector]) <= 1e-12 && v < best[sector])) {
                best_d[sector] = dist;
                best[sector] = v;
            }
        }
        for (const int v : best)
            if (v >= 0) proposed.insert({std::min(u, v), std::max(u, v)});
    }

    // (5) prune wall crossings and edges hugging a third node.
    for (const auto& [a, b] : proposed) {
        const Vec2 d = g.points[b] - g.points[a];
        const double len = d.norm();
        if (len <= 0.0) continue;
        if (raycast(map, g.points[a], d * (1.0 / len), len).has_value()) continue;
        bool blocked = false;
        for (int w = 0; w < n && !blocked; ++w) {
            if (w == a || w == b) continue;
            blocked = point_segment_distance(g.points[w], g.points[a], g.points[b]) <
                      params.node_clearance;
        }
        if (!blocked) g.edges.push_back({a, b, len});
    }

    g.adjacency.assign(n, {});
    for (const auto& e : g.edges) {
        g.adjacency[e.a].emplace_back(e.b, e.length);
        g.adjacency[e.b].emplace_back(e.a, e.length);
    }
    return g;
}

inline GraphStats graph_stats(const NavGraph& g) {
    GraphStats s;
    s.nodes = g.size();
    s.edges = g.edges.size();
    double total = 0.0;
    for (const auto& e : g.edges) total += e.length;
    s.mean_edge_length = g.edges.empty() ? 0.0 : total / static_cast<double>(g.edges.size());
    s.mean_degree = g.size() == 0 ? 0.0
                                  : 2.0 * static_cast<double>(g.edges.size()) /
                                        static_cast<double>(g.size());
    return s;
}

inline GridGraph build_grid_graph(const WorldMap& map, double cell = 0.5) {
    if (cell <= 0.0) throw DegenerateMap("grid cell size must be positive");
    double area = 0.0;
    for (const auto& c : map.corridors) area += c.rect.area();
    if (map.corridors.empty() || area <= 0.0)
        throw DegenerateMap("map has no passable area");

    GridGraph g;
    g.cell = cell;
    const Rect box = map.bounding_box();
    g.origin = box.lo;
    g.cols = static_cast<int>(std::ceil(box.width() / cell - 1e-9));
    g.rows = static_cast<int>(std::ceil(box.height() / cell - 1e-9));
    g.cell_node.assign(static_cast<std::size_t>(g.cols) * g.rows, -1);
    for (int j = 0; j < g.rows; ++j) {
        for (int i = 0; i < g.cols; ++i) {
            const Point center{g.origin.x + (i + 0.5) * cell, g.origin.y + (j + 0.5) * cell};
            if (is_passable(map, center)) {
                g.cell_node[static_cast<std::size_t>(j) * g.cols + i] =
                    static_cast<int>(g.points.size());
                g.points.push_back(center);
            }
        }
    }
    return g;
}

// BFS over the grid in meters; valid because every grid edge has equal weight.
inline std::vector<double> grid_distances(const GridGraph& g, const std::vector<int>& sources) {
    std::vector<double> dist(g.size(), std::numeric_limits<double>::infinity());
    std::deque<int> queue;
    for (const int s : sources) {
        if (dist[s] == 0.0) continue;
        dist[s] = 0.0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        g.for_each_neighbor(u, [&](int v, double w) {
            if (std::isinf(dist[v])) {
                dist[v] = dist[u] + w;
                queue.push_back(v);
            }
        });
    }
    return dist;
}

struct PathResult {
    std::vector<int> nodes;
    double length = 0.0;
};

// Dijkstra with a (distance, id) queue order; equal-cost alternatives resolve
// toward the smaller node id.
template <typename Graph>
std::optional<PathResult> shortest_path(const Graph& g, int from, int to) {
    const std::size_t n = g.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[from] = 0.0;
    heap.push({0.0, from});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == to) break;
        g.for_each_neighbor(u, [&, u = u, d = d](int v, double w) {
            if (d + w < dist[v] - 1e-12) {
                dist[v] = d + w;
                prev[v] = u;
                heap.push({dist[v], v});
            }
        });
    }
    if (std::isinf(dist[to])) return std::nullopt;
    PathResult r;
    r.length = dist[to];
    for (int v = to; v != -1; v = prev[v]) r.nodes.push_back(v);
    std::reverse(r.nodes.begin(), r.nodes.end());
    return r;
}

// Nearest node by Euclidean distance; ties go to the smaller id.
inline int snap(const NavGraph& g, Point p) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
        const double d = (g.points[i] - p).norm();
        if (d < best_d - 1e-12) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Grid snap via an expanding ring search around p's cell; exact nearest with
// the same smaller-id tie rule.
inline int snap(const GridGraph& g, Point p) {
    const int ci = std::clamp(static_cast<int>(std::floor((p.x - g.origin.x) / g.cell)), 0,
                              g.cols - 1);
    const int cj = std::clamp(static_cast<int>(std::floor((p.y - g.origin.y) / g.cell)), 0,
                              g.rows - 1);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(g.cols, g.rows);
    for (int r = 0; r <= max_ring; ++r) {
        // No cell center in ring r or beyond can beat the current best.
        if (best >= 0 && (r - 1) * g.cell > best_d) break;
        for (int dj = -r; dj <= r; ++dj) {
            for (int di = -r; di <= r; ++di) {
                if (std::max(std::abs(di), std::abs(dj)) != r) continue;
                const int v = g.node_at(ci + di, cj + dj);
                if (v < 0) continue;
                const double d = (g.points[v] - p).norm();
                if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && v < best)) {
                    best_d = d;
                    best = v;
                }
            }
        }
    }
    return best;
}

inline nlohmann::json graph_to_json(const NavGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
        nodes.push_back({{"id", i}, {"x", g.points[i].x}, {"y", g.points[i].y}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges) edges.push_back({e.a, e.b, e.length});
    return {{"nodes", nodes}, {"edges", edges}};
}

inline nlohmann::json graph_to_json(const GridGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
        nodes.push_back({{"id", i}, {"x", g.points[i].x}, {"y", g.points[i].y}});
    nlohmann::json edges = nlohmann::json::array();
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        g.for_each_neighbor(u, [&](int v, double w) {
            if (u < v) edges.push_back({u, v, w});
        });
    }
    return {{"nodes", nodes}, {"edges", edges}};
}

}  // namespace mmh
