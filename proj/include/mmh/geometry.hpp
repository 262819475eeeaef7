#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace mmh {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    // z-component of the 3D cross product; positive when o is to the left.
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{1.0, 0.0};
    }
    constexpr bool operator==(const Vec2&) const = default;
};

using Point = Vec2;

// Wraps an angle into [-pi, pi).
inline double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a < 0.0) a += two_pi;
    return a - std::numbers::pi;
}

enum class Cardinal : std::uint8_t { North, East, South, West };

inline constexpr double kPi = std::numbers::pi;

inline double cardinal_heading(Cardinal c) {
    switch (c) {
        case Cardinal::East: return 0.0;
        case Cardinal::North: return kPi / 2.0;
        case Cardinal::West: return -kPi;  // pi is normalized to -pi
        case Cardinal::South: return -kPi / 2.0;
    }
    return 0.0;
}

inline Vec2 cardinal_vector(Cardinal c) {
    switch (c) {
        case Cardinal::East: return {1.0, 0.0};
        case Cardinal::North: return {0.0, 1.0};
        case Cardinal::West: return {-1.0, 0.0};
        case Cardinal::South: return {0.0, -1.0};
    }
    return {1.0, 0.0};
}

// Nearest cardinal to an arbitrary heading; ties resolve toward the
// counterclockwise candidate via rounding half away from zero.
inline Cardinal nearest_cardinal(double heading) {
    const long idx = std::lround(normalize_angle(heading) / (kPi / 2.0));
    switch (((idx % 4) + 4) % 4) {
        case 0: return Cardinal::East;
        case 1: return Cardinal::North;
        case 2: return Cardinal::West;
        default: return Cardinal::South;
    }
}

inline const char* cardinal_name(Cardinal c) {
    switch (c) {
        case Cardinal::North: return "N";
        case Cardinal::East: return "E";
        case Cardinal::South: return "S";
        case Cardinal::West: return "W";
    }
    return "?";
}

inline std::optional<Cardinal> cardinal_from_name(const std::string& s) {
    if (s == "N") return Cardinal::North;
    if (s == "E") return Cardinal::East;
    if (s == "S") return Cardinal::South;
    if (s == "W") return Cardinal::West;
    return std::nullopt;
}

// Axis-aligned rectangle, closed on all sides.
struct Rect {
    Point lo;
    Point hi;

    constexpr double width() const { return hi.x - lo.x; }
    constexpr double height() const { return hi.y - lo.y; }
    constexpr double area() const { return width() * height(); }
    constexpr Point center() const { return {(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0}; }

    constexpr bool contains(Point p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    constexpr bool contains_strict(Point p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
    }
    constexpr bool intersects(const Rect& o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
    }
    // Positive-area overlap, not just edge contact.
    constexpr bool overlaps_interior(const Rect& o) const {
        return lo.x < o.hi.x && o.lo.x < hi.x && lo.y < o.hi.y && o.lo.y < hi.y;
    }
};

// Parameter interval of a ray against a closed rectangle (slab method).
// Returns [t0, t1] with t0 <= t1, or nullopt when the ray misses.
inline std::optional<std::pair<double, double>> ray_rect_interval(Point origin, Vec2 dir,
                                                                  const Rect& r) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();

    const auto clip = [&](double o, double d, double lo, double hi) {
        if (d == 0.0) return o >= lo && o <= hi;
        double a = (lo - o) / d;
        double b = (hi - o) / d;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        return t0 <= t1;
    };

    if (!clip(origin.x, dir.x, r.lo.x, r.hi.x)) return std::nullopt;
    if (!clip(origin.y, dir.y, r.lo.y, r.hi.y)) return std::nullopt;
    return std::make_pair(t0, t1);
}

inline double point_segment_distance(Point p, Point a, Point b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace mmh
