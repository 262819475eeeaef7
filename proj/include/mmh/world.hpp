#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmh/errors.hpp"
#include "mmh/geometry.hpp"

namespace mmh {

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians, [-pi, pi)

    Point position() const { return {x, y}; }
};

enum class Axis : std::uint8_t { X, Y };

struct Corridor {
    std::string id;
    Rect rect;
    Axis axis = Axis::X;

    double width() const { return axis == Axis::X ? rect.height() : rect.width(); }
    double length() const { return axis == Axis::X ? rect.width() : rect.height(); }
};

struct TurningPointZone {
    std::string id;
    Rect rect;
    std::set<Cardinal> navigable;
};

struct PlacedObject {
    std::string id;
    std::string label;
    std::vector<std::string> synonyms;
    Point position;
    std::optional<Cardinal> facing;
};

struct WorldMap {
    std::vector<Corridor> corridors;
    std::vector<TurningPointZone> zones;
    std::vector<PlacedObject> objects;
    Pose start;
    Point goal;
    std::string goal_label;

    Rect bounding_box() const {
        Rect box{{0, 0}, {0, 0}};
        bool first = true;
        for (const auto& c : corridors) {
            if (first) {
                box = c.rect;
                first = false;
            } else {
                box.lo.x = std::min(box.lo.x, c.rect.lo.x);
                box.lo.y = std::min(box.lo.y, c.rect.lo.y);
                box.hi.x = std::max(box.hi.x, c.rect.hi.x);
                box.hi.y = std::max(box.hi.y, c.rect.hi.y);
            }
        }
        return box;
    }

    const Corridor* find_corridor(const std::string& id) const {
        for (const auto& c : corridors)
            if (c.id == id) return &c;
        return nullptr;
    }
};

// Membership in the union of corridor rectangles; boundaries count as passable.
inline bool is_passable(const WorldMap& map, Point p) {
    for (const auto& c : map.corridors)
        if (c.rect.contains(p)) return true;
    return false;
}

// Euclidean distance from p to the corridor union (0 when inside).
inline double distance_to_union(const WorldMap& map, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : map.corridors) {
        const double dx = std::max({c.rect.lo.x - p.x, 0.0, p.x - c.rect.hi.x});
        const double dy = std::max({c.rect.lo.y - p.y, 0.0, p.y - c.rect.hi.y});
        best = std::min(best, std::hypot(dx, dy));
        if (best == 0.0) break;
    }
    return best;
}

// Distance along `direction` to the first exit from the passable union, or
// nullopt (no hit) when the ray is still passable at max_range. The union of
// per-rectangle ray intervals is merged as closed intervals, so edge contact
// between adjacent corridors does not read as a wall.
inline std::optional<double> raycast(const WorldMap& map, Point origin, Vec2 direction,
                                     double max_range) {
    if (!is_passable(map, origin)) throw InvalidOrigin("raycast origin is not passable");

    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(map.corridors.size());
    for (const auto& c : map.corridors) {
        if (auto iv = ray_rect_interval(origin, direction, c.rect)) {
            if (iv->second < 0.0) continue;
            intervals.emplace_back(std::max(iv->first, 0.0), iv->second);
        }
    }
    std::sort(intervals.begin(), intervals.end());

    constexpr double kJoinEps = 1e-9;
    double reach = -1.0;
    for (const auto& [a, b] : intervals) {
        if (reach < 0.0) {
            if (a > kJoinEps) break;  // origin interval must start at 0
            reach = b;
        } else if (a <= reach + kJoinEps) {
            reach = std::max(reach, b);
        } else {
            break;
        }
        if (reach >= max_range) return std::nullopt;
    }
    // reach >= 0 is guaranteed: the origin is passable, so some interval covers t=0.
    return reach;
}

// Midline of a corridor along its travel axis.
inline std::pair<Point, Point> centerline(const WorldMap& map, const std::string& corridor_id) {
    const Corridor* c = map.find_corridor(corridor_id);
    if (c == nullptr) throw UnknownCorridor(corridor_id);
    if (c->axis == Axis::X) {
        const double mid = (c->rect.lo.y + c->rect.hi.y) / 2.0;
        return {{c->rect.lo.x, mid}, {c->rect.hi.x, mid}};
    }
    const double mid = (c->rect.lo.x + c->rect.hi.x) / 2.0;
    return {{mid, c->rect.lo.y}, {mid, c->rect.hi.y}};
}

namespace detail {

inline Point parse_point(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(what + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Rect parse_rect(const nlohmann::json& j, const std::string& what) {
    if (!j.contains("min") || !j.contains("max"))
        throw SchemaError(what + ": expected min/max corners");
    return {parse_point(j.at("min"), what + ".min"), parse_point(j.at("max"), what + ".max")};
}

// True when the zone touches one of the corridor's two ends (the edges
// perpendicular to its travel axis).
inline bool touches_corridor_end(const Rect& zone, const Corridor& c) {
    if (!zone.intersects(c.rect)) return false;
    if (c.axis == Axis::X)
        return zone.lo.x <= c.rect.lo.x || zone.hi.x >= c.rect.hi.x;
    return zone.lo.y <= c.rect.lo.y || zone.hi.y >= c.rect.hi.y;
}

}  // namespace detail

// Parses and validates a map document. Schema errors name the missing or
// malformed field; validation errors name the offending element id.
inline WorldMap load_map(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("map is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("map document must be a JSON object");

    WorldMap map;
    try {
        for (const auto& jc : doc.value("corridors", nlohmann::json::array())) {
            Corridor c;
            c.id = jc.at("id").get<std::string>();
            c.rect = detail::parse_rect(jc, "corridor " + c.id);
            const std::string axis = jc.at("axis").get<std::string>();
            if (axis == "x")
                c.axis = Axis::X;
            else if (axis == "y")
                c.axis = Axis::Y;
            else
                throw SchemaError("corridor " + c.id + ": axis must be \"x\" or \"y\"");
            map.corridors.push_back(std::move(c));
        }
        for (const auto& jz : doc.value("zones", nlohmann::json::array())) {
            TurningPointZone z;
            z.id = jz.at("id").get<std::string>();
            z.rect = detail::parse_rect(jz, "zone " + z.id);
            for (const auto& d : jz.at("navigable")) {
                const auto card = cardinal_from_name(d.get<std::string>());
                if (!card) throw SchemaError("zone " + z.id + ": bad direction");
                z.navigable.insert(*card);
            }
            map.zones.push_back(std::move(z));
        }
        for (const auto& jo : doc.value("objects", nlohmann::json::array())) {
            PlacedObject o;
            o.id = jo.at("id").get<std::string>();
            o.label = jo.at("label").get<std::string>();
            for (const auto& s : jo.value("synonyms", nlohmann::json::array()))
                o.synonyms.push_back(s.get<std::string>());
            o.position = detail::parse_point(jo.at("pos"), "object " + o.id);
            if (jo.contains("facing")) {
                const auto card = cardinal_from_name(jo.at("facing").get<std::string>());
                if (!card) throw SchemaError("object " + o.id + ": bad facing");
                o.facing = *card;
            }
            map.objects.push_back(std::move(o));
        }
        const auto& js = doc.at("start");
        const Point sp = detail::parse_point(js.at("pos"), "start.pos");
        map.start = {sp.x, sp.y,
                     normalize_angle(js.at("heading_deg").get<double>() * kPi / 180.0)};
        const auto& jg = doc.at("goal");
        map.goal = detail::parse_point(jg.at("pos"), "goal.pos");
        map.goal_label = jg.value("label", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("map schema: ") + e.what());
    }

    // Invariants.
    if (map.corridors.empty()) throw ValidationError("corridors", "map has no corridors");
    std::set<std::string> corridor_ids;
    for (const auto& c : map.corridors) {
        if (!corridor_ids.insert(c.id).second)
            throw ValidationError(c.id, "duplicate corridor id");
        if (c.rect.width() <= 0.0 || c.rect.height() <= 0.0)
            throw ValidationError(c.id, "corridor rectangle must have positive extents");
        if (c.width() < 1.0)
            throw ValidationError(c.id, "corridor width must be at least 1 m");
    }
    std::set<std::string> zone_ids;
    for (const auto& z : map.zones) {
        if (!zone_ids.insert(z.id).second) throw ValidationError(z.id, "duplicate zone id");
        if (z.navigable.empty()) throw ValidationError(z.id, "zone has no navigable directions");
        if (z.rect.area() <= 0.0) throw ValidationError(z.id, "zone rectangle must have area");
        int crossed = 0;
        bool end_touch = false;
        for (const auto& c : map.corridors) {
            if (z.rect.intersects(c.rect)) ++crossed;
            end_touch = end_touch || detail::touches_corridor_end(z.rect, c);
        }
        if (crossed < 2 && !end_touch)
            throw ValidationError(z.id, "zone must meet two corridors or a corridor end");
    }
    std::set<std::string> object_ids;
    for (const auto& o : map.objects) {
        if (!object_ids.insert(o.id).second) throw ValidationError(o.id, "duplicate object id");
        if (o.label.empty()) throw ValidationError(o.id, "object label must be non-empty");
        if (distance_to_union(map, o.position) > 0.5)
            throw ValidationError(o.id, "object lies more than 0.5 m outside the corridors");
    }
    if (!is_passable(map, map.start.position()))
        throw ValidationError("start", "start position lies outside the corridors");
    if (!is_passable(map, map.goal))
        throw ValidationError("goal", "goal lies outside the corridors");
    return map;
}

inline WorldMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open map file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_map(ss.str());
}

}  // namespace mmh
