#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mmh/geometry.hpp"
#include "mmh/sim.hpp"
#include "mmh/world.hpp"

namespace mmh {

struct PerceptionConfig {
    double depth_threshold = 4.0;  // m
    double fov_deg = 90.0;
    double miss_prob = 0.0;
};

struct TurningPointObservation {
    std::string zone_id;
    std::set<Cardinal> navigable;
};

// Remembers which object instances have been counted so a landmark seen in
// many consecutive frames is counted once.
struct ObjectTracker {
    std::set<std::string> counted_ids;
    std::map<std::string, int> label_counts;

    int count_for(const std::string& label) const {
        const auto it = label_counts.find(label);
        return it == label_counts.end() ? 0 : it->second;
    }
};

struct Detection {
    std::string object_id;
    std::string label;
    double distance = 0.0;
    double bearing = 0.0;  // radians relative to the robot heading
};

// Zone containing the pose; the lexicographically smallest id wins overlaps.
inline std::optional<TurningPointObservation> detect_turning_point(const WorldMap& map,
                                                                   const Pose& pose) {
    const TurningPointZone* best = nullptr;
    for (const auto& z : map.zones) {
        if (!z.rect.contains(pose.position())) continue;
        if (best == nullptr || z.id < best->id) best = &z;
    }
    if (best == nullptr) return std::nullopt;
    return TurningPointObservation{best->id, best->navigable};
}

namespace detail {

inline std::string fold_token(std::string token) {
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    // Naive English singular: wolves and mice are out of scope for corridor signage.
    const auto ends_with = [&](const char* suffix) {
        const std::size_t n = std::strlen(suffix);
        return token.size() > n && token.compare(token.size() - n, n, suffix) == 0;
    };
    if (ends_with("ies")) {
        token.replace(token.size() - 3, 3, "y");
    } else if (ends_with("sses") || ends_with("shes") || ends_with("ches") || ends_with("xes") ||
               ends_with("zes")) {
        token.erase(token.size() - 2);
    } else if (token.size() > 1 && token.back() == 's' && token[token.size() - 2] != 's') {
        token.pop_back();
    }
    return token;
}

// Case fold, collapse whitespace, singularize each word.
inline std::string normalize_label(const std::string& text) {
    std::string out;
    std::string token;
    const auto flush = [&] {
        if (token.empty()) return;
        if (!out.empty()) out += ' ';
        out += fold_token(token);
        token.clear();
    };
    for (const char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            token += c;
    }
    flush();
    return out;
}

}  // namespace detail

// Open-vocabulary matching reduced to normalized equality over the label and
// its synonyms.
inline bool match_label(const std::string& query, const PlacedObject& object) {
    const std::string q = detail::normalize_label(query);
    if (q == detail::normalize_label(object.label)) return true;
    for (const auto& s : object.synonyms)
        if (q == detail::normalize_label(s)) return true;
    return false;
}

// Range-, FOV- and occlusion-filtered detections of objects matching `query`,
// excluding anything the tracker has already counted. Newly returned ids are
// added to the tracker. Results are ordered by along-track projection so the
// k-th element is the k-th object the robot passes.
inline std::vector<Detection> detect_objects(const WorldMap& map, const Pose& pose,
                                             const std::string& query, ObjectTracker& tracker,
                                             const PerceptionConfig& cfg = {},
                                             std::mt19937_64* rng = nullptr) {
    std::vector<Detection> found;
    const double half_fov = cfg.fov_deg * kPi / 360.0;
    for (const auto& obj : map.objects) {
        if (tracker.counted_ids.contains(obj.id)) continue;
        if (!match_label(query, obj)) continue;
        const Vec2 rel = obj.position - pose.position();
        const double dist = rel.norm();
        if (dist > cfg.depth_threshold) continue;
        const double bearing = dist == 0.0
                                   ? 0.0
                                   : normalize_angle(std::atan2(rel.y, rel.x) - pose.heading);
        if (std::abs(bearing) > half_fov) continue;
        if (dist > 0.0) {
            // Wall occlusion: the sight line must stay passable until the
            // object, allowing the 0.5 m wall-mount margin past the boundary.
            const auto exit = raycast(map, pose.position(), rel * (1.0 / dist), dist);
            if (exit.has_value() && *exit < dist - 0.5 - 1e-9) continue;
        }
        if (rng != nullptr && cfg.miss_prob > 0.0) {
            const double roll = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
            if (roll < cfg.miss_prob) continue;
        }
        found.push_back({obj.id, obj.label, dist, bearing});
    }
    std::sort(found.begin(), found.end(), [](const Detection& a, const Detection& b) {
        const double pa = a.distance * std::cos(a.bearing);
        const double pb = b.distance * std::cos(b.bearing);
        if (pa != pb) return pa < pb;
        return a.object_id < b.object_id;
    });
    for (const auto& d : found) {
        tracker.counted_ids.insert(d.object_id);
        ++tracker.label_counts[d.label];
    }
    return found;
}

}  // namespace mmh
