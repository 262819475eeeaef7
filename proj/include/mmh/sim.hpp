#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmh/geometry.hpp"
#include "mmh/world.hpp"

namespace mmh {

struct SimConfig {
    double dt = 0.05;             // s
    double v_max = 1.0;           // m/s
    double omega_max = 1.5;       // rad/s
    double robot_radius = 0.3;    // m
    double stuck_window = 2.0;    // s
    double stuck_progress = 0.05; // m
};

struct PidGains {
    double kp = 1.2;
    double ki = 0.0;
    double kd = 0.4;
    double heading_weight = 1.0;  // lambda blending heading error into the cross-track term
    double integral_limit = 1.0;  // anti-windup clamp on the accumulated error
};

struct PidState {
    double integral = 0.0;
    double prev_error = 0.0;
    bool primed = false;

    void reset() { *this = PidState{}; }
};

struct RobotState {
    Pose pose;
    double speed = 0.0;
    double radius = 0.3;
    std::optional<std::string> current_corridor;
};

struct ControlCommand {
    double v = 0.0;
    double omega = 0.0;
};

enum class EventKind : std::uint8_t { TurnDone, ObjectCounted, ZoneEntered, Collision, Stuck };

inline const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::TurnDone: return "turn_done";
        case EventKind::ObjectCounted: return "object_counted";
        case EventKind::ZoneEntered: return "zone_entered";
        case EventKind::Collision: return "collision";
        case EventKind::Stuck: return "stuck";
    }
    return "?";
}

struct TrajectoryEvent {
    double t = 0.0;
    EventKind kind = EventKind::Collision;
    std::string detail;
};

struct TrajectorySample {
    double t = 0.0;
    Pose pose;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<TrajectoryEvent> events;

    // JSON-lines: pose records interleaved with event records in time order.
    std::string to_jsonl() const {
        std::ostringstream out;
        std::size_t e = 0;
        for (const auto& s : samples) {
            while (e < events.size() && events[e].t <= s.t) {
                out << nlohmann::json{{"t", events[e].t},
                                      {"event", event_name(events[e].kind)},
                                      {"detail", events[e].detail}}
                           .dump()
                    << '\n';
                ++e;
            }
            out << nlohmann::json{
                       {"t", s.t}, {"x", s.pose.x}, {"y", s.pose.y}, {"heading", s.pose.heading}}
                       .dump()
                << '\n';
        }
        for (; e < events.size(); ++e)
            out << nlohmann::json{{"t", events[e].t},
                                  {"event", event_name(events[e].kind)},
                                  {"detail", events[e].detail}}
                       .dump()
                << '\n';
        return out.str();
    }
};

inline Trajectory trajectory_from_jsonl(const std::string& text) {
    Trajectory traj;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        if (j.contains("event")) continue;  // events are not needed to re-score a run
        traj.samples.push_back(
            {j.at("t").get<double>(),
             {j.at("x").get<double>(), j.at("y").get<double>(), j.value("heading", 0.0)}});
    }
    return traj;
}

// Combined-error PID step: e = cross_track + lambda * heading_error, output
// clamped to +/- omega_max with an anti-windup clamp on the integral.
inline double pid_heading(double cross_track_error, double heading_error, PidState& state,
                          const PidGains& gains, double dt, double omega_max) {
    const double e = cross_track_error + gains.heading_weight * heading_error;
    state.integral = std::clamp(state.integral + e * dt, -gains.integral_limit,
                                gains.integral_limit);
    const double de = state.primed ? (e - state.prev_error) / dt : 0.0;
    state.prev_error = e;
    state.primed = true;
    return std::clamp(gains.kp * e + gains.ki * state.integral + gains.kd * de, -omega_max,
                      omega_max);
}

// One unicycle integration step. A move whose body disc would intersect
// impassable space leaves the position unchanged (heading still integrates)
// and reports the collision.
inline RobotState step(const WorldMap& map, const RobotState& state, ControlCommand cmd,
                       double dt, const SimConfig& cfg, bool* collided = nullptr) {
    cmd.v = std::clamp(cmd.v, -cfg.v_max, cfg.v_max);
    cmd.omega = std::clamp(cmd.omega, -cfg.omega_max, cfg.omega_max);

    RobotState next = state;
    const Point candidate{state.pose.x + cmd.v * std::cos(state.pose.heading) * dt,
                          state.pose.y + cmd.v * std::sin(state.pose.heading) * dt};

    bool blocked = false;
    if (candidate.x != state.pose.x || candidate.y != state.pose.y) {
        if (!is_passable(map, candidate)) {
            blocked = true;
        } else {
            // Body disc probe: boundary points of the disc sampled at fixed bearings.
            constexpr int kProbes = 16;
            for (int k = 0; k < kProbes && !blocked; ++k) {
                const double a = 2.0 * kPi * k / kProbes;
                blocked = !is_passable(map, {candidate.x + state.radius * std::cos(a),
                                             candidate.y + state.radius * std::sin(a)});
            }
        }
    }
    if (!blocked) {
        next.pose.x = candidate.x;
        next.pose.y = candidate.y;
        next.speed = std::abs(cmd.v);
    } else {
        next.speed = 0.0;
    }
    next.pose.heading = normalize_angle(state.pose.heading + cmd.omega * dt);
    if (collided != nullptr) *collided = blocked;
    return next;
}

enum class TurnDirection : std::uint8_t { Left, Right, Around };

inline const char* turn_direction_name(TurnDirection d) {
    switch (d) {
        case TurnDirection::Left: return "left";
        case TurnDirection::Right: return "right";
        case TurnDirection::Around: return "around";
    }
    return "?";
}

// Episode-local simulator: owns the robot state, clock and trajectory, and
// provides the motion primitives programs are built from.
class Simulator {
public:
    // Per-frame monitor; return true to stop the current primitive.
    using Monitor = std::function<bool(const RobotState&, double t, double arc_length)>;

    Simulator(const WorldMap& map, SimConfig cfg, PidGains gains, RobotState initial)
        : map_(&map), cfg_(cfg), gains_(gains), state_(std::move(initial)) {
        state_.radius = cfg_.robot_radius;
        state_.pose.heading = normalize_angle(state_.pose.heading);
        resolve_corridor();
        trajectory_.samples.push_back({clock_, state_.pose});
    }

    const RobotState& state() const { return state_; }
    const Trajectory& trajectory() const { return trajectory_; }
    const WorldMap& map() const { return *map_; }
    const SimConfig& config() const { return cfg_; }
    double clock() const { return clock_; }

    void add_event(EventKind kind, std::string detail = {}) {
        trajectory_.events.push_back({clock_, kind, std::move(detail)});
    }

    struct PrimitiveOutcome {
        bool completed = false;       // reached its own termination condition
        bool monitor_stop = false;    // an external monitor requested the stop
        bool stuck = false;
        bool out_of_time = false;
        double arc_length = 0.0;
    };

    // Tracks the centerline of the current corridor for `distance` meters of
    // odometry. The monitor sees every frame and may stop the primitive early.
    PrimitiveOutcome move_forward(double distance, const Monitor& monitor = {},
                                  double time_limit = std::numeric_limits<double>::infinity()) {
        PrimitiveOutcome out;
        pid_.reset();
        progress_window_.clear();
        resolve_corridor();

        while (true) {
            if (out.arc_length >= distance - 1e-9) {
                out.completed = true;
                break;
            }
            if (clock_ + cfg_.dt > time_limit + 1e-9) {
                out.out_of_time = true;
                break;
            }

            const double remaining = distance - out.arc_length;
            const double v = std::min(cfg_.v_max, remaining / cfg_.dt);
            const Point before = state_.pose.position();
            advance_frame(v);
            out.arc_length += (state_.pose.position() - before).norm();

            if (monitor && monitor(state_, clock_, out.arc_length)) {
                out.monitor_stop = true;
                break;
            }
            if (update_stuck_window()) {
                add_event(EventKind::Stuck);
                out.stuck = true;
                break;
            }
        }
        state_.speed = 0.0;
        return out;
    }

    // Rotates in place by +90/-90/180 degrees, then snaps the heading to the
    // nearest cardinal so tracking residue cannot accumulate across turns.
    PrimitiveOutcome turn(TurnDirection direction,
                          double time_limit = std::numeric_limits<double>::infinity()) {
        PrimitiveOutcome out;
        const double delta = direction == TurnDirection::Left    ? kPi / 2.0
                             : direction == TurnDirection::Right ? -kPi / 2.0
                                                                 : kPi;
        const double target = state_.pose.heading + delta;
        double remaining = delta;
        while (std::abs(remaining) > 1e-9) {
            if (clock_ + cfg_.dt > time_limit + 1e-9) {
                out.out_of_time = true;
                return out;
            }
            const double omega =
                std::clamp(remaining / cfg_.dt, -cfg_.omega_max, cfg_.omega_max);
            bool collided = false;
            state_ = step(*map_, state_, {0.0, omega}, cfg_.dt, cfg_, &collided);
            clock_ += cfg_.dt;
            trajectory_.samples.push_back({clock_, state_.pose});
            remaining -= omega * cfg_.dt;
        }
        state_.pose.heading = cardinal_heading(nearest_cardinal(target));
        trajectory_.samples.back().pose = state_.pose;
        resolve_corridor();
        add_event(EventKind::TurnDone, turn_direction_name(direction));
        out.completed = true;
        return out;
    }

    // Corridor the robot is tracking: prefer one aligned with the heading,
    // fall back to any rectangle containing the pose (smaller id on ties).
    void resolve_corridor() {
        const Point p = state_.pose.position();
        const Cardinal heading = nearest_cardinal(state_.pose.heading);
        const Axis want =
            (heading == Cardinal::East || heading == Cardinal::West) ? Axis::X : Axis::Y;
        const Corridor* aligned = nullptr;
        const Corridor* any = nullptr;
        for (const auto& c : map_->corridors) {
            if (!c.rect.contains(p)) continue;
            if (any == nullptr || c.id < any->id) any = &c;
            if (c.axis == want && (aligned == nullptr || c.id < aligned->id)) aligned = &c;
        }
        const Corridor* pick = aligned != nullptr ? aligned : any;
        state_.current_corridor = pick != nullptr ? std::optional<std::string>(pick->id)
                                                  : std::nullopt;
    }

private:
    void advance_frame(double v) {
        double omega = 0.0;
        if (state_.current_corridor) {
            const auto [a, b] = centerline(*map_, *state_.current_corridor);
            const Vec2 axis = (b - a).normalized();
            const Vec2 travel =
                axis.dot({std::cos(state_.pose.heading), std::sin(state_.pose.heading)}) >= 0.0
                    ? axis
                    : axis * -1.0;
            const Vec2 offset = state_.pose.position() - a;
            // Positive when the robot sits right of the line, so positive
            // omega (left turn) steers back toward it.
            const double cross_track = -travel.cross(offset);
            const double heading_err =
                normalize_angle(std::atan2(travel.y, travel.x) - state_.pose.heading);
            omega = pid_heading(cross_track, heading_err, pid_, gains_, cfg_.dt,
                                cfg_.omega_max);
        }
        bool collided = false;
        state_ = step(*map_, state_, {v, omega}, cfg_.dt, cfg_, &collided);
        clock_ += cfg_.dt;
        trajectory_.samples.push_back({clock_, state_.pose});
        if (collided) add_event(EventKind::Collision);

        // Keep tracking a corridor that still fits; hand off otherwise.
        if (state_.current_corridor) {
            const Corridor* c = map_->find_corridor(*state_.current_corridor);
            if (c != nullptr && c->rect.contains(state_.pose.position())) return;
        }
        resolve_corridor();
    }

    // True when the robot has made less than stuck_progress over the window.
    bool update_stuck_window() {
        progress_window_.push_back(state_.pose.position());
        const std::size_t span = static_cast<std::size_t>(cfg_.stuck_window / cfg_.dt);
        if (progress_window_.size() <= span) return false;
        while (progress_window_.size() > span + 1) progress_window_.pop_front();
        return (progress_window_.back() - progress_window_.front()).norm() <
               cfg_.stuck_progress;
    }

    const WorldMap* map_;
    SimConfig cfg_;
    PidGains gains_;
    RobotState state_;
    PidState pid_;
    Trajectory trajectory_;
    double clock_ = 0.0;
    std::deque<Point> progress_window_;
};

}  // namespace mmh
