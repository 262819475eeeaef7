#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>

#include "mmh/navscript.hpp"
#include "mmh/perception.hpp"
#include "mmh/sim.hpp"
#include "mmh/world.hpp"

namespace mmh::navscript {

struct ValidationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExecStatus : std::uint8_t { Success, StoppedEarly, Stuck, BudgetExceeded };

inline const char* exec_status_name(ExecStatus s) {
    switch (s) {
        case ExecStatus::Success: return "success";
        case ExecStatus::StoppedEarly: return "stopped_early";
        case ExecStatus::Stuck: return "stuck";
        case ExecStatus::BudgetExceeded: return "budget_exceeded";
    }
    return "?";
}

struct ExecutionResult {
    ExecStatus status = ExecStatus::Success;
    RobotState final_state;
    Trajectory trajectory;
};

struct ExecOptions {
    SimConfig sim;
    PidGains pid;
    PerceptionConfig perception;
    // Optional harness-level abort hook; stopping through it yields StoppedEarly.
    Simulator::Monitor external_monitor;
};

namespace detail {

// Zone-visit counter with re-entry hysteresis: a zone the robot starts inside,
// or re-enters within 2 m of leaving it, does not count as a new visit.
class ZoneCounter {
public:
    ZoneCounter(const WorldMap& map, const Pose& start_pose) : map_(&map) {
        if (const auto obs = detect_turning_point(map, start_pose)) current_ = obs->zone_id;
    }

    // Returns the id of a newly counted zone, if this frame produced one.
    std::optional<std::string> observe(const Pose& pose, double arc_length,
                                       Simulator& sim) {
        const auto obs = detect_turning_point(*map_, pose);
        const std::optional<std::string> now =
            obs ? std::optional<std::string>(obs->zone_id) : std::nullopt;
        if (now == current_) return std::nullopt;
        if (current_) last_exit_[*current_] = arc_length;
        current_ = now;
        if (!now) return std::nullopt;
        sim.add_event(EventKind::ZoneEntered, *now);
        const auto exited = last_exit_.find(*now);
        if (exited != last_exit_.end() && arc_length - exited->second < 2.0)
            return std::nullopt;
        return now;
    }

private:
    const WorldMap* map_;
    std::optional<std::string> current_;
    std::map<std::string, double> last_exit_;
};

}  // namespace detail

// Runs a validated program. Statements execute sequentially on one simulator;
// the clock, trajectory and object tracker span the whole episode.
inline ExecutionResult execute(const NavProgram& program, const WorldMap& map,
                               const RobotState& initial, double budget_s, std::uint64_t seed,
                               const ExecOptions& options = {}) {
    if (!validate(program).empty())
        throw ValidationFailed("navscript program failed semantic validation");
    if (budget_s <= 0.0) throw ValidationFailed("execution budget must be positive");

    Simulator sim(map, options.sim, options.pid, initial);
    std::mt19937_64 rng(seed);
    ObjectTracker tracker;
    constexpr double kNoDistanceCap = std::numeric_limits<double>::infinity();

    ExecStatus status = ExecStatus::Success;
    for (const Stmt& stmt : program.statements) {
        Simulator::PrimitiveOutcome outcome;
        // Set by the until-statement monitors when their own condition, rather
        // than the external abort hook, ended the primitive.
        bool condition_met = false;

        if (const auto* f = std::get_if<Forward>(&stmt)) {
            outcome = sim.move_forward(f->distance, options.external_monitor, budget_s);
        } else if (const auto* tp = std::get_if<ForwardUntilTurningPoint>(&stmt)) {
            detail::ZoneCounter zones(map, sim.state().pose);
            int remaining = tp->skip;
            bool centering = false;
            Point zone_center;
            const auto monitor = [&](const RobotState& s, double t, double arc) {
                if (options.external_monitor && options.external_monitor(s, t, arc))
                    return true;
                if (!centering) {
                    if (const auto hit = zones.observe(s.pose, arc, sim)) {
                        if (--remaining == 0) {
                            const TurningPointZone* zone = nullptr;
                            for (const auto& z : map.zones)
                                if (z.id == *hit) zone = &z;
                            zone_center = zone->rect.center();
                            centering = true;
                        }
                    }
                    if (!centering) return false;
                }
                // Stop once the along-track coordinate passes the zone center.
                const Vec2 travel = cardinal_vector(nearest_cardinal(s.pose.heading));
                if ((zone_center - s.pose.position()).dot(travel) <= 0.0) {
                    condition_met = true;
                    return true;
                }
                return false;
            };
            outcome = sim.move_forward(kNoDistanceCap, monitor, budget_s);
        } else if (const auto* ob = std::get_if<ForwardUntilObject>(&stmt)) {
            int counted = 0;
            bool overshooting = false;
            double stop_at_arc = 0.0;
            const auto monitor = [&](const RobotState& s, double t, double arc) {
                if (options.external_monitor && options.external_monitor(s, t, arc))
                    return true;
                if (!overshooting) {
                    const auto found =
                        detect_objects(map, s.pose, ob->label, tracker, options.perception,
                                       &rng);
                    for (const auto& d : found) {
                        sim.add_event(EventKind::ObjectCounted, d.object_id);
                        if (++counted == ob->count) {
                            // Overshoot is measured past the object itself, not
                            // past the point it was first seen from.
                            const double ahead =
                                std::max(0.0, d.distance * std::cos(d.bearing));
                            stop_at_arc = arc + ahead + ob->overshoot;
                            overshooting = true;
                        }
                    }
                    if (!overshooting) return false;
                }
                if (arc >= stop_at_arc - 1e-9) {
                    condition_met = true;
                    return true;
                }
                return false;
            };
            outcome = sim.move_forward(kNoDistanceCap, monitor, budget_s);
        } else if (const auto* t = std::get_if<Turn>(&stmt)) {
            outcome = sim.turn(t->direction, budget_s);
        } else {  // Stop
            break;
        }

        if (outcome.out_of_time) {
            status = ExecStatus::BudgetExceeded;
            break;
        }
        if (outcome.stuck) {
            status = ExecStatus::Stuck;
            break;
        }
        if (outcome.monitor_stop && !condition_met) {
            status = ExecStatus::StoppedEarly;
            break;
        }
    }
    return {status, sim.state(), sim.trajectory()};
}

}  // namespace mmh::navscript
