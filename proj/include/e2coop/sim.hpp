#pragma once

// Lockstep simulation loop: obstacle motion, detection, cooperative
// adjustment, per-UAV planning, motion, metrics and file export.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "e2coop/baselines.hpp"
#include "e2coop/planner.hpp"
#include "e2coop/scenario.hpp"

namespace e2coop {

enum class PlannerKind { e2coop, ffpso, ppso };

inline const char* planner_name(PlannerKind k) {
    switch (k) {
        case PlannerKind::e2coop: return "e2coop";
        case PlannerKind::ffpso: return "ffpso";
        case PlannerKind::ppso: return "ppso";
    }
    return "unknown";
}

inline PlannerKind planner_from_name(const std::string& s) {
    if (s == "e2coop") return PlannerKind::e2coop;
    if (s == "ffpso") return PlannerKind::ffpso;
    if (s == "ppso") return PlannerKind::ppso;
    throw std::invalid_argument("unknown planner: " + s);
}

struct ScenarioKind {
    enum Kind { obstacle_in_front, obstacle_on_side_left, obstacle_on_side_right, custom };
    Kind kind{obstacle_in_front};
    double obstacle_speed{0.0};       // v_obs, m/s
    double initial_separation{200.0}; // m
};

struct StepTrace {
    int step{0};
    double time{0.0};
    int uav_id{0};
    Vec2 position;
    double heading{0.0};
    double omega{0.0};
    double kappa{0.0};
    double phi{0.0};
    double fitness{0.0};
    double f_e{0.0};
    double f_s{0.0};
    double shift{0.0};
    double energy_j{0.0};
};

struct ObstacleTrace {
    int step{0};
    double time{0.0};
    int obstacle_id{0};
    Vec2 position;
    Vec2 velocity;
};

struct RunRecord {
    std::vector<SwarmSnapshot> snapshots;
    std::vector<StepTrace> traces;          // per UAV per step, step >= 0
    std::vector<ObstacleTrace> obstacle_traces;
    std::vector<std::optional<Vec2>> leader_per_step;
    std::optional<EnvironmentField> last_field;  // snapshot from the last avoidance tick
};

struct Metrics {
    std::vector<double> energy_per_uav;
    double total_energy{0.0};
    double min_obstacle_clearance{std::numeric_limits<double>::infinity()};
    double min_uav_pair_distance{std::numeric_limits<double>::infinity()};
    std::vector<double> path_length_per_uav;
    bool reached_destination{false};
    int unresolved_adjustments{0};
    int steps_run{0};
    double wall_time{0.0};
};

// ---- presets -------------------------------------------------------------

struct PresetSpec {
    ScenarioKind::Kind kind{ScenarioKind::obstacle_in_front};
    int n{5};
    double cruise_speed{10.0};
    double v_obs{0.0};
    double d_obs{26.0};
    double d_v2v{0.5};
    double lambda1{0.5};
    double tau{20.0};
    double initial_separation{200.0};
    double route_length{400.0};
    std::uint64_t seed{0};
    int max_steps{600};
};

inline ScenarioConfig make_scenario(const PresetSpec& spec) {
    ScenarioConfig cfg;
    // phase offset keeps every member off the centroid-destination ray, so
    // no UAV starts exactly at the virtual leader (degenerate field intensity)
    cfg.uavs = build_circle_formation(spec.n, Vec2{0.0, 0.0}, spec.tau, 0.0,
                                      spec.n > 1 ? kPi / spec.n : 0.0);
    for (auto& u : cfg.uavs) u.speed = spec.cruise_speed;
    cfg.destination = Vec2{spec.route_length, 0.0};
    cfg.formation_radius = spec.tau;
    cfg.swarm_size = spec.n;
    cfg.safeguard_v2v = spec.d_v2v;
    cfg.lambda1 = spec.lambda1;
    cfg.lambda2 = 1.0 - spec.lambda1;
    cfg.rng_seed = spec.seed;
    cfg.pso.rng_seed = spec.seed;
    cfg.max_steps = spec.max_steps;
    cfg.energy.speed = spec.cruise_speed;

    Obstacle obs;
    obs.forbidden_radius = spec.d_obs;
    // keep a full avoid-distance worth of sloped field outside the forbidden
    // zone; a thin shell leaves fast closers no contour to latch onto
    obs.influence_radius = spec.d_obs + cfg.avoid_distance;
    switch (spec.kind) {
        case ScenarioKind::obstacle_in_front:
            obs.position = Vec2{spec.initial_separation, 0.0};
            obs.velocity = Vec2{-spec.v_obs, 0.0};
            cfg.obstacles.push_back(obs);
            break;
        case ScenarioKind::obstacle_on_side_left:
            obs.position = Vec2{spec.initial_separation * std::cos(kPi / 4.0),
                                spec.initial_separation * std::sin(kPi / 4.0)};
            obs.velocity = Vec2{0.0, -spec.v_obs};
            cfg.obstacles.push_back(obs);
            break;
        case ScenarioKind::obstacle_on_side_right:
            obs.position = Vec2{spec.initial_separation * std::cos(kPi / 4.0),
                                -spec.initial_separation * std::sin(kPi / 4.0)};
            obs.velocity = Vec2{0.0, spec.v_obs};
            cfg.obstacles.push_back(obs);
            break;
        case ScenarioKind::custom:
            break;
    }
    return cfg;
}

inline PresetSpec preset_from_name(const std::string& name) {
    PresetSpec spec;
    if (name == "obstacle_in_front") {
        spec.kind = ScenarioKind::obstacle_in_front;
    } else if (name == "obstacle_on_side" || name == "obstacle_on_side_left") {
        spec.kind = ScenarioKind::obstacle_on_side_left;
    } else if (name == "obstacle_on_side_right") {
        spec.kind = ScenarioKind::obstacle_on_side_right;
    } else {
        throw std::invalid_argument("unknown scenario preset: " + name);
    }
    return spec;
}

// ---- simulation loop -----------------------------------------------------

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t base, int step, int uav_id) {
    return base * 1000003u + static_cast<std::uint64_t>(step) * 1009u +
           static_cast<std::uint64_t>(uav_id) * 101u;
}

inline EnvironmentField build_field(const std::vector<UavState>& states,
                                    const std::vector<Obstacle>& obstacles,
                                    const Vec2& destination, double lookahead_dt = 0.0) {
    std::vector<Vec2> positions;
    positions.reserve(states.size());
    for (const auto& u : states) positions.push_back(u.position);
    const double v_s = swarm_speed(states);

    // Advance the leader until every member's swarm intensity sits below the
    // weakest obstacle plateau; otherwise the swarm term swamps the obstacle
    // fields near the members and contours stop wrapping the forbidden disks.
    Vec2 centroid;
    for (const auto& p : positions) centroid = centroid + p;
    centroid = centroid * (1.0 / static_cast<double>(positions.size()));
    double max_member = 0.0;
    for (const auto& p : positions) max_member = std::max(max_member, distance(p, centroid));
    double s_adv = max_member;
    if (!obstacles.empty()) {
        double widest = 0.0;
        for (const auto& o : obstacles) widest = std::max(widest, o.forbidden_radius);
        s_adv += std::sqrt(2.0) * widest;
    }
    const LeaderInfo leader = virtual_leader(positions, destination, s_adv);

    EnvironmentField field;
    field.swarm.virtual_leader = leader.p_star;
    field.swarm.swarm_speed = v_s;
    field.swarm.advance_offset = leader.s_adv;
    field.swarm.destination_dir = leader.direction;
    double max_to_leader = 0.0;
    for (const auto& p : positions) {
        max_to_leader = std::max(max_to_leader, distance(p, leader.p_star));
    }
    field.swarm.influence_radius = std::max(2.0 * max_to_leader, 1.0);
    for (const auto& o : obstacles) {
        // plan against where the obstacle will sit while the arcs are flown,
        // not where it was when the tick started
        Obstacle ahead = o;
        ahead.position = o.position + o.velocity * lookahead_dt;
        field.obstacles.push_back(make_obstacle_field(ahead, v_s));
    }
    return field;
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 < 1e-18) return distance(p, a);
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

/// A UAV maneuvers only while an obstacle is both inside its avoid distance
/// and blocking the straight run to the destination; this releases members
/// that have already wrapped past an obstacle instead of keeping the whole
/// swarm in avoidance mode until the obstacle leaves everyone's range.
inline bool needs_avoidance(const UavState& u, const std::vector<Obstacle>& obstacles,
                            const Vec2& destination, double avoid_distance, double dt) {
    for (const auto& o : obstacles) {
        // fast closers need earlier engagement: widen the trigger by the
        // ground both parties can cover within one planning step
        const double closure = (u.speed + o.velocity.norm()) * dt;
        if (distance(u.position, o.position) > avoid_distance + closure) continue;
        // an obstacle already behind the run toward the destination cannot block it
        if ((o.position - u.position).dot(destination - u.position) <= 0.0) continue;
        const double margin = o.forbidden_radius + closure;
        if (point_segment_distance(o.position, u.position, destination) < margin) return true;
    }
    return false;
}

/// True when the step from the UAV to `end` drifts toward the track of a
/// moving obstacle while the UAV sits inside the corridor it is sweeping out.
inline bool drifts_into_approach(const UavState& u, const Vec2& end,
                                 const std::vector<Obstacle>& obstacles,
                                 double avoid_distance, double dt) {
    for (const auto& o : obstacles) {
        const double speed = o.velocity.norm();
        if (speed < 1e-9) continue;
        const double closure = (u.speed + speed) * dt;
        if (distance(u.position, o.position) > avoid_distance + closure) continue;
        const Vec2 dir = o.velocity * (1.0 / speed);
        const Vec2 rel = u.position - o.position;
        if (rel.dot(dir) <= 0.0) continue;  // UAV not in the obstacle's path
        const double s0 = dir.x * rel.y - dir.y * rel.x;
        if (std::fabs(s0) > o.forbidden_radius) continue;  // outside the swept corridor
        const Vec2 rel_end = end - o.position;
        const double s1 = dir.x * rel_end.y - dir.y * rel_end.x;
        if (std::fabs(s1) < std::fabs(s0) || s0 * s1 < 0.0) return true;
    }
    return false;
}

inline void track_clearances(Metrics& m, const std::vector<std::vector<Vec2>>& sampled_paths,
                             const std::vector<Obstacle>& obstacles) {
    for (std::size_t a = 0; a < sampled_paths.size(); ++a) {
        for (const auto& q : sampled_paths[a]) {
            for (const auto& o : obstacles) {
                m.min_obstacle_clearance =
                    std::min(m.min_obstacle_clearance, distance(q, o.position));
            }
        }
        for (std::size_t b = a + 1; b < sampled_paths.size(); ++b) {
            const std::size_t k = std::min(sampled_paths[a].size(), sampled_paths[b].size());
            for (std::size_t i = 0; i < k; ++i) {
                m.min_uav_pair_distance = std::min(
                    m.min_uav_pair_distance, distance(sampled_paths[a][i], sampled_paths[b][i]));
            }
        }
    }
}

}  // namespace detail

struct RunResult {
    RunRecord record;
    Metrics metrics;
};

/// Recorded (omega, kappa) fitness instances for offline PSO quality checks.
/// Consumers must rebind request.field to &field before evaluating.
struct PlanInstance {
    PlanRequest request;
    EnvironmentField field;  // owning copy of the snapshot
    double pso_fitness{0.0};
};

inline RunResult run_scenario(const ScenarioConfig& cfg, PlannerKind planner,
                              std::vector<PlanInstance>* instance_log = nullptr,
                              const FfpsoConfig& ffpso_cfg = {},
                              const PpsoConfig& ppso_cfg = {}) {
    {
        const auto violations = validate_scenario(cfg);
        if (!violations.empty()) {
            std::string msg = "invalid scenario:";
            for (const auto& s : violations) msg += " [" + s + "]";
            throw std::invalid_argument(msg);
        }
    }
    const auto t0 = std::chrono::steady_clock::now();

    RunResult out;
    RunRecord& rec = out.record;
    Metrics& m = out.metrics;

    std::vector<UavState> states = cfg.uavs;
    std::vector<Obstacle> obstacles = cfg.obstacles;
    const std::size_t n = states.size();
    m.energy_per_uav.assign(n, 0.0);
    m.path_length_per_uav.assign(n, 0.0);

    FfpsoConfig ffpso = ffpso_cfg;
    ffpso.base = cfg.pso;
    PpsoConfig ppso = ppso_cfg;
    ppso.base = cfg.pso;

    double time = 0.0;
    rec.snapshots.push_back(SwarmSnapshot{states, time});
    rec.leader_per_step.push_back(std::nullopt);
    for (std::size_t a = 0; a < n; ++a) {
        StepTrace t;
        t.step = 0;
        t.uav_id = states[a].id;
        t.position = states[a].position;
        t.heading = states[a].heading;
        t.omega = states[a].heading;
        rec.traces.push_back(t);
    }
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
        rec.obstacle_traces.push_back(
            {0, 0.0, static_cast<int>(j), obstacles[j].position, obstacles[j].velocity});
    }

    for (int step = 1; step <= cfg.max_steps; ++step) {
        // 1. obstacle motion
        for (auto& o : obstacles) o.position = o.position + o.velocity * cfg.dt;

        // 2. detection, per UAV
        std::vector<bool> avoid(n, false);
        bool any_avoid = false;
        for (std::size_t a = 0; a < n; ++a) {
            avoid[a] = detail::needs_avoidance(states[a], obstacles, cfg.destination,
                                               cfg.avoid_distance, cfg.dt);
            any_avoid = any_avoid || avoid[a];
        }

        std::vector<std::vector<Vec2>> sampled_paths(n);
        std::optional<Vec2> leader_pos;

        // straight segment toward the destination, shared by the cruise branch
        // and by unthreatened members during an avoidance tick
        auto advance_straight = [&](std::size_t a) {
            UavState& u = states[a];
            const double step_radius = u.speed * cfg.dt;
            const Vec2 d = cfg.destination - u.position;
            const double dist = d.norm();
            Vec2 target = u.position;
            if (dist > 1e-9 && step_radius > 1e-9) {
                target = u.position + d * (std::min(step_radius, dist) / dist);
            }
            const Vec2 seg = target - u.position;
            const double seg_len = seg.norm();
            double new_heading = u.heading;
            if (seg_len > 1e-9) new_heading = std::atan2(seg.y, seg.x);

            StepEnergy se{};
            if (seg_len > 1e-9) {
                EnergyParams ep = cfg.energy;
                ep.speed = u.speed;
                // straight-flight segments spend no turning energy
                se.e_const = const_energy_per_meter(ep) * seg_len;
                se.total = se.e_const;
            }
            for (int k = 0; k <= cfg.n_arc_samples; ++k) {
                sampled_paths[a].push_back(
                    u.position + seg * (static_cast<double>(k) / cfg.n_arc_samples));
            }
            u.position = target;
            u.heading = new_heading;
            m.energy_per_uav[a] += se.total;
            m.path_length_per_uav[a] += seg_len;

            StepTrace t;
            t.step = step;
            t.time = time + cfg.dt;
            t.uav_id = u.id;
            t.position = u.position;
            t.heading = u.heading;
            t.omega = new_heading;
            t.kappa = 0.0;
            t.energy_j = se.total;
            rec.traces.push_back(t);
        };

        if (planner == PlannerKind::e2coop && any_avoid) {
            const EnvironmentField field =
                detail::build_field(states, obstacles, cfg.destination, cfg.dt);
            leader_pos = field.swarm.virtual_leader;
            rec.last_field = field;

            // cooperative intensity shifts when members conflict
            std::vector<double> shifts(n, 0.0);
            bool conflict = false;
            for (std::size_t a = 0; a < n && !conflict; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    if (distance(states[a].position, states[b].position) < cfg.safeguard_v2v) {
                        conflict = true;
                        break;
                    }
                }
            }
            if (conflict) {
                AdjustPlanParams ap;
                ap.lambda1 = cfg.lambda1;
                ap.lambda2 = cfg.lambda2;
                ap.delta_omega_max = cfg.delta_omega_max();
                ap.kappa_max = cfg.kappa_max();
                ap.n_samples = cfg.n_arc_samples;
                ap.grad_step = cfg.grad_step;
                ap.step_length = 1.0;  // overwritten per UAV below via plan_step
                PsoConfig acfg = cfg.pso;
                acfg.rng_seed = detail::mix_seed(cfg.rng_seed, step, -1);
                // use mean step length for the predictive replans
                double mean_v = swarm_speed(states);
                ap.step_length = std::max(mean_v * cfg.dt, 1e-3);
                const AdjustmentOutcome adj =
                    adjust_swarm(states, field, obstacles, cfg.safeguard_v2v,
                                 cfg.adjust_max_rounds, ap, acfg);
                shifts = adj.shifts;
                if (!adj.resolved) ++m.unresolved_adjustments;
            }

            for (std::size_t a = 0; a < n; ++a) {
                if (!avoid[a]) {
                    advance_straight(a);
                    continue;
                }
                UavState& u = states[a];
                PlanRequest req;
                req.uav = u;
                req.field = &field;
                req.threshold_shift = shifts[a];
                req.step_length = std::max(u.speed * cfg.dt, 1e-3);
                req.lambda1 = cfg.lambda1;
                req.lambda2 = cfg.lambda2;
                req.delta_omega_max = cfg.delta_omega_max();
                req.kappa_max = cfg.kappa_max();
                req.n_samples = cfg.n_arc_samples;
                req.grad_step = cfg.grad_step;
                PsoConfig pcfg = cfg.pso;
                pcfg.rng_seed = detail::mix_seed(cfg.rng_seed, step, u.id);
                PlannedStep plan = plan_step(req, pcfg);
                const double incumbent_fitness = plan.fitness;

                // A contour around a closing obstacle offers two near-equal
                // directions; the one that cuts across the obstacle's track
                // just ahead of it loses real clearance for no fitness gain.
                // Fly the mirror-image arc and stay on this side instead.
                if (detail::drifts_into_approach(u, arc_end_pose(plan.arc).position,
                                                 obstacles, cfg.avoid_distance, cfg.dt)) {
                    const double omega_m = normalize_angle(2.0 * u.heading - plan.arc.omega);
                    const double kappa_m = -plan.arc.kappa;
                    const FitnessBreakdown fb = step_fitness(req, omega_m, kappa_m);
                    plan.arc = make_candidate_arc(u, omega_m, kappa_m, req.step_length);
                    plan.fitness = fb.fitness;
                    plan.f_e = fb.f_e;
                    plan.f_s = fb.f_s;
                }

                if (instance_log != nullptr) {
                    PlanInstance inst;
                    inst.field = field;
                    inst.request = req;
                    // the side-arbitration override may discard the optimum;
                    // the optimizer is judged on what it found
                    inst.pso_fitness = incumbent_fitness;
                    instance_log->push_back(std::move(inst));
                }

                EnergyParams ep = cfg.energy;
                ep.speed = u.speed;
                const StepEnergy se = step_energy(ep, plan.arc);

                const ArcSamples samples = sample_arc(plan.arc, cfg.n_arc_samples);
                sampled_paths[a] = samples.points;

                const Pose end = arc_end_pose(plan.arc);
                u.position = end.position;
                u.heading = end.heading;

                m.energy_per_uav[a] += se.total;
                m.path_length_per_uav[a] += plan.arc.length;

                StepTrace t;
                t.step = step;
                t.time = time + cfg.dt;
                t.uav_id = u.id;
                t.position = u.position;
                t.heading = u.heading;
                t.omega = plan.arc.omega;
                t.kappa = plan.arc.kappa;
                t.phi = field_at(field, req.uav.position);
                t.fitness = plan.fitness;
                t.f_e = plan.f_e;
                t.f_s = plan.f_s;
                t.shift = shifts[a];
                t.energy_j = se.total;
                rec.traces.push_back(t);
            }
        } else {
            // straight flight toward the destination (or baseline waypoints)
            std::vector<Obstacle> visible;
            for (const auto& o : obstacles) {
                for (const auto& u : states) {
                    if (distance(u.position, o.position) <= cfg.detection_range) {
                        visible.push_back(o);
                        break;
                    }
                }
            }
            std::vector<ObstacleFieldParams> visible_fields;
            if (planner == PlannerKind::ppso) {
                const double v_s = swarm_speed(states);
                for (const auto& o : visible) {
                    // this planner carries its own point-source repulsive
                    // field; the wide plateau belongs to the contour planner
                    Obstacle point = o;
                    point.forbidden_radius = 1.0;
                    point.influence_radius = cfg.detection_range;
                    visible_fields.push_back(make_obstacle_field(point, v_s));
                }
            }
            const std::vector<UavState> prev = states;
            for (std::size_t a = 0; a < n; ++a) {
                UavState& u = states[a];
                const double step_radius = u.speed * cfg.dt;
                Vec2 target;
                double heading_change = 0.0;
                double seg_len = 0.0;

                if (planner == PlannerKind::e2coop || step_radius < 1e-9) {
                    advance_straight(a);
                    continue;
                } else if (planner == PlannerKind::ffpso) {
                    FfpsoConfig fc = ffpso;
                    fc.base.rng_seed = detail::mix_seed(cfg.rng_seed, step, u.id);
                    target = ffpso_plan_step(u, visible, prev, cfg.destination, step_radius, fc);
                } else {
                    PpsoConfig pc = ppso;
                    pc.base.rng_seed = detail::mix_seed(cfg.rng_seed, step, u.id);
                    target = ppso_plan_step(u, visible_fields, cfg.destination, step_radius, pc);
                }

                const Vec2 d = target - u.position;
                seg_len = d.norm();
                double new_heading = u.heading;
                if (seg_len > 1e-9) {
                    new_heading = std::atan2(d.y, d.x);
                    heading_change = normalize_angle(new_heading - u.heading);
                }

                StepEnergy se{};
                if (seg_len > 1e-9) {
                    EnergyParams ep = cfg.energy;
                    ep.speed = u.speed;
                    se = step_energy_heading(ep, heading_change, seg_len);
                }

                // sample the straight segment for clearance tracking
                for (int k = 0; k <= cfg.n_arc_samples; ++k) {
                    sampled_paths[a].push_back(
                        u.position + d * (static_cast<double>(k) / cfg.n_arc_samples));
                }

                u.position = target;
                u.heading = new_heading;
                m.energy_per_uav[a] += se.total;
                m.path_length_per_uav[a] += seg_len;

                StepTrace t;
                t.step = step;
                t.time = time + cfg.dt;
                t.uav_id = u.id;
                t.position = u.position;
                t.heading = u.heading;
                t.omega = new_heading;
                t.kappa = 0.0;
                t.energy_j = se.total;
                rec.traces.push_back(t);
            }
        }

        detail::track_clearances(m, sampled_paths, obstacles);

        time += cfg.dt;
        rec.snapshots.push_back(SwarmSnapshot{states, time});
        rec.leader_per_step.push_back(leader_pos);
        for (std::size_t j = 0; j < obstacles.size(); ++j) {
            rec.obstacle_traces.push_back(
                {step, time, static_cast<int>(j), obstacles[j].position, obstacles[j].velocity});
        }
        m.steps_run = step;

        Vec2 centroid;
        for (const auto& u : states) centroid = centroid + u.position;
        centroid = centroid * (1.0 / static_cast<double>(n));
        if (distance(centroid, cfg.destination) <= cfg.formation_radius) {
            m.reached_destination = true;
            break;
        }
    }

    for (double e : m.energy_per_uav) m.total_energy += e;
    m.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---- metrics serialization ----------------------------------------------

inline nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j;
    j["energy_per_uav"] = m.energy_per_uav;
    j["total_energy"] = m.total_energy;
    j["min_obstacle_clearance"] =
        std::isfinite(m.min_obstacle_clearance) ? m.min_obstacle_clearance : -1.0;
    j["min_uav_pair_distance"] =
        std::isfinite(m.min_uav_pair_distance) ? m.min_uav_pair_distance : -1.0;
    j["path_length_per_uav"] = m.path_length_per_uav;
    j["reached_destination"] = m.reached_destination;
    j["unresolved_adjustments"] = m.unresolved_adjustments;
    j["steps_run"] = m.steps_run;
    j["wall_time"] = m.wall_time;
    return j;
}

inline Metrics metrics_from_json(const nlohmann::json& j) {
    Metrics m;
    m.energy_per_uav = j.at("energy_per_uav").get<std::vector<double>>();
    m.total_energy = j.at("total_energy").get<double>();
    const double c = j.at("min_obstacle_clearance").get<double>();
    m.min_obstacle_clearance = c < 0.0 ? std::numeric_limits<double>::infinity() : c;
    const double p = j.at("min_uav_pair_distance").get<double>();
    m.min_uav_pair_distance = p < 0.0 ? std::numeric_limits<double>::infinity() : p;
    m.path_length_per_uav = j.at("path_length_per_uav").get<std::vector<double>>();
    m.reached_destination = j.at("reached_destination").get<bool>();
    m.unresolved_adjustments = j.at("unresolved_adjustments").get<int>();
    m.steps_run = j.at("steps_run").get<int>();
    m.wall_time = j.at("wall_time").get<double>();
    return m;
}

// ---- export --------------------------------------------------------------

namespace detail {
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

inline void export_run(const RunRecord& rec, const Metrics& metrics, const ScenarioConfig& cfg,
                       PlannerKind planner, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("export_run: cannot create " + dir.string());

    {
        std::ofstream os(dir / "trajectories.csv");
        if (!os) throw std::runtime_error("export_run: cannot write trajectories.csv");
        os << "step,time_s,uav_id,x_m,y_m,heading_rad,omega,kappa,phi,f_e,f_s,step_energy_j\n";
        for (const auto& t : rec.traces) {
            os << t.step << ',' << detail::fmt(t.time) << ',' << t.uav_id << ','
               << detail::fmt(t.position.x) << ',' << detail::fmt(t.position.y) << ','
               << detail::fmt(t.heading) << ',' << detail::fmt(t.omega) << ','
               << detail::fmt(t.kappa) << ',' << detail::fmt(t.phi) << ','
               << detail::fmt(t.f_e) << ',' << detail::fmt(t.f_s) << ','
               << detail::fmt(t.energy_j) << '\n';
        }
    }
    {
        std::ofstream os(dir / "obstacles.csv");
        if (!os) throw std::runtime_error("export_run: cannot write obstacles.csv");
        os << "step,time_s,obstacle_id,x_m,y_m,vx_mps,vy_mps\n";
        for (const auto& t : rec.obstacle_traces) {
            os << t.step << ',' << detail::fmt(t.time) << ',' << t.obstacle_id << ','
               << detail::fmt(t.position.x) << ',' << detail::fmt(t.position.y) << ','
               << detail::fmt(t.velocity.x) << ',' << detail::fmt(t.velocity.y) << '\n';
        }
    }
    {
        std::ofstream os(dir / "metrics.json");
        if (!os) throw std::runtime_error("export_run: cannot write metrics.json");
        os << metrics_to_json(metrics).dump(2) << '\n';
    }
    {
        nlohmann::json meta;
        meta["config"] = to_json(cfg);
        meta["planner"] = planner_name(planner);
        meta["seed"] = cfg.rng_seed;
        meta["version"] = "1.0.0";
        if (rec.last_field.has_value()) {
            const auto& f = *rec.last_field;
            nlohmann::json jf;
            jf["swarm"] = {{"virtual_leader", to_json(f.swarm.virtual_leader)},
                           {"swarm_speed", f.swarm.swarm_speed},
                           {"influence_radius", f.swarm.influence_radius},
                           {"advance_offset", f.swarm.advance_offset},
                           {"destination_dir", to_json(f.swarm.destination_dir)}};
            jf["obstacles"] = nlohmann::json::array();
            for (const auto& o : f.obstacles) {
                jf["obstacles"].push_back({{"center", to_json(o.center)},
                                           {"obstacle_speed", o.obstacle_speed},
                                           {"plateau_radius", o.plateau_radius},
                                           {"influence_radius", o.influence_radius},
                                           {"effective_speed", o.effective_speed}});
            }
            meta["last_field"] = jf;
        }
        std::ofstream os(dir / "run_meta.json");
        if (!os) throw std::runtime_error("export_run: cannot write run_meta.json");
        os << meta.dump(2) << '\n';
    }
}

// ---- parameter sweep -----------------------------------------------------

struct SweepRow {
    std::string axis;
    double value{0.0};
    std::string planner;
    int repeat{0};
    Metrics metrics;
};

inline void apply_axis(PresetSpec& spec, const std::string& axis, double value) {
    if (axis == "v_obs") {
        spec.v_obs = value;
    } else if (axis == "D_obs" || axis == "d_obs") {
        spec.d_obs = value;
    } else if (axis == "D_v2v" || axis == "d_v2v") {
        spec.d_v2v = value;
    } else if (axis == "lambda1") {
        spec.lambda1 = value;
    } else if (axis == "N" || axis == "n") {
        spec.n = static_cast<int>(value);
    } else {
        throw std::invalid_argument("sweep: unknown axis " + axis);
    }
}

inline std::vector<SweepRow> sweep(const PresetSpec& base, const std::string& axis,
                                   const std::vector<double>& values,
                                   const std::vector<PlannerKind>& planners, int repeats) {
    if (repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
    std::vector<SweepRow> rows;
    for (double value : values) {
        for (PlannerKind planner : planners) {
            for (int r = 0; r < repeats; ++r) {
                PresetSpec spec = base;
                apply_axis(spec, axis, value);
                spec.seed = base.seed + static_cast<std::uint64_t>(r);
                ScenarioConfig cfg = make_scenario(spec);
                SweepRow row;
                row.axis = axis;
                row.value = value;
                row.planner = planner_name(planner);
                row.repeat = r;
                try {
                    row.metrics = run_scenario(cfg, planner).metrics;
                } catch (const std::exception&) {
                    row.metrics = Metrics{};  // failure flag: reached_destination false
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

inline void sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "axis,value,planner,repeat,total_energy_j,min_obstacle_clearance_m,"
          "min_uav_pair_distance_m,reached_destination,unresolved_adjustments,steps_run\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        os << r.axis << ',' << detail::fmt(r.value) << ',' << r.planner << ',' << r.repeat << ','
           << detail::fmt(m.total_energy) << ','
           << detail::fmt(std::isfinite(m.min_obstacle_clearance) ? m.min_obstacle_clearance : -1.0)
           << ','
           << detail::fmt(std::isfinite(m.min_uav_pair_distance) ? m.min_uav_pair_distance : -1.0)
           << ',' << (m.reached_destination ? 1 : 0) << ',' << m.unresolved_adjustments << ','
           << m.steps_run << '\n';
    }
}

}  // namespace e2coop
