#pragma once

// Per-step fitness assembly (weighted energy + contour-edge terms), PSO
// search over (omega, kappa), and the cooperative intensity-shift protocol
// that separates conflicting swarm members onto different contours.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "e2coop/arc.hpp"
#include "e2coop/energy.hpp"
#include "e2coop/field.hpp"
#include "e2coop/pso.hpp"

namespace e2coop {

// Equality tolerance for the "same distance to obstacle" sign rule.
constexpr double kEpsDistance = 0.01;
// Intensity floor below which a UAV has no contour to adjust onto.
constexpr double kEpsIntensity = 1e-9;

struct PlanRequest {
    UavState uav;
    const EnvironmentField* field{nullptr};
    double threshold_shift{0.0};  // delta-Phi_i, 0 when unadjusted
    double step_length{0.0};      // L = v * dt, m
    double lambda1{0.5};
    double lambda2{0.5};
    double delta_omega_max{0.0};  // omega in [heading -/+ this]
    double kappa_max{0.5};        // 1/m
    int n_samples{8};
    double grad_step{0.5};        // h, m
};

struct PlannedStep {
    Arc arc;
    double fitness{0.0};
    double f_e{0.0};
    double f_s{0.0};
};

struct AdjustmentOutcome {
    std::vector<double> shifts;  // per-UAV cumulative delta-Phi
    int rounds_used{0};
    bool resolved{false};
};

/// Length-normalized negative mean edge response along the samples, in [-1, 0].
inline double safety_term(const BinaryFieldView& view, const ArcSamples& samples, double h) {
    if (samples.points.empty()) {
        throw std::invalid_argument("safety_term: empty sample list");
    }
    double sum = 0.0;
    for (const auto& q : samples.points) sum += binary_gradient_mag(view, q, h);
    return -sum / static_cast<double>(samples.points.size());
}

inline Arc make_candidate_arc(const UavState& uav, double omega, double kappa,
                              double step_length) {
    Arc arc;
    arc.start.position = uav.position;
    arc.start.heading = uav.heading;
    arc.omega = omega;
    arc.kappa = kappa;
    arc.length = step_length;
    return arc;
}

struct FitnessBreakdown {
    double fitness{0.0};
    double f_e{0.0};
    double f_s{0.0};
};

inline FitnessBreakdown step_fitness(const PlanRequest& req, double omega, double kappa) {
    FitnessBreakdown out;
    const Arc arc = make_candidate_arc(req.uav, omega, kappa, req.step_length);
    out.f_e = std::fabs(kappa) / req.kappa_max;
    const double threshold = field_at(*req.field, req.uav.position) + req.threshold_shift;
    const BinaryFieldView view{req.field, threshold};
    out.f_s = safety_term(view, sample_arc(arc, req.n_samples), req.grad_step);
    out.fitness = req.lambda1 * out.f_e + req.lambda2 * out.f_s;
    return out;
}

inline PsoConfig plan_search_config(const PlanRequest& req, const PsoConfig& base) {
    PsoConfig cfg = base;
    cfg.lo = {req.uav.heading - req.delta_omega_max, -req.kappa_max};
    cfg.hi = {req.uav.heading + req.delta_omega_max, req.kappa_max};
    return cfg;
}

inline PlannedStep plan_step(const PlanRequest& req, const PsoConfig& pso_cfg) {
    if (req.field == nullptr) {
        throw std::invalid_argument("plan_step: missing environment field");
    }
    const PsoConfig cfg = plan_search_config(req, pso_cfg);

    // Warm starts: the two contour tangents at the current position, then
    // straight ahead. The edge-riding optimum is a thin basin along the
    // tangent that uniform initialization rarely samples; listing the
    // tangents first also settles fitness ties in favor of holding the
    // contour rather than running up the ramp.
    std::vector<Vec2d> warm;
    {
        const double h = req.grad_step;
        const Vec2& p = req.uav.position;
        const double gx = (field_at(*req.field, {p.x + h, p.y}) -
                           field_at(*req.field, {p.x - h, p.y})) / (2.0 * h);
        const double gy = (field_at(*req.field, {p.x, p.y + h}) -
                           field_at(*req.field, {p.x, p.y - h})) / (2.0 * h);
        if (std::hypot(gx, gy) > 1e-12) {
            for (const double tangent : {std::atan2(gx, -gy), std::atan2(-gx, gy)}) {
                warm.push_back(
                    {req.uav.heading + normalize_angle(tangent - req.uav.heading), 0.0});
            }
        }
    }
    warm.push_back({req.uav.heading, 0.0});

    const PsoResult res = pso_minimize(
        cfg, [&req](const Vec2d& p) { return step_fitness(req, p[0], p[1]).fitness; }, {},
        warm);
    PlannedStep step;
    const FitnessBreakdown fb = step_fitness(req, res.best_position[0], res.best_position[1]);
    step.arc = make_candidate_arc(req.uav, res.best_position[0], res.best_position[1],
                                  req.step_length);
    step.fitness = fb.fitness;
    step.f_e = fb.f_e;
    step.f_s = fb.f_s;
    return step;
}

inline double nearest_obstacle_distance(const Vec2& p, const std::vector<Obstacle>& obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : obstacles) best = std::min(best, distance(p, o.position));
    return best;
}

/// Intensity shift the j-th UAV requests of the i-th. Negative moves i away
/// from the obstacle (onto a lower-intensity contour), positive toward it.
inline double pairwise_shift(const UavState& i, const UavState& j, const EnvironmentField& field,
                             const std::vector<Obstacle>& obstacles, double d_v2v) {
    const double phi_i = field_at(field, i.position);
    if (phi_i < kEpsIntensity) {
        throw std::domain_error("pairwise_shift: UAV outside all field influence ranges");
    }
    const double d_ij = distance(i.position, j.position);
    const double magnitude = std::fabs((d_v2v - d_ij) / phi_i);

    const double di = nearest_obstacle_distance(i.position, obstacles);
    const double dj = nearest_obstacle_distance(j.position, obstacles);
    bool i_moves_away;
    if (di > dj + kEpsDistance) {
        i_moves_away = true;
    } else if (dj > di + kEpsDistance) {
        i_moves_away = false;
    } else if (std::fabs(i.speed - j.speed) > 1e-9) {
        i_moves_away = i.speed > j.speed;
    } else {
        i_moves_away = i.id > j.id;
    }
    return i_moves_away ? -magnitude : magnitude;
}

struct AdjustPlanParams {
    double step_length{0.0};
    double lambda1{0.5};
    double lambda2{0.5};
    double delta_omega_max{0.0};
    double kappa_max{0.5};
    int n_samples{8};
    double grad_step{0.5};
};

/// Iteratively shifts conflicting UAVs' planning thresholds until the
/// predicted one-step separations reach d_v2v or the round budget runs out.
inline AdjustmentOutcome adjust_swarm(const std::vector<UavState>& states,
                                      const EnvironmentField& field,
                                      const std::vector<Obstacle>& obstacles, double d_v2v,
                                      int max_rounds, const AdjustPlanParams& params,
                                      const PsoConfig& pso_cfg) {
    if (max_rounds < 1) {
        throw std::invalid_argument("adjust_swarm: max_rounds must be >= 1");
    }
    const std::size_t n = states.size();
    AdjustmentOutcome out;
    out.shifts.assign(n, 0.0);

    std::vector<UavState> predicted = states;
    for (int round = 0;; ++round) {
        bool conflict = false;
        for (std::size_t a = 0; a < n && !conflict; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (distance(predicted[a].position, predicted[b].position) < d_v2v) {
                    conflict = true;
                    break;
                }
            }
        }
        if (!conflict) {
            out.rounds_used = round;
            out.resolved = true;
            return out;
        }
        if (round >= max_rounds) {
            out.rounds_used = max_rounds;
            out.resolved = false;
            return out;
        }

        for (std::size_t a = 0; a < n; ++a) {
            if (field_at(field, predicted[a].position) < kEpsIntensity) continue;
            double net = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                if (b == a) continue;
                if (distance(predicted[a].position, predicted[b].position) >= d_v2v) continue;
                net += pairwise_shift(predicted[a], predicted[b], field, obstacles, d_v2v);
            }
            out.shifts[a] += net;
        }

        for (std::size_t a = 0; a < n; ++a) {
            PlanRequest req;
            req.uav = states[a];
            req.field = &field;
            req.threshold_shift = out.shifts[a];
            req.step_length = params.step_length;
            req.lambda1 = params.lambda1;
            req.lambda2 = params.lambda2;
            req.delta_omega_max = params.delta_omega_max;
            req.kappa_max = params.kappa_max;
            req.n_samples = params.n_samples;
            req.grad_step = params.grad_step;
            PsoConfig cfg = pso_cfg;
            cfg.rng_seed = pso_cfg.rng_seed + 7919u * static_cast<std::uint64_t>(round + 1) +
                           static_cast<std::uint64_t>(states[a].id);
            const PlannedStep step = plan_step(req, cfg);
            const Pose end = arc_end_pose(step.arc);
            predicted[a].position = end.position;
            predicted[a].heading = end.heading;
        }
    }
}

}  // namespace e2coop
