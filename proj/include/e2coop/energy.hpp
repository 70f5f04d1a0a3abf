#pragma once

// Quadrotor energy accounting: drag, thrust projection, power, and the
// per-step decomposition E = E_n + E_const used by the planner fitness.

#include <cmath>
#include <stdexcept>

#include "e2coop/arc.hpp"

namespace e2coop {

struct EnergyParams {
    double mass{2.0};              // kg
    double gravity{9.81};          // m/s^2
    double air_density{1.225};     // kg/m^3
    double drag_coeff{1.0};        // unitless
    double ref_area{0.2};          // m^2
    double pitch{0.1};             // alpha, radians
    double roll{0.2};              // beta, radians
    double induced_velocity{5.0};  // v_i, m/s
    double speed{10.0};            // v, m/s
};

struct StepEnergy {
    double e_turn{0.0};   // E_n, joules
    double e_const{0.0};  // joules
    double total{0.0};    // e_turn + e_const
};

inline double drag_force(const EnergyParams& p, double v_a) {
    if (v_a < 0.0) {
        throw std::invalid_argument("drag_force: airspeed must be >= 0");
    }
    return 0.5 * p.air_density * v_a * v_a * p.drag_coeff * p.ref_area;
}

/// Body-frame projection sum of drag, weight and centripetal components.
inline double thrust_magnitude(const EnergyParams& p, double f_n) {
    if (f_n < 0.0) {
        throw std::invalid_argument("thrust_magnitude: centripetal force must be >= 0");
    }
    const double f_drag = drag_force(p, p.speed);
    return f_drag * std::sin(p.pitch) * std::cos(p.roll) +
           p.mass * p.gravity * std::cos(p.pitch) * std::cos(p.roll) +
           f_n * std::sin(p.roll);
}

inline double min_power(const EnergyParams& p, double thrust) {
    if (thrust < 0.0) {
        throw std::invalid_argument("min_power: thrust must be >= 0");
    }
    return thrust * (p.speed * std::sin(p.pitch) + p.induced_velocity);
}

/// e_v = m v^2 (v sin(alpha) + v_i) sin(beta); multiplies the curvature
/// integral to give turning energy.
inline double velocity_coefficient(const EnergyParams& p) {
    if (std::sin(p.roll) <= 0.0) {
        throw std::domain_error("velocity_coefficient: roll angle must satisfy sin(beta) > 0");
    }
    return p.mass * p.speed * p.speed *
           (p.speed * std::sin(p.pitch) + p.induced_velocity) * std::sin(p.roll);
}

/// Curvature-independent energy per unit length.
inline double const_energy_per_meter(const EnergyParams& p) {
    const double f_drag = drag_force(p, p.speed);
    return (f_drag * std::sin(p.pitch) * std::cos(p.roll) +
            p.mass * p.gravity * std::cos(p.pitch) * std::cos(p.roll)) *
           (p.speed * std::sin(p.pitch) + p.induced_velocity);
}

inline StepEnergy step_energy(const EnergyParams& p, const Arc& arc) {
    StepEnergy e;
    e.e_turn = velocity_coefficient(p) * curvature_integral(arc);
    e.e_const = const_energy_per_meter(p) * arc.length;
    e.total = e.e_turn + e.e_const;
    return e;
}

/// Turning-heading-change variant for waypoint planners: heading change
/// stands in for the curvature integral of the step.
inline StepEnergy step_energy_heading(const EnergyParams& p, double heading_change,
                                      double seg_length) {
    StepEnergy e;
    e.e_turn = velocity_coefficient(p) * std::fabs(heading_change);
    e.e_const = const_energy_per_meter(p) * seg_length;
    e.total = e.e_turn + e.e_const;
    return e;
}

/// Normalized energy fitness term, |kappa| / kappa_max in [0, 1].
inline double fitness_energy_term(const Arc& arc, double kappa_max) {
    if (kappa_max <= 0.0) {
        throw std::invalid_argument("fitness_energy_term: kappa_max must be > 0");
    }
    return std::fabs(arc.kappa) / kappa_max;
}

}  // namespace e2coop
