#pragma once

// Two-parameter constant-curvature arc: one planning-step trajectory candidate.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "e2coop/core.hpp"

namespace e2coop {

// Below this |kappa| the arc degenerates to a straight line.
constexpr double kKappaEps = 1e-9;

struct Pose {
    Vec2 position;
    double heading{0.0};  // radians in (-pi, pi]
};

/// Constant-curvature arc anchored at a start pose. omega is the tangent
/// slope at arc-length 0 (world X-axis reference); kappa is signed
/// curvature, positive = counterclockwise (left) turn.
struct Arc {
    Pose start;
    double omega{0.0};   // radians
    double kappa{0.0};   // 1/m, signed
    double length{0.0};  // m, > 0
};

struct ArcSamples {
    std::vector<Vec2> points;  // n_s + 1 points, both endpoints included
    double spacing{0.0};       // ds, m
};

/// Point at arc-length s from the start.
inline Vec2 arc_point(const Arc& arc, double s) {
    if (s < 0.0 || s > arc.length * (1.0 + 1e-12)) {
        throw std::out_of_range("arc_point: s outside [0, length]");
    }
    const double w = arc.omega;
    if (std::fabs(arc.kappa) >= kKappaEps) {
        const double inv_k = 1.0 / arc.kappa;
        const Vec2 center = arc.start.position + Vec2{-std::sin(w), std::cos(w)} * inv_k;
        const double a = w + arc.kappa * s;
        return center + Vec2{std::sin(a), -std::cos(a)} * inv_k;
    }
    return arc.start.position + Vec2{std::cos(w), std::sin(w)} * s;
}

inline Pose arc_end_pose(const Arc& arc) {
    Pose p;
    p.position = arc_point(arc, arc.length);
    p.heading = normalize_angle(arc.omega + arc.kappa * arc.length);
    return p;
}

inline ArcSamples sample_arc(const Arc& arc, int n_s) {
    if (n_s < 1) {
        throw std::invalid_argument("sample_arc: n_s must be >= 1");
    }
    ArcSamples out;
    out.spacing = arc.length / n_s;
    out.points.reserve(static_cast<std::size_t>(n_s) + 1);
    for (int k = 0; k <= n_s; ++k) {
        out.points.push_back(arc_point(arc, arc.length * k / n_s));
    }
    return out;
}

/// Total unsigned heading change along the arc, |kappa| * L.
inline double curvature_integral(const Arc& arc) {
    return std::fabs(arc.kappa) * arc.length;
}

}  // namespace e2coop
