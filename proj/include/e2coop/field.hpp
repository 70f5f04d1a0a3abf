#pragma once

// Analytic environment potential field: swarm field around a virtual leader
// plus inverse-square obstacle fields, with per-UAV binarization and sampled
// binary-gradient magnitudes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "e2coop/core.hpp"

namespace e2coop {

// Lower clamp on distances in denominators.
constexpr double kEpsRadius = 0.1;
// Floor on effective source speed; a static swarm facing a static obstacle
// would otherwise produce an identically-zero field.
constexpr double kSpeedFloor = 1.0;

struct SwarmFieldParams {
    Vec2 virtual_leader;          // p*
    double swarm_speed{0.0};      // v_s, m/s
    double influence_radius{0.0}; // R_s, m
    double advance_offset{0.0};   // S_adv, m
    Vec2 destination_dir;         // unit vector
};

struct ObstacleFieldParams {
    Vec2 center;                   // p_o
    double obstacle_speed{0.0};    // |v_o|, m/s
    double plateau_radius{0.0};    // D_s, m
    double influence_radius{0.0};  // R_o, m
    double effective_speed{0.0};   // max(v_o, v_s, floor)
};

struct EnvironmentField {
    SwarmFieldParams swarm;
    std::vector<ObstacleFieldParams> obstacles;
};

struct LeaderInfo {
    Vec2 p_star;
    Vec2 centroid;
    double s_adv{0.0};
    Vec2 direction;  // unit vector toward destination
};

/// Virtual leader: swarm centroid advanced toward the destination by s_adv
/// (defaults to the farthest member's distance from the centroid).
inline LeaderInfo virtual_leader(const std::vector<Vec2>& positions, const Vec2& destination,
                                 std::optional<double> s_adv = std::nullopt) {
    if (positions.empty()) {
        throw std::invalid_argument("virtual_leader: empty position list");
    }
    LeaderInfo info;
    Vec2 sum;
    for (const auto& p : positions) sum = sum + p;
    info.centroid = sum * (1.0 / static_cast<double>(positions.size()));
    const Vec2 d = destination - info.centroid;
    if (d.norm() < 1e-12) {
        throw std::invalid_argument("virtual_leader: destination coincides with swarm centroid");
    }
    info.direction = d.normalized();
    if (s_adv.has_value()) {
        info.s_adv = *s_adv;
    } else {
        double m = 0.0;
        for (const auto& p : positions) m = std::max(m, distance(p, info.centroid));
        info.s_adv = m;
    }
    info.p_star = info.centroid + info.direction * info.s_adv;
    return info;
}

inline double swarm_speed(const std::vector<UavState>& states) {
    if (states.empty()) {
        throw std::invalid_argument("swarm_speed: empty state list");
    }
    double s = 0.0;
    for (const auto& u : states) s += u.speed;
    return s / static_cast<double>(states.size());
}

inline ObstacleFieldParams make_obstacle_field(const Obstacle& obs, double v_s) {
    ObstacleFieldParams p;
    p.center = obs.position;
    p.obstacle_speed = obs.velocity.norm();
    p.plateau_radius = obs.forbidden_radius;
    p.influence_radius = obs.influence_radius;
    p.effective_speed = std::max({p.obstacle_speed, v_s, kSpeedFloor});
    return p;
}

inline double swarm_field_at(const SwarmFieldParams& p, const Vec2& q) {
    const double d = distance(q, p.virtual_leader);
    if (d > p.influence_radius) return 0.0;
    const double dc = std::max(d, kEpsRadius);
    return p.swarm_speed / (dc * dc);
}

inline double obstacle_field_at(const ObstacleFieldParams& p, const Vec2& q) {
    const double d = distance(q, p.center);
    if (d > p.influence_radius) return 0.0;
    if (d <= p.plateau_radius) {
        const double ds = std::max(p.plateau_radius, kEpsRadius);
        return p.effective_speed / (ds * ds);
    }
    const double dc = std::max(d, kEpsRadius);
    return p.effective_speed / (dc * dc);
}

inline double field_at(const EnvironmentField& f, const Vec2& q) {
    double v = swarm_field_at(f.swarm, q);
    for (const auto& o : f.obstacles) v += obstacle_field_at(o, q);
    return v;
}

/// Per-UAV thresholded view of the field. +1 iff intensity >= threshold.
struct BinaryFieldView {
    const EnvironmentField* base{nullptr};
    double threshold{0.0};
};

inline BinaryFieldView binarize(const EnvironmentField& field, double threshold) {
    if (!std::isfinite(threshold)) {
        throw std::invalid_argument("binarize: threshold must be finite");
    }
    return BinaryFieldView{&field, threshold};
}

inline int binary_at(const BinaryFieldView& view, const Vec2& q) {
    return field_at(*view.base, q) >= view.threshold ? 1 : -1;
}

/// Central-difference gradient magnitude of an arbitrary {+1,-1} field,
/// normalized so a clean edge crossing yields 1.0.
template <class BinaryFn>
inline double binary_gradient_mag_of(BinaryFn&& b, const Vec2& q, double h) {
    if (h <= 0.0) {
        throw std::invalid_argument("binary_gradient_mag: step h must be > 0");
    }
    const double gx = (b(Vec2{q.x + h, q.y}) - b(Vec2{q.x - h, q.y})) / (2.0 * h);
    const double gy = (b(Vec2{q.x, q.y + h}) - b(Vec2{q.x, q.y - h})) / (2.0 * h);
    return std::min(1.0, std::hypot(gx, gy) * h);
}

inline double binary_gradient_mag(const BinaryFieldView& view, const Vec2& q, double h) {
    return binary_gradient_mag_of([&view](const Vec2& p) { return binary_at(view, p); }, q, h);
}

/// Rectangular grid scan of field_at written as a CSV matrix (row = y index).
inline void field_raster_csv(const EnvironmentField& field, double x_min, double x_max,
                             double y_min, double y_max, int nx, int ny, std::ostream& os) {
    if (nx < 2 || ny < 2) {
        throw std::invalid_argument("field_raster_csv: resolution must be >= 2 per axis");
    }
    char buf[32];
    for (int iy = 0; iy < ny; ++iy) {
        const double y = y_min + (y_max - y_min) * iy / (ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            const double x = x_min + (x_max - x_min) * ix / (nx - 1);
            std::snprintf(buf, sizeof(buf), "%.17g", field_at(field, Vec2{x, y}));
            if (ix) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace e2coop
