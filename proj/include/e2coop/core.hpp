#pragma once

// Shared domain vocabulary: 2-D vectors, UAV/obstacle state, swarm formation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace e2coop {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }

    Vec2 normalized() const {
        const double n = norm();
        if (n < 1e-12) {
            throw std::invalid_argument("Vec2::normalized: zero-length vector");
        }
        return {x / n, y / n};
    }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Normalize an angle to (-pi, pi].
inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) {
        a += 2.0 * kPi;
    } else if (a > kPi) {
        a -= 2.0 * kPi;
    }
    return a;
}

struct UavState {
    int id{0};
    Vec2 position;
    double speed{0.0};    // m/s, >= 0
    double heading{0.0};  // radians in (-pi, pi]
};

struct Obstacle {
    Vec2 position;
    Vec2 velocity;                  // Cartesian, m/s
    double forbidden_radius{5.0};   // D_obs, m
    double influence_radius{30.0};  // R_o, m; strictly > forbidden_radius
};

struct SwarmSnapshot {
    std::vector<UavState> states;
    double time{0.0};
};

/// Places n UAVs equally spaced on a circle, ids 0..n-1, speed 0.
/// phase rotates the whole ring; the first member sits at angle `phase`.
inline std::vector<UavState> build_circle_formation(int n, const Vec2& center,
                                                    double radius, double heading,
                                                    double phase = 0.0) {
    if (n < 1) {
        throw std::invalid_argument("build_circle_formation: n must be >= 1");
    }
    if (radius < 0.0) {
        throw std::invalid_argument("build_circle_formation: radius must be >= 0");
    }
    std::vector<UavState> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * kPi * k / n + phase;
        UavState s;
        s.id = k;
        s.position = center + Vec2{radius * std::cos(ang), radius * std::sin(ang)};
        s.speed = 0.0;
        s.heading = normalize_angle(heading);
        out.push_back(s);
    }
    return out;
}

}  // namespace e2coop
