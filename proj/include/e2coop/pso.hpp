#pragma once

// Bounded 2-D particle swarm optimizer. Acceleration coefficients are drawn
// uniformly from [0,1] per particle per iteration; inertia is fixed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace e2coop {

using Vec2d = std::array<double, 2>;

struct PsoConfig {
    int n_particles{30};
    int n_iters{60};
    double inertia{0.72};  // mu0
    Vec2d lo{-1.0, -1.0};
    Vec2d hi{1.0, 1.0};
    double v_clamp_frac{0.2};
    std::uint64_t rng_seed{0};
};

struct PsoResult {
    Vec2d best_position{0.0, 0.0};
    double best_fitness{0.0};
    int iterations_run{0};
    std::vector<double> history;  // incumbent fitness after each iteration
};

// Optional extra velocity term evaluated at the particle position
// (used by the repulsion-augmented baseline planner).
using VelocityBias = std::function<Vec2d(const Vec2d&)>;

namespace detail {
inline double checked_eval(const std::function<double(const Vec2d&)>& f, const Vec2d& p) {
    const double v = f(p);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "pso: non-finite fitness at (" << p[0] << ", " << p[1] << ")";
        throw std::runtime_error(os.str());
    }
    return v;
}
}  // namespace detail

inline void validate_pso_config(const PsoConfig& cfg) {
    if (cfg.n_particles < 2) throw std::invalid_argument("pso: n_particles must be >= 2");
    if (cfg.n_iters < 1) throw std::invalid_argument("pso: n_iters must be >= 1");
    if (cfg.v_clamp_frac <= 0.0 || cfg.v_clamp_frac > 1.0) {
        throw std::invalid_argument("pso: v_clamp_frac must be in (0, 1]");
    }
    for (int d = 0; d < 2; ++d) {
        if (!(cfg.lo[d] < cfg.hi[d])) {
            throw std::invalid_argument("pso: bounds must satisfy lo < hi per dimension");
        }
    }
}

inline PsoResult pso_minimize(const PsoConfig& cfg,
                              const std::function<double(const Vec2d&)>& fitness,
                              const VelocityBias& bias = {},
                              const std::vector<Vec2d>& warm_starts = {}) {
    validate_pso_config(cfg);
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n = cfg.n_particles;
    std::vector<Vec2d> pos(n), vel(n, Vec2d{0.0, 0.0}), pbest(n);
    std::vector<double> pbest_fit(n);

    Vec2d range;
    for (int d = 0; d < 2; ++d) range[d] = cfg.hi[d] - cfg.lo[d];

    PsoResult res;
    res.best_fitness = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n; ++i) {
        if (i < static_cast<int>(warm_starts.size())) {
            for (int d = 0; d < 2; ++d) {
                pos[i][d] = std::min(std::max(warm_starts[i][d], cfg.lo[d]), cfg.hi[d]);
            }
        } else {
            for (int d = 0; d < 2; ++d) pos[i][d] = cfg.lo[d] + range[d] * unit(rng);
        }
        pbest[i] = pos[i];
        pbest_fit[i] = detail::checked_eval(fitness, pos[i]);
        if (pbest_fit[i] < res.best_fitness) {
            res.best_fitness = pbest_fit[i];
            res.best_position = pos[i];
        }
    }
    res.history.push_back(res.best_fitness);

    for (int it = 0; it < cfg.n_iters; ++it) {
        for (int i = 0; i < n; ++i) {
            const double mu1 = unit(rng);
            const double mu2 = unit(rng);
            Vec2d extra{0.0, 0.0};
            if (bias) extra = bias(pos[i]);
            for (int d = 0; d < 2; ++d) {
                double v = cfg.inertia * vel[i][d] + mu1 * (pbest[i][d] - pos[i][d]) +
                           mu2 * (res.best_position[d] - pos[i][d]) + extra[d];
                const double vmax = cfg.v_clamp_frac * range[d];
                if (v > vmax) v = vmax;
                if (v < -vmax) v = -vmax;
                double x = pos[i][d] + v;
                if (x < cfg.lo[d]) {
                    x = cfg.lo[d];
                    v = 0.0;
                } else if (x > cfg.hi[d]) {
                    x = cfg.hi[d];
                    v = 0.0;
                }
                vel[i][d] = v;
                pos[i][d] = x;
            }
            const double f = detail::checked_eval(fitness, pos[i]);
            if (f < pbest_fit[i]) {
                pbest_fit[i] = f;
                pbest[i] = pos[i];
            }
            if (f < res.best_fitness) {
                res.best_fitness = f;
                res.best_position = pos[i];
            }
        }
        res.history.push_back(res.best_fitness);
    }
    res.iterations_run = cfg.n_iters;
    return res;
}

/// Exhaustive regular-grid argmin; ties keep the lowest index order.
inline std::pair<Vec2d, double> grid_search_oracle(const Vec2d& lo, const Vec2d& hi,
                                                   int resolution,
                                                   const std::function<double(const Vec2d&)>& fitness) {
    if (resolution < 2) {
        throw std::invalid_argument("grid_search_oracle: resolution must be >= 2");
    }
    Vec2d best{lo[0], lo[1]};
    double best_fit = std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < resolution; ++iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            const Vec2d p{lo[0] + (hi[0] - lo[0]) * ix / (resolution - 1),
                          lo[1] + (hi[1] - lo[1]) * iy / (resolution - 1)};
            const double f = detail::checked_eval(fitness, p);
            if (f < best_fit) {
                best_fit = f;
                best = p;
            }
        }
    }
    return {best, best_fit};
}

}  // namespace e2coop
