#include <doctest.h>

#include <cmath>
#include <limits>

#include "e2coop/pso.hpp"

using namespace e2coop;

static double sphere(const Vec2d& p) { return p[0] * p[0] + p[1] * p[1]; }

TEST_CASE("pso finds the sphere minimum") {
    PsoConfig cfg;
    cfg.lo = {-1.0, -1.0};
    cfg.hi = {1.0, 1.0};
    cfg.rng_seed = 1;
    const auto res = pso_minimize(cfg, sphere);
    CHECK(res.best_fitness < 1e-4);
}

TEST_CASE("pso is deterministic under a fixed seed") {
    PsoConfig cfg;
    cfg.lo = {-2.0, -3.0};
    cfg.hi = {4.0, 5.0};
    cfg.rng_seed = 99;
    auto rosenbrock = [](const Vec2d& p) {
        const double a = 1.0 - p[0];
        const double b = p[1] - p[0] * p[0];
        return a * a + 100.0 * b * b;
    };
    const auto r1 = pso_minimize(cfg, rosenbrock);
    const auto r2 = pso_minimize(cfg, rosenbrock);
    CHECK(r1.best_fitness == r2.best_fitness);
    CHECK(r1.best_position[0] == r2.best_position[0]);
    CHECK(r1.best_position[1] == r2.best_position[1]);
    CHECK(r1.history == r2.history);
}

TEST_CASE("incumbent history is nonincreasing") {
    PsoConfig cfg;
    cfg.lo = {-5.0, -5.0};
    cfg.hi = {5.0, 5.0};
    cfg.rng_seed = 3;
    const auto res = pso_minimize(cfg, [](const Vec2d& p) {
        return std::sin(3 * p[0]) + std::cos(2 * p[1]) + 0.1 * sphere(p);
    });
    for (std::size_t i = 1; i < res.history.size(); ++i) {
        CHECK(res.history[i] <= res.history[i - 1]);
    }
    CHECK(res.iterations_run == cfg.n_iters);
}

TEST_CASE("every evaluated position respects the bounds") {
    PsoConfig cfg;
    cfg.lo = {-1.5, 2.0};
    cfg.hi = {0.5, 3.0};
    cfg.rng_seed = 17;
    bool ok = true;
    pso_minimize(cfg, [&](const Vec2d& p) {
        if (p[0] < cfg.lo[0] - 1e-12 || p[0] > cfg.hi[0] + 1e-12 || p[1] < cfg.lo[1] - 1e-12 ||
            p[1] > cfg.hi[1] + 1e-12) {
            ok = false;
        }
        return sphere(p);
    });
    CHECK(ok);
}

TEST_CASE("non-finite fitness raises with the offending point") {
    PsoConfig cfg;
    cfg.lo = {-1.0, -1.0};
    cfg.hi = {1.0, 1.0};
    CHECK_THROWS_AS(
        pso_minimize(cfg, [](const Vec2d&) { return std::numeric_limits<double>::quiet_NaN(); }),
        std::runtime_error);
}

TEST_CASE("config validation") {
    PsoConfig cfg;
    cfg.n_particles = 1;
    CHECK_THROWS_AS(pso_minimize(cfg, sphere), std::invalid_argument);
    cfg = PsoConfig{};
    cfg.lo = {1.0, 0.0};
    cfg.hi = {0.0, 1.0};
    CHECK_THROWS_AS(pso_minimize(cfg, sphere), std::invalid_argument);
    cfg = PsoConfig{};
    cfg.v_clamp_frac = 0.0;
    CHECK_THROWS_AS(pso_minimize(cfg, sphere), std::invalid_argument);
}

TEST_CASE("grid oracle") {
    SUBCASE("grid containing the optimum finds it") {
        const auto [pos, fit] = grid_search_oracle({-1, -1}, {1, 1}, 101, sphere);
        CHECK(fit == 0.0);
        CHECK(pos[0] == doctest::Approx(0.0));
        CHECK(pos[1] == doctest::Approx(0.0));
    }
    SUBCASE("constant fitness keeps the first grid point") {
        const auto [pos, fit] = grid_search_oracle({-1, -2}, {1, 2}, 11,
                                                   [](const Vec2d&) { return 7.0; });
        CHECK(fit == 7.0);
        CHECK(pos[0] == -1.0);
        CHECK(pos[1] == -2.0);
    }
    SUBCASE("oracle dominates every grid point") {
        auto f = [](const Vec2d& p) { return std::sin(5 * p[0]) * std::cos(3 * p[1]); };
        const auto [pos, fit] = grid_search_oracle({-1, -1}, {1, 1}, 21, f);
        for (int iy = 0; iy < 21; ++iy) {
            for (int ix = 0; ix < 21; ++ix) {
                const Vec2d p{-1.0 + 2.0 * ix / 20, -1.0 + 2.0 * iy / 20};
                CHECK(fit <= f(p) + 1e-15);
            }
        }
    }
    SUBCASE("resolution must be >= 2") {
        CHECK_THROWS_AS(grid_search_oracle({-1, -1}, {1, 1}, 1, sphere), std::invalid_argument);
    }
}

TEST_CASE("zero update leaves a converged swarm still") {
    // inertia 0 and all particles at the shared best: velocity update is zero
    PsoConfig cfg;
    cfg.inertia = 0.0;
    cfg.n_particles = 8;
    cfg.n_iters = 1;
    cfg.lo = {-1.0, -1.0};
    cfg.hi = {1.0, 1.0};
    cfg.rng_seed = 5;
    // fitness that pins pbest = gbest = initial position for every particle:
    // constant fitness means no pbest/gbest improvements after init
    const auto res = pso_minimize(cfg, [](const Vec2d&) { return 1.0; });
    CHECK(res.best_fitness == 1.0);
    CHECK(res.history.front() == res.history.back());
}
