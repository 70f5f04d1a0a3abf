// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Numeric tolerances are pinned here, next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "e2coop/sim.hpp"

using namespace e2coop;

namespace {

constexpr int kSeedsMain = 10;    // criteria 1 and 2
constexpr int kSeedsTrend = 10;   // criterion 3
constexpr int kSeedsLambda = 5;   // criterion 6
constexpr double kWinRateMin = 0.90;
constexpr double kMedianSavingMin = 0.20;
constexpr double kTrendSlack = 0.02;      // one adjacent-pair violation within 2%
constexpr double kLambdaSpread = 0.15;    // energy spread around the median
constexpr double kPsoRelSlack = 0.05;     // vs 51x51 grid oracle
constexpr double kPsoTimeBudget = 0.050;  // seconds per instance

int g_failures = 0;

void report(int number, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] %d. %s (%s)\n", ok ? "PASS" : "FAIL", number, what.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// run cache so criteria can share simulations
using RunKey = std::tuple<std::string, double, double, double, std::uint64_t>;
std::map<RunKey, Metrics> g_cache;
std::vector<std::pair<double, Metrics>> g_e2coop_runs;  // (d_obs, metrics)

const Metrics& run_cell(PlannerKind planner, double d_obs, double v_obs, double lambda1,
                        std::uint64_t seed) {
    const RunKey key{planner_name(planner), d_obs, v_obs, lambda1, seed};
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
    PresetSpec spec;
    spec.n = 5;
    spec.v_obs = v_obs;
    spec.d_obs = d_obs;
    spec.lambda1 = lambda1;
    spec.seed = seed;
    const Metrics m = run_scenario(make_scenario(spec), planner).metrics;
    if (planner == PlannerKind::e2coop) g_e2coop_runs.emplace_back(d_obs, m);
    return g_cache.emplace(key, m).first->second;
}

void criterion_1_and_2() {
    const std::vector<double> speeds{0.0, 2.0, 5.0, 8.0, 10.0};
    int cells = 0;
    int wins = 0;
    std::vector<double> savings;
    for (double v_obs : speeds) {
        for (int s = 1; s <= kSeedsMain; ++s) {
            const Metrics& e26 = run_cell(PlannerKind::e2coop, 26.0, v_obs, 0.5, s);
            const Metrics& ff = run_cell(PlannerKind::ffpso, 26.0, v_obs, 0.5, s);
            const Metrics& e16 = run_cell(PlannerKind::e2coop, 16.0, v_obs, 0.5, s);
            const Metrics& pp = run_cell(PlannerKind::ppso, 16.0, v_obs, 0.5, s);
            ++cells;
            const bool all_reached = e26.reached_destination && ff.reached_destination &&
                                     e16.reached_destination && pp.reached_destination;
            const bool win = all_reached && e26.total_energy < ff.total_energy &&
                             e16.total_energy < pp.total_energy;
            if (win) ++wins;
            const double sf = (ff.total_energy - e26.total_energy) / ff.total_energy;
            const double sp = (pp.total_energy - e16.total_energy) / pp.total_energy;
            savings.push_back(std::min(sf, sp));
        }
    }
    const double rate = static_cast<double>(wins) / cells;
    const double med = median(savings);
    {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "wins %d/%d = %.0f%%, median saving %.1f%%", wins,
                      cells, 100.0 * rate, 100.0 * med);
        report(1, rate >= kWinRateMin && med >= kMedianSavingMin,
               "energy ordering vs matched baselines", buf);
    }

    // criterion 2: mean energy decreases from v_obs = 0 to v_obs = 10 per planner
    auto mean_energy = [](PlannerKind p, double d_obs, double v_obs) {
        double sum = 0.0;
        for (int s = 1; s <= kSeedsMain; ++s) {
            sum += run_cell(p, d_obs, v_obs, 0.5, s).total_energy;
        }
        return sum / kSeedsMain;
    };
    const double e0 = mean_energy(PlannerKind::e2coop, 26.0, 0.0);
    const double e10 = mean_energy(PlannerKind::e2coop, 26.0, 10.0);
    const double f0 = mean_energy(PlannerKind::ffpso, 26.0, 0.0);
    const double f10 = mean_energy(PlannerKind::ffpso, 26.0, 10.0);
    const double p0 = mean_energy(PlannerKind::ppso, 16.0, 0.0);
    const double p10 = mean_energy(PlannerKind::ppso, 16.0, 10.0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "e2coop %.0f->%.0f J, ffpso %.0f->%.0f J, ppso %.0f->%.0f J", e0, e10, f0,
                  f10, p0, p10);
    report(2, e10 < e0 && f10 < f0 && p10 < p0,
           "mean energy decreases with obstacle speed", buf);
}

void criterion_3() {
    const std::vector<double> radii{10.0, 16.0, 22.0, 26.0};
    const std::vector<double> speeds{0.0, 5.0, 10.0};
    int violations = 0;
    double worst_rel = 0.0;
    for (double v_obs : speeds) {
        std::vector<double> means;
        for (double d_obs : radii) {
            double sum = 0.0;
            for (int s = 1; s <= kSeedsTrend; ++s) {
                sum += run_cell(PlannerKind::e2coop, d_obs, v_obs, 0.5, s).total_energy;
            }
            means.push_back(sum / kSeedsTrend);
        }
        for (std::size_t i = 1; i < means.size(); ++i) {
            if (means[i] < means[i - 1]) {
                ++violations;
                worst_rel = std::max(worst_rel, (means[i - 1] - means[i]) / means[i - 1]);
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d adjacent-pair violations, worst %.1f%%", violations,
                  100.0 * worst_rel);
    report(3, violations == 0 || (violations == 1 && worst_rel <= kTrendSlack),
           "energy nondecreasing in forbidden radius", buf);
}

void criterion_6() {
    const std::vector<double> lambdas{0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<double> means;
    bool all_reached = true;
    for (double l1 : lambdas) {
        double sum = 0.0;
        for (int s = 1; s <= kSeedsLambda; ++s) {
            const Metrics& m = run_cell(PlannerKind::e2coop, 26.0, 5.0, l1, s);
            sum += m.total_energy;
            all_reached = all_reached && m.reached_destination;
        }
        means.push_back(sum / kSeedsLambda);
    }
    const double med = median(means);
    double spread = 0.0;
    for (double e : means) spread = std::max(spread, std::fabs(e - med) / med);

    // recorded, not asserted: failure rate at lambda1 = 0.9
    int failures_09 = 0;
    for (int s = 1; s <= kSeedsLambda; ++s) {
        if (!run_cell(PlannerKind::e2coop, 26.0, 5.0, 0.9, s).reached_destination) {
            ++failures_09;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "spread %.1f%% around median, all reached: %s; lambda1=0.9 failures %d/%d",
                  100.0 * spread, all_reached ? "yes" : "no", failures_09, kSeedsLambda);
    report(6, spread < kLambdaSpread && all_reached, "energy stable across lambda weights",
           buf);
}

void criteria_4_and_5() {
    // every e2coop run executed above participates
    const PresetSpec defaults;
    const double slack = defaults.cruise_speed * ScenarioConfig{}.dt;  // one planning step
    bool clear_ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    bool v2v_ok = true;
    int unresolved = 0;
    for (const auto& [d_obs, m] : g_e2coop_runs) {
        const double margin = m.min_obstacle_clearance - (d_obs - slack);
        worst_margin = std::min(worst_margin, margin);
        if (margin < 0.0) clear_ok = false;
        if (m.min_uav_pair_distance < defaults.d_v2v - slack) v2v_ok = false;
        unresolved += m.unresolved_adjustments;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu runs, worst margin %.2f m above D_obs - v*dt",
                  g_e2coop_runs.size(), worst_margin);
    report(4, clear_ok, "obstacle clearance bound", buf);
    std::snprintf(buf, sizeof(buf), "min pair distance bound held, %d unresolved adjustments",
                  unresolved);
    report(5, v2v_ok && unresolved == 0, "intra-swarm separation bound", buf);
}

void criterion_7() {
    std::vector<PlanInstance> instances;
    for (std::uint64_t seed = 1; seed <= 8 && instances.size() < 50; ++seed) {
        PresetSpec spec;
        spec.n = 5;
        spec.v_obs = 5.0;
        spec.d_obs = 26.0;
        spec.seed = seed;
        run_scenario(make_scenario(spec), PlannerKind::e2coop, &instances);
    }
    if (instances.size() > 50) instances.resize(50);

    bool quality_ok = instances.size() == 50;
    bool time_ok = true;
    double worst_gap = 0.0;
    double worst_time = 0.0;
    for (auto& inst : instances) {
        inst.request.field = &inst.field;
        const PlanRequest& req = inst.request;
        const auto [pos, oracle] = grid_search_oracle(
            {req.uav.heading - req.delta_omega_max, -req.kappa_max},
            {req.uav.heading + req.delta_omega_max, req.kappa_max}, 51,
            [&req](const Vec2d& p) { return step_fitness(req, p[0], p[1]).fitness; });
        const double bound = oracle + kPsoRelSlack * std::fabs(oracle) + 1e-12;
        if (inst.pso_fitness > bound) quality_ok = false;
        worst_gap = std::max(worst_gap, inst.pso_fitness - oracle);

        PsoConfig cfg;
        cfg.rng_seed = 42;
        const auto t0 = std::chrono::steady_clock::now();
        plan_step(req, cfg);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();
        worst_time = std::max(worst_time, dt);
        if (dt >= kPsoTimeBudget) time_ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%zu instances, worst gap to oracle %.3g, worst time %.1f ms",
                  instances.size(), worst_gap, 1000.0 * worst_time);
    report(7, quality_ok && time_ok, "per-step optimizer matches the grid oracle", buf);
}

void criterion_8() {
    bool ok = true;
    std::string fail;

    // semicircle curvature integral is pi regardless of radius
    for (double r : {0.5, 2.0, 17.0}) {
        Arc a;
        a.omega = 0.3;
        a.kappa = 1.0 / r;
        a.length = kPi * r;
        if (std::fabs(curvature_integral(a) - kPi) > 1e-9) {
            ok = false;
            fail = "semicircle integral";
        }
    }
    // zero curvature spends zero turning energy, exactly
    {
        EnergyParams ep;
        Arc a;
        a.kappa = 0.0;
        a.length = 123.0;
        if (step_energy(ep, a).e_turn != 0.0) {
            ok = false;
            fail = "straight turning energy";
        }
    }
    // point evaluations match direct substitution of the field formulas
    {
        EnvironmentField f;
        f.swarm.virtual_leader = Vec2{3.0, -4.0};
        f.swarm.swarm_speed = 10.0;
        f.swarm.influence_radius = 100.0;
        ObstacleFieldParams o;
        o.center = Vec2{40.0, 7.0};
        o.plateau_radius = 16.0;
        o.influence_radius = 90.0;
        o.effective_speed = 12.0;
        f.obstacles.push_back(o);
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(-80.0, 80.0);
        for (int i = 0; i < 200; ++i) {
            const Vec2 q{u(rng), u(rng)};
            const double ds = distance(q, f.swarm.virtual_leader);
            double want = 0.0;
            if (ds <= 100.0) want += 10.0 / (std::max(ds, 0.1) * std::max(ds, 0.1));
            const double dob = distance(q, o.center);
            if (dob <= 90.0) {
                const double r = std::max(dob <= 16.0 ? 16.0 : dob, 0.1);
                want += 12.0 / (r * r);
            }
            if (std::fabs(field_at(f, q) - want) > 1e-12) {
                ok = false;
                fail = "field point evaluation";
            }
        }

        // binarization nesting: a higher threshold marks a subset of points
        std::uniform_real_distribution<double> t(0.001, 0.1);
        for (int i = 0; i < 1000; ++i) {
            const double lo = t(rng);
            const double hi = lo + t(rng);
            const Vec2 q{u(rng), u(rng)};
            if (binary_at(binarize(f, hi), q) == 1 && binary_at(binarize(f, lo), q) != 1) {
                ok = false;
                fail = "binarization nesting";
            }
        }
        // radial monotonicity of a single obstacle field outside the plateau
        std::uniform_real_distribution<double> rad(16.0, 90.0);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        for (int i = 0; i < 1000; ++i) {
            double r1 = rad(rng);
            double r2 = rad(rng);
            if (r1 > r2) std::swap(r1, r2);
            const double a1 = ang(rng);
            const double a2 = ang(rng);
            const double phi1 = obstacle_field_at(
                o, o.center + Vec2{r1 * std::cos(a1), r1 * std::sin(a1)});
            const double phi2 = obstacle_field_at(
                o, o.center + Vec2{r2 * std::cos(a2), r2 * std::sin(a2)});
            if (phi2 > phi1 + 1e-15) {
                ok = false;
                fail = "radial monotonicity";
            }
        }
    }
    report(8, ok, "analytic unit identities", ok ? "all identities hold" : fail);
}

void criterion_9() {
    PresetSpec spec;
    spec.v_obs = 5.0;
    spec.d_obs = 26.0;
    spec.seed = 17;
    const auto cfg = make_scenario(spec);
    const auto base = std::filesystem::temp_directory_path();
    std::string text[2];
    for (int i = 0; i < 2; ++i) {
        const auto res = run_scenario(cfg, PlannerKind::e2coop);
        const auto dir = base / ("e2coop_accept_det" + std::to_string(i));
        export_run(res.record, res.metrics, cfg, PlannerKind::e2coop, dir);
        std::ifstream is(dir / "trajectories.csv");
        std::ostringstream os;
        os << is.rdbuf();
        text[i] = os.str();
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu bytes compared", text[0].size());
    report(9, !text[0].empty() && text[0] == text[1], "byte-identical repeated runs", buf);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1_and_2();
    criterion_3();
    criteria_4_and_5();  // consumes every e2coop run recorded so far
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %d criterion(s) failed, %.0f s total\n",
                g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
