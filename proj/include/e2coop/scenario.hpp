#pragma once

// Full experiment description: swarm layout, obstacles, distances, weights,
// planner limits and PSO settings, plus JSON (de)serialization and presets.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "e2coop/core.hpp"
#include "e2coop/energy.hpp"
#include "e2coop/pso.hpp"

namespace e2coop {

struct ScenarioConfig {
    std::vector<UavState> uavs;
    std::vector<Obstacle> obstacles;
    Vec2 destination;
    double formation_radius{20.0};  // tau, m
    int swarm_size{5};              // N
    double detection_range{50.0};   // R_d, m
    double avoid_distance{30.0};    // D_a, m
    double safeguard_v2v{0.5};      // D_v2v, m
    double lambda1{0.5};
    double lambda2{0.5};
    EnergyParams energy;
    PsoConfig pso;
    double dt{0.5};            // s
    double grad_step{0.5};     // h, m
    std::uint64_t rng_seed{0};
    int max_steps{600};

    // Planner kinematic limits and knobs (the source material leaves these open).
    double v_max{17.0};               // m/s
    // rad/s; omega search half-width = rate * dt. Full tangent alignment must
    // be reachable within one step or head-on approaches never start turning.
    double heading_rate_max{kPi};
    double turn_radius_min{2.0};      // m; kappa_max = 1 / turn_radius_min
    int n_arc_samples{8};
    int adjust_max_rounds{10};

    double kappa_max() const { return 1.0 / turn_radius_min; }
    double delta_omega_max() const { return heading_rate_max * dt; }
};

inline std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> v;
    auto add = [&v](const std::string& s) { v.push_back(s); };

    if (std::fabs(cfg.lambda1 + cfg.lambda2 - 1.0) > 1e-9) {
        add("lambda1 + lambda2 must equal 1");
    }
    if (cfg.lambda1 < 0.0 || cfg.lambda1 > 1.0) add("lambda1 outside [0, 1]");
    if (cfg.lambda2 < 0.0 || cfg.lambda2 > 1.0) add("lambda2 outside [0, 1]");
    if (!(cfg.dt > 0.0)) add("dt must be > 0");
    if (cfg.avoid_distance > cfg.detection_range) {
        add("avoid_distance D_a exceeds detection_range R_d");
    }
    if (!(cfg.grad_step > 0.0)) add("grad_step must be > 0");
    if (cfg.max_steps < 1) add("max_steps must be >= 1");
    if (!(cfg.v_max > 0.0)) add("v_max must be > 0");
    if (!(cfg.turn_radius_min > 0.0)) add("turn_radius_min must be > 0");
    if (cfg.n_arc_samples < 1) add("n_arc_samples must be >= 1");
    if (cfg.adjust_max_rounds < 1) add("adjust_max_rounds must be >= 1");

    std::vector<int> ids;
    for (const auto& u : cfg.uavs) {
        if (!u.position.finite()) add("uav position not finite");
        if (u.speed < 0.0) add("uav speed must be >= 0");
        if (u.speed > cfg.v_max) add("uav speed exceeds v_max");
        for (int id : ids) {
            if (id == u.id) {
                add("duplicate uav id " + std::to_string(u.id));
                break;
            }
        }
        ids.push_back(u.id);
    }
    for (std::size_t j = 0; j < cfg.obstacles.size(); ++j) {
        const auto& o = cfg.obstacles[j];
        std::string tag = "obstacle " + std::to_string(j) + ": ";
        if (!o.position.finite() || !o.velocity.finite()) add(tag + "non-finite state");
        if (!(o.forbidden_radius > 0.0)) add(tag + "forbidden_radius must be > 0");
        if (!(o.forbidden_radius < o.influence_radius)) {
            add(tag + "forbidden_radius must be strictly less than influence_radius");
        }
    }
    if (cfg.pso.n_particles < 2) add("pso.n_particles must be >= 2");
    if (cfg.pso.n_iters < 1) add("pso.n_iters must be >= 1");
    if (cfg.pso.v_clamp_frac <= 0.0 || cfg.pso.v_clamp_frac > 1.0) {
        add("pso.v_clamp_frac must be in (0, 1]");
    }
    const auto& e = cfg.energy;
    if (!(e.mass > 0.0 && e.gravity > 0.0 && e.air_density > 0.0 && e.ref_area > 0.0 &&
          e.induced_velocity > 0.0)) {
        add("energy params mass/gravity/air_density/ref_area/induced_velocity must be > 0");
    }
    if (!(e.roll > 0.0 && e.roll < kPi / 2.0)) add("energy roll angle must be in (0, pi/2)");
    if (!(e.pitch > 0.0 && e.pitch < kPi / 2.0)) add("energy pitch angle must be in (0, pi/2)");
    return v;
}

// ---- JSON serialization --------------------------------------------------

inline nlohmann::json to_json(const Vec2& v) { return {{"x", v.x}, {"y", v.y}}; }
inline Vec2 vec2_from_json(const nlohmann::json& j) {
    return {j.at("x").get<double>(), j.at("y").get<double>()};
}

inline nlohmann::json to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["uavs"] = nlohmann::json::array();
    for (const auto& u : cfg.uavs) {
        j["uavs"].push_back({{"id", u.id},
                             {"position", to_json(u.position)},
                             {"speed", u.speed},
                             {"heading", u.heading}});
    }
    j["obstacles"] = nlohmann::json::array();
    for (const auto& o : cfg.obstacles) {
        j["obstacles"].push_back({{"position", to_json(o.position)},
                                  {"velocity", to_json(o.velocity)},
                                  {"forbidden_radius", o.forbidden_radius},
                                  {"influence_radius", o.influence_radius}});
    }
    j["destination"] = to_json(cfg.destination);
    j["formation_radius"] = cfg.formation_radius;
    j["swarm_size"] = cfg.swarm_size;
    j["detection_range"] = cfg.detection_range;
    j["avoid_distance"] = cfg.avoid_distance;
    j["safeguard_v2v"] = cfg.safeguard_v2v;
    j["lambda1"] = cfg.lambda1;
    j["lambda2"] = cfg.lambda2;
    j["energy"] = {{"mass", cfg.energy.mass},
                   {"gravity", cfg.energy.gravity},
                   {"air_density", cfg.energy.air_density},
                   {"drag_coeff", cfg.energy.drag_coeff},
                   {"ref_area", cfg.energy.ref_area},
                   {"pitch", cfg.energy.pitch},
                   {"roll", cfg.energy.roll},
                   {"induced_velocity", cfg.energy.induced_velocity},
                   {"speed", cfg.energy.speed}};
    j["pso"] = {{"n_particles", cfg.pso.n_particles},
                {"n_iters", cfg.pso.n_iters},
                {"inertia", cfg.pso.inertia},
                {"v_clamp_frac", cfg.pso.v_clamp_frac},
                {"rng_seed", cfg.pso.rng_seed}};
    j["dt"] = cfg.dt;
    j["grad_step"] = cfg.grad_step;
    j["rng_seed"] = cfg.rng_seed;
    j["max_steps"] = cfg.max_steps;
    j["v_max"] = cfg.v_max;
    j["heading_rate_max"] = cfg.heading_rate_max;
    j["turn_radius_min"] = cfg.turn_radius_min;
    j["n_arc_samples"] = cfg.n_arc_samples;
    j["adjust_max_rounds"] = cfg.adjust_max_rounds;
    return j;
}

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    ScenarioConfig cfg;
    for (const auto& ju : j.at("uavs")) {
        UavState u;
        u.id = ju.at("id").get<int>();
        u.position = vec2_from_json(ju.at("position"));
        u.speed = ju.at("speed").get<double>();
        u.heading = ju.at("heading").get<double>();
        cfg.uavs.push_back(u);
    }
    for (const auto& jo : j.at("obstacles")) {
        Obstacle o;
        o.position = vec2_from_json(jo.at("position"));
        o.velocity = vec2_from_json(jo.at("velocity"));
        o.forbidden_radius = jo.at("forbidden_radius").get<double>();
        o.influence_radius = jo.at("influence_radius").get<double>();
        cfg.obstacles.push_back(o);
    }
    cfg.destination = vec2_from_json(j.at("destination"));
    cfg.formation_radius = j.at("formation_radius").get<double>();
    cfg.swarm_size = j.at("swarm_size").get<int>();
    cfg.detection_range = j.at("detection_range").get<double>();
    cfg.avoid_distance = j.at("avoid_distance").get<double>();
    cfg.safeguard_v2v = j.at("safeguard_v2v").get<double>();
    cfg.lambda1 = j.at("lambda1").get<double>();
    cfg.lambda2 = j.at("lambda2").get<double>();
    const auto& je = j.at("energy");
    cfg.energy.mass = je.at("mass").get<double>();
    cfg.energy.gravity = je.at("gravity").get<double>();
    cfg.energy.air_density = je.at("air_density").get<double>();
    cfg.energy.drag_coeff = je.at("drag_coeff").get<double>();
    cfg.energy.ref_area = je.at("ref_area").get<double>();
    cfg.energy.pitch = je.at("pitch").get<double>();
    cfg.energy.roll = je.at("roll").get<double>();
    cfg.energy.induced_velocity = je.at("induced_velocity").get<double>();
    cfg.energy.speed = je.at("speed").get<double>();
    const auto& jp = j.at("pso");
    cfg.pso.n_particles = jp.at("n_particles").get<int>();
    cfg.pso.n_iters = jp.at("n_iters").get<int>();
    cfg.pso.inertia = jp.at("inertia").get<double>();
    cfg.pso.v_clamp_frac = jp.at("v_clamp_frac").get<double>();
    cfg.pso.rng_seed = jp.at("rng_seed").get<std::uint64_t>();
    cfg.dt = j.at("dt").get<double>();
    cfg.grad_step = j.at("grad_step").get<double>();
    cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    cfg.max_steps = j.at("max_steps").get<int>();
    cfg.v_max = j.value("v_max", 17.0);
    cfg.heading_rate_max = j.value("heading_rate_max", kPi);
    cfg.turn_radius_min = j.value("turn_radius_min", 2.0);
    cfg.n_arc_samples = j.value("n_arc_samples", 8);
    cfg.adjust_max_rounds = j.value("adjust_max_rounds", 10);
    return cfg;
}

}  // namespace e2coop
