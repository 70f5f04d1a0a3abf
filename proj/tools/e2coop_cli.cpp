// Command-line front end: run single scenarios, parameter sweeps,
// side-by-side planner comparisons and SVG plots of exported runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "e2coop/plot.hpp"
#include "e2coop/sim.hpp"

using namespace e2coop;

namespace {

ScenarioConfig load_scenario(const std::string& name_or_file, const PresetSpec& overrides,
                             bool have_overrides) {
    if (std::filesystem::exists(name_or_file) &&
        name_or_file.find(".json") != std::string::npos) {
        std::ifstream is(name_or_file);
        if (!is) throw std::invalid_argument("cannot open scenario file " + name_or_file);
        nlohmann::json j;
        is >> j;
        // Accept both a bare config object and a run_meta.json export.
        return scenario_from_json(j.contains("config") ? j.at("config") : j);
    }
    PresetSpec spec = preset_from_name(name_or_file);
    if (have_overrides) {
        spec.n = overrides.n;
        spec.v_obs = overrides.v_obs;
        spec.d_obs = overrides.d_obs;
        spec.d_v2v = overrides.d_v2v;
        spec.lambda1 = overrides.lambda1;
        spec.tau = overrides.tau;
        spec.max_steps = overrides.max_steps;
    }
    spec.seed = overrides.seed;
    return make_scenario(spec);
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"E2Coop swarm trajectory planning simulator"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Run one scenario and export results");
    std::string run_scenario_arg = "obstacle_in_front";
    std::string run_planner = "e2coop";
    std::string run_out = "out";
    PresetSpec overrides;
    run_cmd->add_option("--scenario", run_scenario_arg, "Preset name or scenario JSON file");
    run_cmd->add_option("--planner", run_planner, "e2coop|ffpso|ppso");
    run_cmd->add_option("--seed", overrides.seed, "RNG seed");
    run_cmd->add_option("--out", run_out, "Output directory");
    run_cmd->add_option("--n", overrides.n, "Swarm size");
    run_cmd->add_option("--v-obs", overrides.v_obs, "Obstacle speed m/s");
    run_cmd->add_option("--d-obs", overrides.d_obs, "Forbidden radius m");
    run_cmd->add_option("--d-v2v", overrides.d_v2v, "Safeguard distance m");
    run_cmd->add_option("--lambda1", overrides.lambda1, "Energy weight (lambda2 = 1 - lambda1)");
    run_cmd->add_option("--tau", overrides.tau, "Formation radius m");
    run_cmd->add_option("--max-steps", overrides.max_steps, "Step budget");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep, long-format CSV");
    std::string sweep_scenario = "obstacle_in_front";
    std::string sweep_axis;
    std::string sweep_values;
    std::string sweep_planners = "e2coop";
    std::string sweep_out;
    int sweep_repeats = 3;
    PresetSpec sweep_base;
    sweep_cmd->add_option("--scenario", sweep_scenario, "Preset name");
    sweep_cmd->add_option("--axis", sweep_axis, "v_obs|D_obs|D_v2v|lambda1|N")->required();
    sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")->required();
    sweep_cmd->add_option("--planners", sweep_planners, "Comma-separated planner list");
    sweep_cmd->add_option("--repeats", sweep_repeats, "Repeats per cell");
    sweep_cmd->add_option("--seed", sweep_base.seed, "Base seed");
    sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Side-by-side planner metrics");
    std::string cmp_scenario = "obstacle_in_front";
    std::string cmp_planners = "e2coop,ffpso,ppso";
    PresetSpec cmp_spec;
    cmp_cmd->add_option("--scenario", cmp_scenario, "Preset name");
    cmp_cmd->add_option("--planners", cmp_planners, "Comma-separated planner list");
    cmp_cmd->add_option("--seed", cmp_spec.seed, "RNG seed");
    cmp_cmd->add_option("--v-obs", cmp_spec.v_obs, "Obstacle speed m/s");
    cmp_cmd->add_option("--d-obs", cmp_spec.d_obs, "Forbidden radius m");
    cmp_cmd->add_option("--n", cmp_spec.n, "Swarm size");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Render an exported run directory to SVG");
    std::string plot_run_dir;
    std::string plot_contours;
    std::string plot_out;
    plot_cmd->add_option("--run", plot_run_dir, "Run directory from `run --out`")->required();
    plot_cmd->add_option("--contours", plot_contours, "Comma-separated contour levels");
    plot_cmd->add_option("--out", plot_out, "SVG output path (default <run>/plot.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            const bool have_overrides =
                run_cmd->count("--n") || run_cmd->count("--v-obs") || run_cmd->count("--d-obs") ||
                run_cmd->count("--d-v2v") || run_cmd->count("--lambda1") ||
                run_cmd->count("--tau") || run_cmd->count("--max-steps");
            const ScenarioConfig cfg = load_scenario(run_scenario_arg, overrides, have_overrides);
            const PlannerKind planner = planner_from_name(run_planner);
            const RunResult res = run_scenario(cfg, planner);
            export_run(res.record, res.metrics, cfg, planner, run_out);
            std::cout << metrics_to_json(res.metrics).dump(2) << '\n';
        } else if (*sweep_cmd) {
            sweep_base.kind = preset_from_name(sweep_scenario).kind;
            std::vector<PlannerKind> planners;
            std::stringstream ss(sweep_planners);
            std::string name;
            while (std::getline(ss, name, ',')) planners.push_back(planner_from_name(name));
            const auto rows =
                sweep(sweep_base, sweep_axis, parse_values(sweep_values), planners, sweep_repeats);
            if (sweep_out.empty()) {
                sweep_csv(rows, std::cout);
            } else {
                std::ofstream os(sweep_out);
                if (!os) throw std::runtime_error("cannot write " + sweep_out);
                sweep_csv(rows, os);
            }
        } else if (*cmp_cmd) {
            cmp_spec.kind = preset_from_name(cmp_scenario).kind;
            std::stringstream ss(cmp_planners);
            std::string name;
            std::printf("%-8s %14s %14s %14s %8s %8s\n", "planner", "energy_J", "min_obs_m",
                        "min_v2v_m", "steps", "reached");
            while (std::getline(ss, name, ',')) {
                const PlannerKind planner = planner_from_name(name);
                const ScenarioConfig cfg = make_scenario(cmp_spec);
                const Metrics m = run_scenario(cfg, planner).metrics;
                std::printf("%-8s %14.1f %14.2f %14.2f %8d %8s\n", name.c_str(), m.total_energy,
                            m.min_obstacle_clearance, m.min_uav_pair_distance, m.steps_run,
                            m.reached_destination ? "yes" : "no");
            }
        } else if (*plot_cmd) {
            // rebuild the record from the exported CSVs
            const std::filesystem::path dir = plot_run_dir;
            std::ifstream meta_is(dir / "run_meta.json");
            if (!meta_is) throw std::invalid_argument("missing run_meta.json in " + plot_run_dir);
            nlohmann::json meta;
            meta_is >> meta;
            const ScenarioConfig cfg = scenario_from_json(meta.at("config"));

            RunRecord rec;
            {
                std::ifstream is(dir / "trajectories.csv");
                if (!is) throw std::invalid_argument("missing trajectories.csv");
                std::string line;
                std::getline(is, line);
                while (std::getline(is, line)) {
                    std::stringstream ls(line);
                    std::string cell;
                    std::vector<std::string> cells;
                    while (std::getline(ls, cell, ',')) cells.push_back(cell);
                    if (cells.size() < 12) continue;
                    StepTrace t;
                    t.step = std::stoi(cells[0]);
                    t.time = std::stod(cells[1]);
                    t.uav_id = std::stoi(cells[2]);
                    t.position = Vec2{std::stod(cells[3]), std::stod(cells[4])};
                    t.heading = std::stod(cells[5]);
                    rec.traces.push_back(t);
                }
            }
            {
                std::ifstream is(dir / "obstacles.csv");
                if (is) {
                    std::string line;
                    std::getline(is, line);
                    while (std::getline(is, line)) {
                        std::stringstream ls(line);
                        std::string cell;
                        std::vector<std::string> cells;
                        while (std::getline(ls, cell, ',')) cells.push_back(cell);
                        if (cells.size() < 7) continue;
                        ObstacleTrace t;
                        t.step = std::stoi(cells[0]);
                        t.time = std::stod(cells[1]);
                        t.obstacle_id = std::stoi(cells[2]);
                        t.position = Vec2{std::stod(cells[3]), std::stod(cells[4])};
                        t.velocity = Vec2{std::stod(cells[5]), std::stod(cells[6])};
                        rec.obstacle_traces.push_back(t);
                    }
                }
            }
            rec.snapshots.push_back({});  // nonempty marker; plotting uses traces
            if (meta.contains("last_field")) {
                const auto& jf = meta.at("last_field");
                EnvironmentField f;
                f.swarm.virtual_leader = vec2_from_json(jf.at("swarm").at("virtual_leader"));
                f.swarm.swarm_speed = jf.at("swarm").at("swarm_speed").get<double>();
                f.swarm.influence_radius = jf.at("swarm").at("influence_radius").get<double>();
                f.swarm.advance_offset = jf.at("swarm").at("advance_offset").get<double>();
                f.swarm.destination_dir = vec2_from_json(jf.at("swarm").at("destination_dir"));
                for (const auto& jo : jf.at("obstacles")) {
                    ObstacleFieldParams o;
                    o.center = vec2_from_json(jo.at("center"));
                    o.obstacle_speed = jo.at("obstacle_speed").get<double>();
                    o.plateau_radius = jo.at("plateau_radius").get<double>();
                    o.influence_radius = jo.at("influence_radius").get<double>();
                    o.effective_speed = jo.at("effective_speed").get<double>();
                    f.obstacles.push_back(o);
                }
                rec.last_field = f;
                rec.leader_per_step.push_back(f.swarm.virtual_leader);
            }
            std::vector<double> levels;
            if (!plot_contours.empty()) levels = parse_values(plot_contours);
            const std::filesystem::path out =
                plot_out.empty() ? dir / "plot.svg" : std::filesystem::path(plot_out);
            render_plot(rec, cfg, levels, out);
            std::cout << "wrote " << out.string() << '\n';
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
