#pragma once

// Static SVG rendering of a recorded run: trajectories, forbidden circles,
// virtual leader marker and optional field contour lines extracted with
// marching squares.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "e2coop/field.hpp"
#include "e2coop/sim.hpp"

namespace e2coop {

struct ContourSegment {
    Vec2 a;
    Vec2 b;
};

/// Marching-squares level-set extraction on a regular grid scan of the field.
inline std::vector<ContourSegment> extract_contour(const EnvironmentField& field, double level,
                                                   double x_min, double x_max, double y_min,
                                                   double y_max, int resolution) {
    if (resolution < 2) {
        throw std::invalid_argument("extract_contour: resolution must be >= 2");
    }
    const int nx = resolution, ny = resolution;
    std::vector<double> grid(static_cast<std::size_t>(nx) * ny);
    auto at = [&](int ix, int iy) -> double& {
        return grid[static_cast<std::size_t>(iy) * nx + ix];
    };
    auto px = [&](int ix) { return x_min + (x_max - x_min) * ix / (nx - 1); };
    auto py = [&](int iy) { return y_min + (y_max - y_min) * iy / (ny - 1); };
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            at(ix, iy) = field_at(field, Vec2{px(ix), py(iy)});
        }
    }

    auto lerp = [level](const Vec2& p0, double v0, const Vec2& p1, double v1) {
        const double t = (std::fabs(v1 - v0) < 1e-300) ? 0.5 : (level - v0) / (v1 - v0);
        return p0 + (p1 - p0) * std::clamp(t, 0.0, 1.0);
    };

    std::vector<ContourSegment> segs;
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            const Vec2 p00{px(ix), py(iy)}, p10{px(ix + 1), py(iy)};
            const Vec2 p01{px(ix), py(iy + 1)}, p11{px(ix + 1), py(iy + 1)};
            const double v00 = at(ix, iy), v10 = at(ix + 1, iy);
            const double v01 = at(ix, iy + 1), v11 = at(ix + 1, iy + 1);
            int idx = 0;
            if (v00 >= level) idx |= 1;
            if (v10 >= level) idx |= 2;
            if (v11 >= level) idx |= 4;
            if (v01 >= level) idx |= 8;
            if (idx == 0 || idx == 15) continue;

            const Vec2 bottom = lerp(p00, v00, p10, v10);
            const Vec2 right = lerp(p10, v10, p11, v11);
            const Vec2 top = lerp(p01, v01, p11, v11);
            const Vec2 left = lerp(p00, v00, p01, v01);
            switch (idx) {
                case 1: case 14: segs.push_back({left, bottom}); break;
                case 2: case 13: segs.push_back({bottom, right}); break;
                case 3: case 12: segs.push_back({left, right}); break;
                case 4: case 11: segs.push_back({right, top}); break;
                case 6: case 9:  segs.push_back({bottom, top}); break;
                case 7: case 8:  segs.push_back({left, top}); break;
                case 5:
                    segs.push_back({left, bottom});
                    segs.push_back({right, top});
                    break;
                case 10:
                    segs.push_back({bottom, right});
                    segs.push_back({left, top});
                    break;
                default: break;
            }
        }
    }
    return segs;
}

namespace detail {
inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}
}  // namespace detail

/// Emits a static SVG: per-UAV trajectory polylines, obstacle forbidden
/// circles, virtual leader marker, optional contour levels.
inline void render_plot(const RunRecord& rec, const ScenarioConfig& cfg,
                        const std::vector<double>& contour_levels,
                        const std::filesystem::path& out) {
    if (rec.snapshots.empty()) {
        throw std::invalid_argument("render_plot: empty run record");
    }

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    auto grow = [&](const Vec2& p) {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    };
    for (const auto& t : rec.traces) grow(t.position);
    for (const auto& t : rec.obstacle_traces) {
        grow(t.position + Vec2{cfg.obstacles.empty() ? 0.0 : cfg.obstacles[0].forbidden_radius, 0});
        grow(t.position - Vec2{cfg.obstacles.empty() ? 0.0 : cfg.obstacles[0].forbidden_radius, 0});
        grow(t.position);
    }
    const double margin = 0.05 * std::max(x_max - x_min, y_max - y_min) + 5.0;
    x_min -= margin; x_max += margin; y_min -= margin; y_max += margin;

    const double width = 900.0;
    const double scale = width / (x_max - x_min);
    const double height = (y_max - y_min) * scale;
    auto sx = [&](double x) { return (x - x_min) * scale; };
    auto sy = [&](double y) { return height - (y - y_min) * scale; };  // y up

    std::ofstream os(out);
    if (!os) throw std::runtime_error("render_plot: cannot write " + out.string());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::svg_num(width)
       << "\" height=\"" << detail::svg_num(height) << "\" viewBox=\"0 0 "
       << detail::svg_num(width) << ' ' << detail::svg_num(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // contour levels from the recorded field snapshot
    if (!contour_levels.empty() && rec.last_field.has_value()) {
        for (double level : contour_levels) {
            const auto segs =
                extract_contour(*rec.last_field, level, x_min, x_max, y_min, y_max, 201);
            os << "<g stroke=\"#4477cc\" stroke-width=\"0.8\" fill=\"none\">\n";
            for (const auto& s : segs) {
                os << "<line x1=\"" << detail::svg_num(sx(s.a.x)) << "\" y1=\""
                   << detail::svg_num(sy(s.a.y)) << "\" x2=\"" << detail::svg_num(sx(s.b.x))
                   << "\" y2=\"" << detail::svg_num(sy(s.b.y)) << "\"/>\n";
            }
            os << "</g>\n";
        }
    }

    // obstacle forbidden circles at final positions
    std::map<int, ObstacleTrace> last_obs;
    for (const auto& t : rec.obstacle_traces) last_obs[t.obstacle_id] = t;
    for (const auto& [id, t] : last_obs) {
        const double r =
            static_cast<std::size_t>(id) < cfg.obstacles.size()
                ? cfg.obstacles[static_cast<std::size_t>(id)].forbidden_radius
                : 5.0;
        os << "<circle cx=\"" << detail::svg_num(sx(t.position.x)) << "\" cy=\""
           << detail::svg_num(sy(t.position.y)) << "\" r=\"" << detail::svg_num(r * scale)
           << "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
    }

    // trajectories
    std::map<int, std::vector<Vec2>> paths;
    for (const auto& t : rec.traces) paths[t.uav_id].push_back(t.position);
    const char* palette[] = {"#cc3333", "#33aa55", "#9944cc", "#dd8822", "#117788",
                             "#aa3377", "#557722", "#334499", "#884444", "#22aaaa"};
    int ci = 0;
    for (const auto& [id, pts] : paths) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[ci++ % 10]
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : pts) {
            os << detail::svg_num(sx(p.x)) << ',' << detail::svg_num(sy(p.y)) << ' ';
        }
        os << "\"/>\n";
    }

    // last recorded virtual leader
    for (auto it = rec.leader_per_step.rbegin(); it != rec.leader_per_step.rend(); ++it) {
        if (it->has_value()) {
            const Vec2& p = **it;
            os << "<circle cx=\"" << detail::svg_num(sx(p.x)) << "\" cy=\""
               << detail::svg_num(sy(p.y))
               << "\" r=\"4\" fill=\"#dd2222\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
            break;
        }
    }

    os << "</svg>\n";
}

}  // namespace e2coop
