#pragma once

// Seeded random scenario generator honoring the placement assumptions:
// nodes at least 2*R_min apart, obstacles separated by their combined safety
// margins, nodes clear of obstacles by R_min + d_safe. Loads come from a
// uniform range or a Gaussian hotspot. Rejection sampling with a fixed budget
// keeps generation deterministic per seed.

#include <random>
#include <vector>

#include "viaplan/scene.hpp"

namespace viaplan {

struct PlacementBudgetExceeded : Error { using Error::Error; };

struct GenSpec {
    double field_width = 200.0;
    double field_height = 200.0;
    int n_nodes = 10;
    int n_obstacles = 0;
    double obstacle_size = 10.0;  // box edge length
    double d_safe = 4.0;
    RobotParams robot{3.0, 1.0};
    RadioModel radio = default_radio();
    std::uint64_t seed = 0;

    enum class LoadModel { Uniform, GaussianHotspot };
    LoadModel load_model = LoadModel::Uniform;
    double g_lo_bits = 0.0;
    double g_hi_bits = 0.0;
    Point hotspot_center{100.0, 100.0};
    double hotspot_variance = 400.0;     // isotropic covariance diagonal
    double hotspot_peak_bits = 8.0e6;    // load of a node sitting on the hotspot

    // Regenerate node placements until every node has a multihop route to the
    // base (needed by the multihop comparison).
    bool require_connectivity = false;

    int budget = 10000;  // rejection attempts per element
};

namespace gen_detail {

inline bool nodes_connected(const std::vector<Point>& pts, double d_max) {
    const size_t n = pts.size();
    std::vector<bool> seen(n, false);
    std::vector<size_t> stack = {0};
    seen[0] = true;
    size_t visited = 1;
    while (!stack.empty()) {
        const size_t u = stack.back();
        stack.pop_back();
        for (size_t v = 0; v < n; ++v) {
            if (!seen[v] && distance(pts[u], pts[v]) <= d_max) {
                seen[v] = true;
                stack.push_back(v);
                ++visited;
            }
        }
    }
    return visited == n;
}

}  // namespace gen_detail

/// Generate a scenario; deterministic for a fixed spec. The base station is
/// the node nearest the field center, listed first with zero load.
inline Scenario generate(const GenSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const double r_min = spec.robot.r_min();
    if (spec.n_obstacles > 0 && spec.d_safe < r_min) {
        // hull corner arcs would turn tighter than the robot can
        throw Error("d_safe must be at least the turning radius when obstacles are present");
    }
    std::uniform_real_distribution<double> ux(0.0, spec.field_width);
    std::uniform_real_distribution<double> uy(0.0, spec.field_height);

    Scenario s;
    s.robot = spec.robot;
    s.radio = spec.radio;

    // Obstacles first: axis-aligned boxes with the pairwise margin rule.
    if (spec.n_obstacles > 0) {
        const double pad = spec.d_safe + r_min + 1.0;
        if (spec.field_width - spec.obstacle_size - 2.0 * pad <= 0.0 ||
            spec.field_height - spec.obstacle_size - 2.0 * pad <= 0.0) {
            throw PlacementBudgetExceeded("field too small for the requested obstacles");
        }
    }
    for (int i = 0; i < spec.n_obstacles; ++i) {
        const double pad = spec.d_safe + r_min + 1.0;
        std::uniform_real_distribution<double> ox(pad, spec.field_width - spec.obstacle_size - pad);
        std::uniform_real_distribution<double> oy(pad,
                                                  spec.field_height - spec.obstacle_size - pad);
        bool placed = false;
        for (int attempt = 0; attempt < spec.budget && !placed; ++attempt) {
            const Point lo{ox(rng), oy(rng)};
            std::vector<Point> box = {lo,
                                      {lo.x + spec.obstacle_size, lo.y},
                                      {lo.x + spec.obstacle_size, lo.y + spec.obstacle_size},
                                      {lo.x, lo.y + spec.obstacle_size}};
            bool ok = true;
            for (const auto& other : s.obstacles) {
                double d = std::numeric_limits<double>::infinity();
                for (size_t e = 0; e < box.size(); ++e) {
                    d = std::min(d, segment_polygon_distance(box[e], box[(e + 1) % box.size()],
                                                             other.raw_shape));
                }
                if (d < spec.d_safe + other.d_safe + 1.0) ok = false;
            }
            if (ok) {
                s.obstacles.emplace_back(static_cast<int>(s.obstacles.size()) + 1, box,
                                         spec.d_safe);
                placed = true;
            }
        }
        if (!placed) throw PlacementBudgetExceeded("obstacle placement budget exhausted");
    }

    // Node placements, optionally retried until the radio graph is connected.
    std::vector<Point> pts;
    const int max_regen = spec.require_connectivity ? 512 : 1;
    for (int regen = 0; regen < max_regen; ++regen) {
        pts.clear();
        for (int i = 0; i < spec.n_nodes; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < spec.budget && !placed; ++attempt) {
                const Point p{ux(rng), uy(rng)};
                bool ok = true;
                for (const Point& q : pts) {
                    if (distance(p, q) < 2.0 * r_min + 0.5) ok = false;
                }
                for (const auto& o : s.obstacles) {
                    double d = std::numeric_limits<double>::infinity();
                    for (size_t e = 0; e < o.raw_shape.size(); ++e) {
                        d = std::min(d, point_segment_distance(p, o.raw_shape[e],
                                                               o.raw_shape[(e + 1) %
                                                                           o.raw_shape.size()]));
                    }
                    if (d < r_min + o.d_safe + 0.5) ok = false;
                }
                if (ok) {
                    pts.push_back(p);
                    placed = true;
                }
            }
            if (!placed) throw PlacementBudgetExceeded("node placement budget exhausted");
        }
        if (!spec.require_connectivity || gen_detail::nodes_connected(pts, spec.radio.d_max())) {
            break;
        }
        if (regen + 1 == max_regen) {
            throw PlacementBudgetExceeded("could not generate a connected node layout");
        }
    }

    // Base = node nearest the field center, moved to the front.
    const Point center{spec.field_width / 2.0, spec.field_height / 2.0};
    size_t base = 0;
    for (size_t i = 1; i < pts.size(); ++i) {
        if (distance(pts[i], center) < distance(pts[base], center)) base = i;
    }
    std::swap(pts[0], pts[base]);

    std::uniform_real_distribution<double> uload(spec.g_lo_bits, spec.g_hi_bits);
    for (size_t i = 0; i < pts.size(); ++i) {
        SensorNode n;
        n.id = static_cast<int>(i) + 1;
        n.location = pts[i];
        if (i == 0) {
            n.data_load_bits = 0.0;
        } else if (spec.load_model == GenSpec::LoadModel::Uniform) {
            n.data_load_bits = spec.g_hi_bits > spec.g_lo_bits ? uload(rng) : spec.g_lo_bits;
        } else {
            const double d2 = (pts[i] - spec.hotspot_center).norm2();
            n.data_load_bits = spec.hotspot_peak_bits * std::exp(-0.5 * d2 / spec.hotspot_variance);
        }
        s.nodes.push_back(n);
    }

    s.initial_config = Configuration(pts[0] + Point{r_min, 0.0}, -kPi / 2.0);
    return s;
}

}  // namespace viaplan
