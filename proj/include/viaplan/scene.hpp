#pragma once

// Scenario model: robot parameters, sensor nodes with visiting circles,
// obstacles with grown safety hulls, the staircase radio model, and the
// placement validation the planners rely on.

#include <cmath>
#include <string>
#include <vector>

#include "viaplan/geometry.hpp"
#include "viaplan/smooth_hull.hpp"

namespace viaplan {

struct NodeUnreachable : Error { using Error::Error; };

struct RobotParams {
    double v = 1.0;       // m/s
    double u_max = 1.0;   // rad/s

    double r_min() const { return min_turn_radius(v, u_max); }
};

struct SensorNode {
    int id = 0;
    Point location;
    double data_load_bits = 0.0;

    Circle visiting_circle(double r_min) const { return {location, r_min}; }
};

struct Obstacle {
    int id = 0;
    std::vector<Point> raw_shape;
    double d_safe = 0.0;
    SmoothHull hull;  // raw shape grown by d_safe

    Obstacle() = default;
    Obstacle(int id_, std::vector<Point> shape, double margin)
        : id(id_), raw_shape(std::move(shape)), d_safe(margin), hull(raw_shape, margin) {}

    /// Safety boundary sampled as a closed convex polyline.
    ConvexBoundary boundary_samples(double max_spacing) const {
        return ConvexBoundary{hull.sample(max_spacing)};
    }
};

/// Non-increasing staircase transmission-rate model with matching
/// non-decreasing energy cost per bit. Tier i applies on (d_{i-1}, d_i].
struct RadioModel {
    std::vector<double> thresholds_m;     // d_1 < d_2 < ... = d_max
    std::vector<double> rates_bps;        // r_1 > r_2 > ...
    std::vector<double> energy_j_per_bit; // e_1 < e_2 < ...

    double d_max() const { return thresholds_m.empty() ? 0.0 : thresholds_m.back(); }
};

/// Rate lookup; zero beyond the last threshold.
inline double rate_at(const RadioModel& radio, double d) {
    for (size_t i = 0; i < radio.thresholds_m.size(); ++i) {
        if (d <= radio.thresholds_m[i]) return radio.rates_bps[i];
    }
    return 0.0;
}

inline double energy_rate_at(const RadioModel& radio, double d) {
    for (size_t i = 0; i < radio.thresholds_m.size(); ++i) {
        if (d <= radio.thresholds_m[i]) return radio.energy_j_per_bit[i];
    }
    return 0.0;
}

/// Radio model used throughout the evaluation: 250 KB/s within 20 m,
/// 19.2 KB/s within 50 m, nothing beyond.
inline RadioModel default_radio() {
    RadioModel r;
    r.thresholds_m = {20.0, 50.0};
    r.rates_bps = {250.0e3 * 8.0, 19.2e3 * 8.0};
    r.energy_j_per_bit = {6.8e-6, 1.1e-5};
    return r;
}

struct Scenario {
    RobotParams robot;
    std::vector<SensorNode> nodes;  // nodes[0] is the base station
    std::vector<Obstacle> obstacles;
    RadioModel radio;
    Configuration initial_config;   // on the base visiting circle

    double r_min() const { return robot.r_min(); }

    /// Diagonal of the scene bounding box; tolerance scale for tangency tests.
    double diameter() const {
        double lo_x = initial_config.position.x, hi_x = lo_x;
        double lo_y = initial_config.position.y, hi_y = lo_y;
        const auto grow = [&](Point p) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        };
        for (const auto& n : nodes) grow(n.location);
        for (const auto& o : obstacles) {
            for (const auto& p : o.raw_shape) grow(p);
        }
        return std::max(1.0, std::hypot(hi_x - lo_x, hi_y - lo_y));
    }

    double tangency_eps() const { return 1e-9 * diameter(); }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
    std::string kind;  // stable key: what rule, which elements
    std::string detail;
};

/// Checks the placement assumptions: pairwise element separation (nodes
/// 2*R_min apart, obstacles d_i+d_j apart, node-obstacle R_min+d_safe) and the
/// hull curvature bound. Returns diagnostics; never throws.
inline std::vector<Violation> validate(const Scenario& s) {
    std::vector<Violation> out;
    const double r = s.r_min();
    const double eps = s.tangency_eps();
    const auto add = [&](std::string kind, std::string detail) {
        out.push_back({std::move(kind), std::move(detail)});
    };

    for (size_t i = 0; i < s.nodes.size(); ++i) {
        for (size_t j = i + 1; j < s.nodes.size(); ++j) {
            const double d = distance(s.nodes[i].location, s.nodes[j].location);
            if (d < 2.0 * r - eps) {
                add("node-node/" + std::to_string(s.nodes[i].id) + "/" + std::to_string(s.nodes[j].id),
                    "elements intersect: nodes " + std::to_string(s.nodes[i].id) + " and " +
                        std::to_string(s.nodes[j].id) + " closer than 2*R_min");
            }
        }
    }
    for (size_t i = 0; i < s.obstacles.size(); ++i) {
        for (size_t j = i + 1; j < s.obstacles.size(); ++j) {
            const auto& a = s.obstacles[i];
            const auto& b = s.obstacles[j];
            double d = std::numeric_limits<double>::infinity();
            const auto& pa = a.hull.core();
            const auto& pb = b.hull.core();
            for (size_t k = 0; k < pa.size(); ++k) {
                const Point a0 = pa[k];
                const Point a1 = pa[(k + 1) % pa.size()];
                d = std::min(d, segment_polygon_distance(a0, a1, pb));
            }
            if (d < a.d_safe + b.d_safe - eps) {
                add("obstacle-obstacle/" + std::to_string(a.id) + "/" + std::to_string(b.id),
                    "elements intersect: obstacles " + std::to_string(a.id) + " and " +
                        std::to_string(b.id) + " closer than the safety margins");
            }
        }
    }
    for (const auto& n : s.nodes) {
        for (const auto& o : s.obstacles) {
            double d = std::numeric_limits<double>::infinity();
            const auto& poly = o.hull.core();
            if (poly.size() == 1) {
                d = distance(n.location, poly[0]);
            } else {
                for (size_t k = 0; k < poly.size(); ++k) {
                    d = std::min(d, point_segment_distance(n.location, poly[k],
                                                           poly[(k + 1) % poly.size()]));
                }
            }
            if (d < r + o.d_safe - eps) {
                add("node-obstacle/" + std::to_string(n.id) + "/" + std::to_string(o.id),
                    "elements intersect: node " + std::to_string(n.id) + " and obstacle " +
                        std::to_string(o.id) + " closer than R_min + d_safe");
            }
        }
    }

    // Hull curvature (Assumption: boundary curvature stays below 1/R_min).
    // The discrete estimate is the circumscribed-circle radius of three
    // consecutive boundary samples.
    for (const auto& o : s.obstacles) {
        const auto samples = o.hull.sample(std::max(o.d_safe, r) / 8.0);
        const size_t n = samples.size();
        double worst = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < n; ++k) {
            worst = std::min(worst, circumradius(samples[k], samples[(k + 1) % n],
                                                 samples[(k + 2) % n]));
        }
        if (worst < r - 1e-6 * r) {
            add("hull-curvature/" + std::to_string(o.id),
                "curvature violation: obstacle " + std::to_string(o.id) +
                    " hull corner radius " + std::to_string(worst) + " below R_min");
        }
    }

    if (!s.nodes.empty()) {
        const Circle base = s.nodes.front().visiting_circle(r);
        const double off = std::abs(distance(s.initial_config.position, base.center) - base.radius);
        if (off > 1e-6 * std::max(1.0, base.radius)) {
            add("initial-config", "initial configuration is not on the base visiting circle");
        } else {
            const double phi = angle_of(s.initial_config.position - base.center);
            const double h = s.initial_config.heading;
            if (angle_distance(h, heading_on_circle(phi, RotDir::CCW)) > 1e-6 &&
                angle_distance(h, heading_on_circle(phi, RotDir::CW)) > 1e-6) {
                add("initial-heading", "initial heading is not tangent to the base visiting circle");
            }
        }
    }

    for (size_t i = 0; i + 1 < s.radio.thresholds_m.size(); ++i) {
        if (s.radio.thresholds_m[i + 1] <= s.radio.thresholds_m[i] ||
            s.radio.rates_bps[i + 1] > s.radio.rates_bps[i] ||
            s.radio.energy_j_per_bit[i + 1] < s.radio.energy_j_per_bit[i]) {
            add("radio-monotone", "radio staircase is not monotone at tier " + std::to_string(i + 1));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contact requirements
// ---------------------------------------------------------------------------

struct ContactRequirement {
    double time_s = 0.0;
    double length_m = 0.0;
};

/// Contact time g / r(R_min) and the matching on-circle length delta * v.
inline ContactRequirement required_contact(const SensorNode& node, const RobotParams& robot,
                                           const RadioModel& radio) {
    const double rate = rate_at(radio, robot.r_min());
    if (rate <= 0.0) {
        throw NodeUnreachable("no transmission rate at distance R_min for node " +
                              std::to_string(node.id));
    }
    ContactRequirement c;
    c.time_s = node.data_load_bits / rate;
    c.length_m = c.time_s * robot.v;
    return c;
}

}  // namespace viaplan
