#pragma once

// Independent viability oracle. Works only from the emitted path primitives
// and the scenario; shares no construction code with the planners. Checks the
// five viability conditions: smoothness (heading continuity and the average
// curvature bound), clearance from nodes, clearance from obstacles, closure,
// and per-node contact length.

#include <cmath>
#include <string>
#include <vector>

#include "viaplan/path.hpp"
#include "viaplan/scene.hpp"

namespace viaplan {

struct ViabilityOptions {
    double heading_tol = 1e-9;    // rad, at junctions
    double curvature_tol = 1e-6;  // slack on ||P'(s1)-P'(s2)|| <= |s1-s2|/R_min
    double clearance_tol = 1e-6;  // m
    double contact_tol = 1e-9;    // m
    double closure_tol = 1e-9;    // scaled by the scene diameter
};

struct ViabilityReport {
    bool ok = true;
    std::vector<std::string> failures;

    double max_heading_jump = 0.0;
    double max_curvature_excess = -std::numeric_limits<double>::infinity();
    double min_node_clearance = std::numeric_limits<double>::infinity();
    double min_obstacle_clearance = std::numeric_limits<double>::infinity();

    void fail(std::string why) {
        ok = false;
        failures.push_back(std::move(why));
    }
};

namespace viability_detail {

inline double point_arc_distance(Point q, const PathSegment& arc) {
    const Vec2 rel = q - arc.center;
    const double rd = rel.norm();
    const double ang = angle_of(rel);
    const double a0 = angle_of(arc.a - arc.center);
    const double a1 = angle_of(arc.b - arc.center);
    bool in_sweep = arc.extra_turns > 0;
    if (!in_sweep) {
        const double span = arc.direction == RotDir::CCW ? ccw_sweep(a0, a1) : ccw_sweep(a1, a0);
        const double off = arc.direction == RotDir::CCW ? ccw_sweep(a0, ang) : ccw_sweep(ang, a0);
        in_sweep = off <= span;
    }
    if (in_sweep) return std::abs(rd - arc.radius);
    return std::min(distance(q, arc.a), distance(q, arc.b));
}

inline double point_polygon_distance(Point q, const std::vector<Point>& poly) {
    if (poly.empty()) return std::numeric_limits<double>::infinity();
    if (poly.size() == 1) return distance(q, poly[0]);
    // Ray-cast containment for general (possibly non-convex) raw shapes.
    if (poly.size() >= 3) {
        bool inside = false;
        for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
            if ((poly[i].y > q.y) != (poly[j].y > q.y)) {
                const double xi = poly[j].x + (poly[i].x - poly[j].x) * (q.y - poly[j].y) /
                                                  (poly[i].y - poly[j].y);
                if (q.x < xi) inside = !inside;
            }
        }
        if (inside) return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    const size_t edges = poly.size() == 2 ? 1 : poly.size();
    for (size_t i = 0; i < edges; ++i) {
        best = std::min(best, point_segment_distance(q, poly[i], poly[(i + 1) % poly.size()]));
    }
    return best;
}

inline double segment_general_polygon_distance(Point a, Point b, const std::vector<Point>& poly) {
    double best = std::min(point_polygon_distance(a, poly), point_polygon_distance(b, poly));
    const size_t edges = poly.size() == 2 ? 1 : poly.size();
    if (poly.size() >= 2) {
        for (size_t i = 0; i < edges; ++i) {
            best = std::min(best, segment_segment_distance(a, b, poly[i], poly[(i + 1) % poly.size()]));
        }
    }
    return best;
}

}  // namespace viability_detail

/// Heading continuity and the sampled average-curvature bound; the only parts
/// of the viability conditions that apply to open point-to-point paths too.
inline void check_smoothness(const ViablePath& path, double r_min, bool closed,
                             const ViabilityOptions& opt, ViabilityReport* report) {
    const size_t m = path.segments.size();
    const size_t junctions = closed ? m : m - 1;
    for (size_t i = 0; i < junctions; ++i) {
        const auto& cur = path.segments[i];
        const auto& nxt = path.segments[(i + 1) % m];
        const double jump = angle_distance(cur.end_heading(), nxt.start_heading());
        report->max_heading_jump = std::max(report->max_heading_jump, jump);
        if (jump > opt.heading_tol) {
            report->fail("heading jump " + std::to_string(jump) + " rad at junction " +
                         std::to_string(i));
        }
    }

    // For all sample pairs closer than one full turn,
    // ||P'(s1)-P'(s2)|| <= |s1-s2|/R_min + tol.
    const double spacing = r_min / 8.0;
    std::vector<double> at;     // cumulative arc length of each sample
    std::vector<Vec2> tangent;  // unit direction at the sample
    double acc = 0.0;
    for (const auto& seg : path.segments) {
        const int steps = std::max(1, static_cast<int>(std::ceil(seg.length / spacing)));
        for (int k = 0; k < steps; ++k) {
            const double local = seg.length * k / steps;
            at.push_back(acc + local);
            tangent.push_back(unit_from_angle(seg.heading_at(local)));
        }
        acc += seg.length;
    }
    at.push_back(acc);
    tangent.push_back(unit_from_angle(path.segments.back().end_heading()));
    const double window = 2.0 * r_min;  // beyond this the bound is vacuous
    for (size_t i = 0; i < at.size(); ++i) {
        for (size_t j = i + 1; j < at.size() && at[j] - at[i] <= window; ++j) {
            const double lhs = (tangent[i] - tangent[j]).norm();
            const double rhs = (at[j] - at[i]) / r_min + opt.curvature_tol;
            report->max_curvature_excess = std::max(report->max_curvature_excess, lhs - rhs);
            if (lhs > rhs) {
                report->fail("curvature bound violated between s=" + std::to_string(at[i]) +
                             " and s=" + std::to_string(at[j]));
                i = at.size();  // one failure is enough
                break;
            }
        }
    }
}

inline ViabilityReport check_viability(const ViablePath& path, const Scenario& s,
                                       const ViabilityOptions& opt = {}) {
    ViabilityReport report;
    if (path.segments.empty()) {
        report.fail("empty path");
        return report;
    }
    const double r_min = s.r_min();
    const double diam = s.diameter();

    // Closure.
    const double gap = distance(path.start(), path.end());
    if (gap > opt.closure_tol * diam) {
        report.fail("path is not closed: endpoint gap " + std::to_string(gap));
    }

    check_smoothness(path, r_min, /*closed=*/true, opt, &report);

    // Clearance from every node location.
    for (const auto& node : s.nodes) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& seg : path.segments) {
            if (seg.kind == PathSegment::Kind::Line) {
                d = std::min(d, point_segment_distance(node.location, seg.a, seg.b));
            } else {
                d = std::min(d, viability_detail::point_arc_distance(node.location, seg));
            }
        }
        report.min_node_clearance = std::min(report.min_node_clearance, d);
        if (d < r_min - opt.clearance_tol) {
            report.fail("node " + std::to_string(node.id) + " clearance " + std::to_string(d) +
                        " below R_min");
        }
    }

    // Clearance from every obstacle raw shape.
    for (const auto& o : s.obstacles) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& seg : path.segments) {
            if (seg.kind == PathSegment::Kind::Line) {
                d = std::min(d, viability_detail::segment_general_polygon_distance(seg.a, seg.b,
                                                                                   o.raw_shape));
            } else {
                const double step = std::min(r_min, std::max(o.d_safe, 1e-3)) / 16.0;
                const int steps = std::max(2, static_cast<int>(std::ceil(seg.length / step)));
                for (int k = 0; k <= steps; ++k) {
                    const Point q = seg.point_at(seg.length * k / steps);
                    d = std::min(d, viability_detail::point_polygon_distance(q, o.raw_shape));
                }
            }
        }
        report.min_obstacle_clearance = std::min(report.min_obstacle_clearance, d);
        if (d < o.d_safe - opt.clearance_tol) {
            report.fail("obstacle " + std::to_string(o.id) + " clearance " + std::to_string(d) +
                        " below d_safe");
        }
    }

    // Contact length on every visiting circle, recomputed from the geometry.
    for (size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& node = s.nodes[i];
        double on_circle = 0.0;
        for (const auto& seg : path.segments) {
            if (seg.kind != PathSegment::Kind::Arc) continue;
            if (distance(seg.center, node.location) <= 1e-6 * diam &&
                std::abs(seg.radius - r_min) <= 1e-6 * std::max(1.0, r_min)) {
                on_circle += seg.length;
            }
        }
        const double required = required_contact(node, s.robot, s.radio).length_m;
        if (on_circle + std::max(opt.contact_tol, 1e-12 * required) < required) {
            report.fail("contact on node " + std::to_string(node.id) + " is " +
                        std::to_string(on_circle) + " m, needs " + std::to_string(required));
        }
    }

    return report;
}

}  // namespace viaplan
