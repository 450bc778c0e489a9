#pragma once

// Minimum-threat point-to-point navigation. The free set at threat level
// theta removes an open disk of radius R_i(theta) around every agent from the
// convex region; its topology changes only at critical levels (agent-boundary
// closest points, agent-agent level-equality points). The planner walks the
// sorted critical levels from zero and returns the first level whose extreme
// graph carries a heading-feasible path from the start pose to the goal,
// together with the length-shortest such path.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "viaplan/geometry.hpp"
#include "viaplan/path.hpp"
#include "viaplan/scene.hpp"

namespace viaplan {

struct LevelAboveMax : Error { using Error::Error; };
struct RadiusBelowTurning : Error { using Error::Error; };
struct NoFeasibleLevel : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

/// Threat agent: zero threat beyond `radius`, strictly decreasing inside.
/// The default level function is linear, f(d) = 1 - d/R.
struct ThreatAgent {
    Point position;
    double radius = 1.0;                     // R_i
    std::function<double(double)> level_fn;  // custom profile on [0, R); empty = linear

    double level(double d) const {
        if (d >= radius) return 0.0;
        if (!level_fn) return 1.0 - d / radius;
        return level_fn(d);
    }
    bool linear() const { return !level_fn; }
};

/// Convex mission region: a circle or a convex counterclockwise polygon.
struct RegionBoundary {
    enum class Kind { Circle, Polygon };
    Kind kind = Kind::Circle;
    Circle circle{{0.0, 0.0}, 100.0};
    std::vector<Point> polygon;

    bool contains(Point p, double eps = 0.0) const {
        if (kind == Kind::Circle) return distance(p, circle.center) <= circle.radius + eps;
        const size_t n = polygon.size();
        for (size_t i = 0; i < n; ++i) {
            const Point a = polygon[i];
            const Point b = polygon[(i + 1) % n];
            if ((b - a).cross(p - a) < -eps * (b - a).norm()) return false;
        }
        return true;
    }

    Point closest_boundary_point(Point p) const {
        if (kind == Kind::Circle) {
            const Vec2 d = p - circle.center;
            const double n = d.norm();
            if (n < 1e-12) return circle.center + Point{circle.radius, 0.0};
            return circle.center + (circle.radius / n) * d;
        }
        double best = std::numeric_limits<double>::infinity();
        Point out = polygon.front();
        const size_t n = polygon.size();
        for (size_t i = 0; i < n; ++i) {
            const Point a = polygon[i];
            const Point b = polygon[(i + 1) % n];
            const Vec2 ab = b - a;
            const double t =
                ab.norm2() > 0.0 ? std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0) : 0.0;
            const Point q = a + t * ab;
            if (distance(p, q) < best) {
                best = distance(p, q);
                out = q;
            }
        }
        return out;
    }
};

struct ThreatScenario {
    RegionBoundary region;
    std::vector<ThreatAgent> agents;
    Configuration start;  // p(0) with heading alpha(0)
    Point goal;           // F
    RobotParams robot{1.5, 0.5};

    double r_min() const { return robot.r_min(); }

    double diameter() const {
        if (region.kind == RegionBoundary::Kind::Circle) return 2.0 * region.circle.radius;
        double lo_x = region.polygon.front().x, hi_x = lo_x;
        double lo_y = region.polygon.front().y, hi_y = lo_y;
        for (const Point& p : region.polygon) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
        return std::max(1.0, std::hypot(hi_x - lo_x, hi_y - lo_y));
    }

    double eps() const { return 1e-9 * diameter(); }
};

/// Placement assumptions for the threat planner: separations around the start
/// pose, agent radii above the turning radius, start and goal inside.
inline std::vector<Violation> validate_threat(const ThreatScenario& ts) {
    std::vector<Violation> out;
    const double r = ts.r_min();
    const auto add = [&](std::string kind, std::string detail) {
        out.push_back({std::move(kind), std::move(detail)});
    };
    if (!ts.region.contains(ts.start.position, ts.eps())) {
        add("start-outside", "start position is outside the region");
    }
    if (!ts.region.contains(ts.goal, ts.eps())) add("goal-outside", "goal is outside the region");
    if (distance(ts.goal, ts.start.position) <= 8.0 * r) {
        add("start-goal-separation", "goal closer than 8 R_min to the start");
    }
    const Point bp = ts.region.closest_boundary_point(ts.start.position);
    if (distance(bp, ts.start.position) <= 8.0 * r) {
        add("start-boundary-separation", "region boundary closer than 8 R_min to the start");
    }
    for (size_t i = 0; i < ts.agents.size(); ++i) {
        const auto& a = ts.agents[i];
        if (a.radius <= r) {
            add("agent-radius/" + std::to_string(i),
                "agent " + std::to_string(i) + " threat radius is not above R_min");
        }
        if (distance(a.position, ts.start.position) <= 8.0 * r + a.radius) {
            add("agent-start-separation/" + std::to_string(i),
                "agent " + std::to_string(i) + " closer than 8 R_min + R_i to the start");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Critical points and shrunk radii
// ---------------------------------------------------------------------------

struct CriticalPoint {
    enum class Kind { Type1, Type2 };
    Kind kind = Kind::Type1;
    Point location;
    double level = 0.0;  // theta in (0, 1]
    int agent_i = -1;
    int agent_j = -1;  // Type2 only
};

/// Distance from agent i at which its level equals theta; the disk radius of
/// the free-set construction. Closed form for linear profiles, bisection
/// otherwise.
inline double shrunk_radius(const ThreatAgent& agent, double theta) {
    if (theta <= 0.0) return agent.radius;
    if (agent.level(0.0) < theta) {
        throw LevelAboveMax("threat level above the agent's maximum");
    }
    if (agent.linear()) return agent.radius * (1.0 - theta);
    double lo = 0.0, hi = agent.radius;  // level decreasing: f(lo) >= theta >= f(hi)
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (agent.level(mid) >= theta) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14 * agent.radius) break;
    }
    return 0.5 * (lo + hi);
}

namespace threat_detail {

// Type-2 point: the unique spot on the segment between two agents where the
// two levels agree. Closed form for linear profiles, bisection otherwise.
// Profiles with unequal maxima may have no interior crossing (one agent's
// whole range overshadows the other); those pairs carry no type-2 point.
inline std::optional<CriticalPoint> type2_point(const ThreatScenario& ts, int i, int j) {
    const ThreatAgent& a = ts.agents[static_cast<size_t>(i)];
    const ThreatAgent& b = ts.agents[static_cast<size_t>(j)];
    const double big = distance(a.position, b.position);
    double d;  // distance from agent i
    if (a.linear() && b.linear()) {
        d = a.radius / (a.radius + b.radius) * big;
    } else {
        double lo = std::max(0.0, big - b.radius);
        double hi = std::min(a.radius, big);
        if (a.level(lo) < b.level(big - lo) || a.level(hi) > b.level(big - hi)) {
            return std::nullopt;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (a.level(mid) >= b.level(big - mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo < 1e-14 * big) break;
        }
        d = 0.5 * (lo + hi);
    }
    CriticalPoint cp;
    cp.kind = CriticalPoint::Kind::Type2;
    cp.location = a.position + (d / big) * (b.position - a.position);
    cp.level = a.level(d);
    cp.agent_i = i;
    cp.agent_j = j;
    return cp;
}

}  // namespace threat_detail

/// All critical points, sorted ascending by level. Type 1 for agents whose
/// threat range reaches the region boundary, type 2 for overlapping agent
/// pairs. A single agent gets a second boundary point on its far side.
inline std::vector<CriticalPoint> compute_critical_points(const ThreatScenario& ts) {
    std::vector<CriticalPoint> cps;
    const int n = static_cast<int>(ts.agents.size());
    for (int i = 0; i < n; ++i) {
        const ThreatAgent& a = ts.agents[static_cast<size_t>(i)];
        const Point p1 = ts.region.closest_boundary_point(a.position);
        if (distance(a.position, p1) < a.radius) {
            CriticalPoint cp;
            cp.kind = CriticalPoint::Kind::Type1;
            cp.location = p1;
            cp.level = a.level(distance(a.position, p1));
            cp.agent_i = i;
            cps.push_back(cp);
        }
        if (n == 1 && ts.region.kind == RegionBoundary::Kind::Polygon) {
            // One agent can seal a corridor on two sides; take the nearest
            // boundary point restricted to the half-plane opposite the first.
            // (A circular region never pinches on the far side: its boundary
            // there sits at least one region radius away.)
            const Vec2 axis = (p1 - a.position).normalized();
            double best = std::numeric_limits<double>::infinity();
            Point far_pt;
            const size_t m = ts.region.polygon.size();
            for (size_t e = 0; e < m; ++e) {
                const Point pa = ts.region.polygon[e];
                const Point pb = ts.region.polygon[(e + 1) % m];
                const Vec2 ab = pb - pa;
                // feasible parameter range of the far-side constraint
                // (q - P) . axis <= 0 with q = pa + t ab
                const double c0 = (pa - a.position).dot(axis);
                const double c1 = ab.dot(axis);
                double t_lo = 0.0, t_hi = 1.0;
                if (std::abs(c1) < 1e-15) {
                    if (c0 > 0.0) continue;
                } else if (c1 > 0.0) {
                    t_hi = std::min(t_hi, -c0 / c1);
                } else {
                    t_lo = std::max(t_lo, -c0 / c1);
                }
                if (t_lo > t_hi) continue;
                const double t_star =
                    ab.norm2() > 0.0
                        ? std::clamp((a.position - pa).dot(ab) / ab.norm2(), t_lo, t_hi)
                        : 0.0;
                const Point q = pa + t_star * ab;
                if (distance(q, a.position) < best) {
                    best = distance(q, a.position);
                    far_pt = q;
                }
            }
            if (std::isfinite(best) && best < a.radius) {
                CriticalPoint cp;
                cp.kind = CriticalPoint::Kind::Type1;
                cp.location = far_pt;
                cp.level = a.level(best);
                cp.agent_i = 0;
                cps.push_back(cp);
            }
        }
        for (int j = i + 1; j < n; ++j) {
            const ThreatAgent& b = ts.agents[static_cast<size_t>(j)];
            if (distance(a.position, b.position) < a.radius + b.radius) {
                if (auto cp = threat_detail::type2_point(ts, i, j)) cps.push_back(*cp);
            }
        }
    }
    std::stable_sort(cps.begin(), cps.end(),
                     [](const CriticalPoint& x, const CriticalPoint& y) { return x.level < y.level; });
    return cps;
}

// ---------------------------------------------------------------------------
// Extreme graph
// ---------------------------------------------------------------------------

struct ExtremeGraph {
    double theta = 0.0;
    Point start;
    Point goal;
    RotDir start_dir_left = RotDir::CCW;   // rotation sense on the left initial circle
    RotDir start_dir_right = RotDir::CW;   // and on the right one
    double r_min = 0.0;
    double eps = 1e-9;

    std::vector<Circle> circles;  // [0] left initial, [1] right initial, then shrunk agents
    std::vector<int> agent_of;    // agent index per circle, -1 for the initial pair

    struct Vtx {
        int circle = -1;
        double angle = 0.0;
        Point pos;
    };
    std::vector<Vtx> vertices;
    int p0_left = -1;   // start vertex on the left initial circle
    int p0_right = -1;  // and on the right one

    struct TangentEdge {
        int v_from = -1, v_to = -1;
        RotDir from_dir = RotDir::CCW, to_dir = RotDir::CCW;
        double length = 0.0;
    };
    std::vector<TangentEdge> tangent_edges;  // directed

    struct GoalEdge {
        int v_from = -1;
        RotDir from_dir = RotDir::CCW;
        double length = 0.0;
    };
    std::vector<GoalEdge> goal_edges;

    struct ArcEdge {
        int v_from = -1, v_to = -1;
        RotDir dir = RotDir::CCW;
        double length = 0.0;
    };
    std::vector<ArcEdge> arc_edges;  // directed, between angularly consecutive vertices

    size_t tangent_line_count = 0;  // surviving geometric tangent lines (undirected)
};

namespace threat_detail {

// Exact minimum distance from a circular arc to a point.
inline double arc_point_min_distance(const Circle& c, double a0, double a1, RotDir dir, Point q) {
    const Vec2 rel = q - c.center;
    const double rd = rel.norm();
    const double ang = angle_of(rel);
    const double span = dir == RotDir::CCW ? ccw_sweep(a0, a1) : ccw_sweep(a1, a0);
    const double off = dir == RotDir::CCW ? ccw_sweep(a0, ang) : ccw_sweep(ang, a0);
    if (off <= span) return std::abs(rd - c.radius);
    const Point pa = c.center + c.radius * unit_from_angle(a0);
    const Point pb = c.center + c.radius * unit_from_angle(a1);
    return std::min(distance(q, pa), distance(q, pb));
}

// Exact test that a circular arc stays inside the region.
inline bool arc_in_region(const RegionBoundary& region, const Circle& c, double a0, double a1,
                          RotDir dir, double eps) {
    if (region.kind == RegionBoundary::Kind::Circle) {
        // farthest point of the arc from the region center
        const double span = dir == RotDir::CCW ? ccw_sweep(a0, a1) : ccw_sweep(a1, a0);
        const double far_ang = angle_of(c.center - region.circle.center);
        const double off = dir == RotDir::CCW ? ccw_sweep(a0, far_ang) : ccw_sweep(far_ang, a0);
        double far;
        if (off <= span) {
            far = distance(c.center, region.circle.center) + c.radius;
        } else {
            const Point pa = c.center + c.radius * unit_from_angle(a0);
            const Point pb = c.center + c.radius * unit_from_angle(a1);
            far = std::max(distance(pa, region.circle.center), distance(pb, region.circle.center));
        }
        return far <= region.circle.radius + eps;
    }
    const size_t n = region.polygon.size();
    const double span = dir == RotDir::CCW ? ccw_sweep(a0, a1) : ccw_sweep(a1, a0);
    for (size_t i = 0; i < n; ++i) {
        const Point a = region.polygon[i];
        const Point b = region.polygon[(i + 1) % n];
        const Vec2 inward = (b - a).perp().normalized();  // ccw polygon: interior on the left
        // min over the arc of inward-distance; the arc's extreme sits where the
        // radius vector opposes the inward normal
        const double lo_ang = angle_of(-1.0 * inward);
        const double off = dir == RotDir::CCW ? ccw_sweep(a0, lo_ang) : ccw_sweep(lo_ang, a0);
        double worst;
        if (off <= span) {
            worst = inward.dot(c.center - a) - c.radius;
        } else {
            const Point pa = c.center + c.radius * unit_from_angle(a0);
            const Point pb = c.center + c.radius * unit_from_angle(a1);
            worst = std::min(inward.dot(pa - a), inward.dot(pb - a));
        }
        if (worst < -eps) return false;
    }
    return true;
}

struct RawThreatTangent {
    int c1 = -1, c2 = -1;
    Point q1, q2;
    double h1 = 0.0;  // heading leaving c1 toward c2 (set for pinch tangents)
    bool pinch = false;
};

// Common tangents between two threat circles. Overlapping circles keep their
// outer tangents; pairs touching within eps exchange a zero-length pinch
// tangent at the contact point instead of inner tangents.
inline void threat_circle_tangents(const Circle& c1, const Circle& c2, int i1, int i2, double eps,
                                   std::vector<RawThreatTangent>& out) {
    const double d = distance(c1.center, c2.center);
    if (d <= std::abs(c1.radius - c2.radius) + eps) return;  // one contains the other

    const auto push = [&](Point a, Point b) {
        RawThreatTangent t;
        t.c1 = i1;
        t.c2 = i2;
        t.q1 = a;
        t.q2 = b;
        out.push_back(t);
    };

    // Outer tangents exist for every non-nested pair.
    if (std::abs(c1.radius - c2.radius) <= eps) {
        const Vec2 u = (c2.center - c1.center) / d;
        const Vec2 n = u.perp();
        for (double sgn : {1.0, -1.0}) {
            const Vec2 off = sgn * c1.radius * n;
            push(c1.center + off, c2.center + off);
        }
    } else {
        const double dr = c2.radius - c1.radius;
        const Point a{(c1.center.x * c2.radius - c2.center.x * c1.radius) / dr,
                      (c1.center.y * c2.radius - c2.center.y * c1.radius) / dr};
        const auto on1 = tangents_point_circle(a, c1, 0.0);
        const auto on2 = tangents_point_circle(a, c2, 0.0);
        for (auto& seg : detail::pair_through_point(a, on1, on2)) push(seg.from, seg.to);
    }

    const double gap = d - (c1.radius + c2.radius);
    if (gap > eps) {
        const double sr = c1.radius + c2.radius;
        const Point b{(c1.center.x * c2.radius + c2.center.x * c1.radius) / sr,
                      (c1.center.y * c2.radius + c2.center.y * c1.radius) / sr};
        const auto in1 = tangents_point_circle(b, c1, 0.0);
        const auto in2 = tangents_point_circle(b, c2, 0.0);
        for (auto& seg : detail::pair_through_point(b, in1, in2)) push(seg.from, seg.to);
    } else if (gap >= -eps) {
        // Touching circles: the free set pinches to a single point and the
        // planner may switch circles there, flipping the rotation sense.
        const Vec2 u = (c2.center - c1.center) / d;
        const Point t = c1.center + c1.radius * u;
        for (double sgn : {1.0, -1.0}) {
            RawThreatTangent p;
            p.c1 = i1;
            p.c2 = i2;
            p.q1 = t;
            p.q2 = t;
            p.pinch = true;
            p.h1 = normalize_angle(angle_of(u) + sgn * kPi / 2.0);
            out.push_back(p);
        }
    }
    // Overlapping (gap < -eps): no inner tangents.
}

}  // namespace threat_detail

/// Build the extreme graph at threat level `theta`: shrunk agent circles, the
/// two initial circles, tangent vertices, and the feasible tangent, arc, and
/// goal edges inside the free set.
inline ExtremeGraph build_extreme_graph(const ThreatScenario& ts, double theta) {
    ExtremeGraph eg;
    eg.theta = theta;
    eg.start = ts.start.position;
    eg.goal = ts.goal;
    eg.r_min = ts.r_min();
    eg.eps = ts.eps();

    const double alpha = ts.start.heading;
    const Vec2 left_n = unit_from_angle(alpha + kPi / 2.0);
    eg.circles.push_back({ts.start.position + eg.r_min * left_n, eg.r_min});
    eg.agent_of.push_back(-1);
    eg.circles.push_back({ts.start.position - eg.r_min * left_n, eg.r_min});
    eg.agent_of.push_back(-1);

    for (size_t i = 0; i < ts.agents.size(); ++i) {
        const ThreatAgent& a = ts.agents[i];
        if (a.level(0.0) < theta) continue;  // no disk at this level
        const double r = shrunk_radius(a, theta);
        if (r < eg.r_min - eg.eps) {
            throw RadiusBelowTurning("shrunk threat radius fell below the turning radius");
        }
        eg.circles.push_back({a.position, r});
        eg.agent_of.push_back(static_cast<int>(i));
    }

    // Feasibility of a segment: endpoints inside the convex region (whence the
    // whole segment), clear of every shrunk disk, and not crossing the initial
    // circles' interiors.
    const auto segment_feasible = [&](Point a, Point b, int skip1, int skip2) {
        if (!ts.region.contains(a, eg.eps) || !ts.region.contains(b, eg.eps)) return false;
        for (size_t c = 0; c < eg.circles.size(); ++c) {
            if (static_cast<int>(c) == skip1 || static_cast<int>(c) == skip2) continue;
            if (point_segment_distance(eg.circles[c].center, a, b) <
                eg.circles[c].radius - eg.eps) {
                return false;
            }
        }
        return true;
    };

    // Collect tangent candidates.
    std::vector<threat_detail::RawThreatTangent> raw;
    const int nc = static_cast<int>(eg.circles.size());
    for (int i = 0; i < nc; ++i) {
        for (int j = i + 1; j < nc; ++j) {
            if (i == 0 && j == 1) continue;  // tangents between the initial circles are dropped
            threat_detail::threat_circle_tangents(eg.circles[static_cast<size_t>(i)],
                                                  eg.circles[static_cast<size_t>(j)], i, j, eg.eps,
                                                  raw);
        }
    }

    std::vector<std::vector<int>> vtx_by_circle(static_cast<size_t>(nc));
    const auto vertex_id = [&](int circle, Point pos) {
        for (int k : vtx_by_circle[static_cast<size_t>(circle)]) {
            if (distance(eg.vertices[static_cast<size_t>(k)].pos, pos) <= eg.eps) return k;
        }
        ExtremeGraph::Vtx v;
        v.circle = circle;
        v.angle = angle_of(pos - eg.circles[static_cast<size_t>(circle)].center);
        v.pos = pos;
        eg.vertices.push_back(v);
        const int id = static_cast<int>(eg.vertices.size()) - 1;
        vtx_by_circle[static_cast<size_t>(circle)].push_back(id);
        return id;
    };

    eg.p0_left = vertex_id(0, ts.start.position);
    eg.p0_right = vertex_id(1, ts.start.position);

    const auto classify = [&](int circle, Point pos, double heading, RotDir* out) {
        const Circle& c = eg.circles[static_cast<size_t>(circle)];
        const double phi = angle_of(pos - c.center);
        for (RotDir d : {RotDir::CCW, RotDir::CW}) {
            if (angle_distance(heading, heading_on_circle(phi, d)) < 1e-5) {
                *out = d;
                return true;
            }
        }
        return false;
    };

    for (const auto& rt : raw) {
        // Pinch points degenerate to a single sample; the same feasibility
        // test covers them.
        if (!segment_feasible(rt.q1, rt.q2, rt.c1, rt.c2)) continue;
        double h;
        if (rt.pinch) {
            h = rt.h1;
        } else {
            h = angle_of(rt.q2 - rt.q1);
        }
        RotDir d1, d2;
        if (!classify(rt.c1, rt.q1, h, &d1) || !classify(rt.c2, rt.q2, h, &d2)) continue;
        const int v1 = vertex_id(rt.c1, rt.q1);
        const int v2 = vertex_id(rt.c2, rt.q2);
        const double len = distance(rt.q1, rt.q2);
        eg.tangent_edges.push_back({v1, v2, d1, d2, len});
        eg.tangent_edges.push_back({v2, v1, opposite(d2), opposite(d1), len});
        eg.tangent_line_count += 1;
    }

    // Goal tangents: two per circle when the goal is outside it.
    for (int c = 0; c < nc; ++c) {
        std::array<TangentSegment, 2> segs;
        try {
            segs = tangents_point_circle(ts.goal, eg.circles[static_cast<size_t>(c)], eg.eps);
        } catch (const Error&) {
            continue;  // goal inside or on this circle at this level
        }
        for (const auto& s : segs) {
            // departure from the circle toward the goal
            if (!segment_feasible(s.to, ts.goal, c, -1)) continue;
            const double h = angle_of(ts.goal - s.to);
            RotDir d;
            if (!classify(c, s.to, h, &d)) continue;
            const int v = vertex_id(c, s.to);
            eg.goal_edges.push_back({v, d, distance(s.to, ts.goal)});
            eg.tangent_line_count += 1;
        }
    }

    // Arc edges between angularly consecutive vertices on each circle, kept
    // only when the arc stays inside the free set.
    for (int c = 0; c < nc; ++c) {
        auto ids = vtx_by_circle[static_cast<size_t>(c)];
        if (ids.size() < 2) continue;
        std::sort(ids.begin(), ids.end(), [&](int x, int y) {
            return eg.vertices[static_cast<size_t>(x)].angle <
                   eg.vertices[static_cast<size_t>(y)].angle;
        });
        const Circle& circle = eg.circles[static_cast<size_t>(c)];
        for (size_t k = 0; k < ids.size(); ++k) {
            const int va = ids[k];
            const int vb = ids[(k + 1) % ids.size()];
            const double a0 = eg.vertices[static_cast<size_t>(va)].angle;
            const double a1 = eg.vertices[static_cast<size_t>(vb)].angle;
            if (!threat_detail::arc_in_region(ts.region, circle, a0, a1, RotDir::CCW, eg.eps)) {
                continue;
            }
            bool clear = true;
            for (size_t o = 0; o < eg.circles.size() && clear; ++o) {
                if (static_cast<int>(o) == c) continue;
                if (eg.agent_of[o] < 0) continue;  // arcs may pass the initial circles
                if (threat_detail::arc_point_min_distance(circle, a0, a1, RotDir::CCW,
                                                          eg.circles[o].center) <
                    eg.circles[o].radius - eg.eps) {
                    clear = false;
                }
            }
            if (!clear) continue;
            const double len = circle.radius * ccw_sweep(a0, a1);
            eg.arc_edges.push_back({va, vb, RotDir::CCW, len});
            eg.arc_edges.push_back({vb, va, RotDir::CW, len});
        }
    }
    return eg;
}

// ---------------------------------------------------------------------------
// Shortest viable path on the extreme graph
// ---------------------------------------------------------------------------

struct ThreatPath {
    ViablePath path;
    double theta = 0.0;
    double length = 0.0;
};

/// Length-shortest heading-feasible start-to-goal path, searched over the
/// rotation-sense-expanded state graph. Returns nothing when the graph is
/// disconnected at this level.
inline std::optional<ThreatPath> shortest_viable_on_extreme_graph(const ExtremeGraph& eg) {
    const size_t nv = eg.vertices.size();
    const size_t nstates = 2 * nv;
    const auto state_of = [](int vtx, RotDir d) {
        return static_cast<size_t>(2 * vtx + (d == RotDir::CW ? 1 : 0));
    };

    struct Parent {
        int kind = -1;  // 0 arc, 1 tangent, 2 start
        size_t edge = 0;
        size_t from_state = 0;
    };
    std::vector<double> dist(nstates, std::numeric_limits<double>::infinity());
    std::vector<Parent> parent(nstates);

    using Item = std::pair<double, size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    const auto seed = [&](int vtx, RotDir d) {
        const size_t st = state_of(vtx, d);
        dist[st] = 0.0;
        parent[st] = {2, 0, st};
        pq.push({0.0, st});
    };
    seed(eg.p0_left, eg.start_dir_left);
    seed(eg.p0_right, eg.start_dir_right);

    // Adjacency over the expanded states.
    std::vector<std::vector<std::pair<size_t, int>>> adj(nstates);  // (edge idx, kind)
    for (size_t e = 0; e < eg.arc_edges.size(); ++e) {
        const auto& a = eg.arc_edges[e];
        adj[state_of(a.v_from, a.dir)].push_back({e, 0});
    }
    for (size_t e = 0; e < eg.tangent_edges.size(); ++e) {
        const auto& t = eg.tangent_edges[e];
        adj[state_of(t.v_from, t.from_dir)].push_back({e, 1});
    }

    while (!pq.empty()) {
        const auto [d, st] = pq.top();
        pq.pop();
        if (d > dist[st] + 1e-15) continue;
        for (const auto& [e, kind] : adj[st]) {
            size_t to;
            double w;
            if (kind == 0) {
                const auto& a = eg.arc_edges[e];
                to = state_of(a.v_to, a.dir);
                w = a.length;
            } else {
                const auto& t = eg.tangent_edges[e];
                to = state_of(t.v_to, t.to_dir);
                w = t.length;
            }
            if (d + w < dist[to] - 1e-15) {
                dist[to] = d + w;
                parent[to] = {kind, e, st};
                pq.push({d + w, to});
            }
        }
    }

    // Best goal edge.
    double best = std::numeric_limits<double>::infinity();
    int pick = -1;
    for (size_t e = 0; e < eg.goal_edges.size(); ++e) {
        const auto& ge = eg.goal_edges[e];
        const size_t st = state_of(ge.v_from, ge.from_dir);
        if (dist[st] + ge.length < best - 1e-15) {
            best = dist[st] + ge.length;
            pick = static_cast<int>(e);
        }
    }
    if (pick < 0) return std::nullopt;

    // Reconstruct the state chain and emit primitives.
    std::vector<std::pair<int, size_t>> edges;  // (kind, edge idx), goal last
    size_t st = state_of(eg.goal_edges[static_cast<size_t>(pick)].v_from,
                         eg.goal_edges[static_cast<size_t>(pick)].from_dir);
    while (parent[st].kind != 2) {
        edges.push_back({parent[st].kind, parent[st].edge});
        st = parent[st].from_state;
    }
    std::reverse(edges.begin(), edges.end());

    ThreatPath out;
    out.theta = eg.theta;
    for (const auto& [kind, e] : edges) {
        if (kind == 0) {
            const auto& a = eg.arc_edges[e];
            const auto& vf = eg.vertices[static_cast<size_t>(a.v_from)];
            const auto& vt = eg.vertices[static_cast<size_t>(a.v_to)];
            if (a.length <= 1e-12) continue;
            out.path.push(PathSegment::arc(eg.circles[static_cast<size_t>(vf.circle)], vf.pos,
                                           vt.pos, a.dir));
        } else {
            const auto& t = eg.tangent_edges[e];
            if (t.length <= 1e-12) continue;  // pinch hop
            out.path.push(PathSegment::line(eg.vertices[static_cast<size_t>(t.v_from)].pos,
                                            eg.vertices[static_cast<size_t>(t.v_to)].pos));
        }
    }
    const auto& ge = eg.goal_edges[static_cast<size_t>(pick)];
    if (ge.length > 1e-12) {
        out.path.push(
            PathSegment::line(eg.vertices[static_cast<size_t>(ge.v_from)].pos, eg.goal));
    }
    out.length = best;
    return out;
}

// ---------------------------------------------------------------------------
// Level sweep
// ---------------------------------------------------------------------------

struct ThreatPlan {
    ThreatPath best;
    std::vector<CriticalPoint> critical_points;  // sorted ascending
    int level_index = -1;                        // -1 when theta = 0 suffices
};

/// Try threat level zero, then every critical level in ascending order;
/// return the first level whose extreme graph connects start and goal.
inline ThreatPlan plan_min_threat(const ThreatScenario& ts) {
    ThreatPlan plan;
    plan.critical_points = compute_critical_points(ts);
    std::vector<double> levels = {0.0};
    for (const auto& cp : plan.critical_points) levels.push_back(cp.level);
    for (size_t k = 0; k < levels.size(); ++k) {
        const ExtremeGraph eg = build_extreme_graph(ts, levels[k]);
        if (auto found = shortest_viable_on_extreme_graph(eg)) {
            plan.best = std::move(*found);
            plan.level_index = static_cast<int>(k) - 1;
            return plan;
        }
    }
    throw NoFeasibleLevel("no critical level connects the start to the goal");
}

/// Actual construction sizes at one level, for the complexity accounting.
struct GraphCounts {
    size_t critical_points = 0;
    size_t vertices = 0;
    size_t edges = 0;
    size_t tangent_lines = 0;
};

inline GraphCounts count_graph_elements(const ThreatScenario& ts, double theta) {
    GraphCounts counts;
    counts.critical_points = compute_critical_points(ts).size();
    const ExtremeGraph eg = build_extreme_graph(ts, theta);
    counts.vertices = eg.vertices.size() + 1;  // tangent points, p(0), and the goal
    counts.edges = eg.arc_edges.size() / 2 + eg.tangent_edges.size() / 2 + eg.goal_edges.size();
    counts.tangent_lines = eg.tangent_line_count;
    return counts;
}

}  // namespace viaplan
