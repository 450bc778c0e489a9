#pragma once

// Tangent graph over scene elements (visiting circles and obstacle safety
// hulls): vertices are tangent points, edges are mutually non-blocked common
// tangents plus the boundary arcs between consecutive tangent points. Arc
// edges on visiting circles carry the reading adjustment lazily: the graph
// stores raw geometric lengths plus per-node adjustment parameters.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "viaplan/geometry.hpp"
#include "viaplan/scene.hpp"

namespace viaplan {

struct InvalidScenario : Error { using Error::Error; };
struct ArcNotOnVisitingCircle : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

struct Element {
    enum class Kind { VisitingCircle, ObstacleHull };

    Kind kind = Kind::VisitingCircle;
    int node_index = -1;      // kind == VisitingCircle
    int obstacle_index = -1;  // kind == ObstacleHull
    Circle circle;            // visiting-circle geometry
    SmoothHull hull;          // grown obstacle boundary

    // Boundary parameter: polar angle for circles, arc length for hulls.
    Point point_at(double param) const {
        if (kind == Kind::VisitingCircle) {
            return circle.center + circle.radius * unit_from_angle(param);
        }
        return hull.point_at(param);
    }

    double heading_at(double param, RotDir dir) const {
        if (kind == Kind::VisitingCircle) return heading_on_circle(param, dir);
        return hull.heading_at(param, dir);
    }

    /// Boundary length walked from `from` to `to` in `dir`, in meters.
    /// Coincident endpoints rounded across each other must read as zero, not
    /// as a whole turn.
    double traverse_length(double from, double to, RotDir dir) const {
        if (kind == Kind::VisitingCircle) {
            double sweep = dir == RotDir::CCW ? ccw_sweep(from, to) : ccw_sweep(to, from);
            if (sweep > kTwoPi - 1e-12) sweep = 0.0;
            return circle.radius * sweep;
        }
        return hull.traverse_length(from, to, dir);
    }

    double param_distance(double a, double b) const {
        // Shortest boundary distance between two parameters, in meters.
        const double fwd = traverse_length(a, b, RotDir::CCW);
        const double bwd = traverse_length(a, b, RotDir::CW);
        return std::min(fwd, bwd);
    }

    /// Distance from a segment to the element's forbidden interior boundary:
    /// the visiting circle itself, or the grown hull.
    double clearance(Point a, Point b) const {
        if (kind == Kind::VisitingCircle) {
            return point_segment_distance(circle.center, a, b) - circle.radius;
        }
        return segment_polygon_distance(a, b, hull.core()) - hull.margin();
    }
};

// ---------------------------------------------------------------------------
// Graph pieces
// ---------------------------------------------------------------------------

struct GraphVertex {
    int element = -1;
    double param = 0.0;
    Point position;
};

/// A directed tangent edge: departing `from_element` rotating `from_dir`,
/// arriving on `to_element` rotating `to_dir`, heading equal to the segment
/// direction at both ends.
struct GraphTangent {
    int from_element = -1;
    int to_element = -1;
    double from_param = 0.0;
    double to_param = 0.0;
    Point from_point, to_point;
    RotDir from_dir = RotDir::CCW;
    RotDir to_dir = RotDir::CCW;
    double heading = 0.0;
    double length = 0.0;
};

struct GraphArc {
    int element = -1;
    int v_from = -1;  // vertex indices
    int v_to = -1;
    RotDir direction = RotDir::CCW;
    double length = 0.0;  // raw geometric length, no adjustment
};

/// Reading adjustment parameters for one node: the on-circle length l_i is
/// a * (2*pi*R_min) + b with 0 <= b < 2*pi*R_min.
struct AdjustmentParams {
    int full_turns = 0;   // a
    double residual = 0.0;  // b, meters
};

inline AdjustmentParams adjustment_params(const SensorNode& node, const RobotParams& robot,
                                          const RadioModel& radio) {
    const double l = required_contact(node, robot, radio).length_m;
    const double circumference = kTwoPi * robot.r_min();
    AdjustmentParams p;
    p.full_turns = static_cast<int>(std::floor(l / circumference));
    p.residual = l - p.full_turns * circumference;
    return p;
}

/// Adjusted length of a contact arc of raw length `raw` on a visiting circle:
/// the robot makes a or a+1 extra turns so the dwell covers l_i.
inline double adjusted_arc_length(double raw, const AdjustmentParams& adj, double r_min) {
    const double circumference = kTwoPi * r_min;
    if (adj.residual <= raw) return adj.full_turns * circumference + raw;
    return (adj.full_turns + 1) * circumference + raw;
}

inline int adjustment_extra_turns(double raw, const AdjustmentParams& adj) {
    return adj.residual <= raw ? adj.full_turns : adj.full_turns + 1;
}

/// Reading adjustment applied to a whole arc object.
inline Arc adjust_arc(const Arc& arc, const SensorNode& node, const RobotParams& robot,
                      const RadioModel& radio) {
    const double r = robot.r_min();
    if (distance(arc.circle.center, node.location) > 1e-9 * std::max(1.0, r) ||
        std::abs(arc.circle.radius - r) > 1e-9 * std::max(1.0, r)) {
        throw ArcNotOnVisitingCircle("arc does not lie on the node's visiting circle");
    }
    const AdjustmentParams adj = adjustment_params(node, robot, radio);
    Arc out = arc;
    out.length = adjusted_arc_length(arc.length, adj, r);
    return out;
}

// ---------------------------------------------------------------------------
// Tangent graph
// ---------------------------------------------------------------------------

struct TangentGraph {
    std::vector<Element> elements;  // circles first (one per node), then hulls
    std::vector<GraphVertex> vertices;
    std::vector<GraphTangent> tangents;  // both orientations of every tangent
    std::vector<GraphArc> arcs;          // between consecutive tangent points
    std::vector<AdjustmentParams> adjustment_by_node;
    double r_min = 0.0;
    double eps = 1e-9;

    int circle_count = 0;  // elements [0, circle_count) are visiting circles

    std::vector<const GraphTangent*> tangents_between(int from, int to) const {
        std::vector<const GraphTangent*> out;
        for (const auto& t : tangents) {
            if (t.from_element == from && t.to_element == to) out.push_back(&t);
        }
        return out;
    }

    const AdjustmentParams& adjustment_for_element(int element) const {
        static const AdjustmentParams none{};
        const Element& e = elements[static_cast<size_t>(element)];
        if (e.kind != Element::Kind::VisitingCircle) return none;
        return adjustment_by_node[static_cast<size_t>(e.node_index)];
    }

    /// Contact-arc length from `from` to `to` on `element` walking `dir`,
    /// with the reading adjustment applied once to the whole traversal.
    double adjusted_traverse(int element, double from, double to, RotDir dir) const {
        const Element& e = elements[static_cast<size_t>(element)];
        const double raw = e.traverse_length(from, to, dir);
        if (e.kind != Element::Kind::VisitingCircle) return raw;
        return adjusted_arc_length(raw, adjustment_for_element(element), r_min);
    }
};

namespace detail {

// Classify the rotation sense at a tangency from the segment heading; returns
// false when the heading is not tangent (degenerate candidate).
inline bool classify_dir(const Element& e, double param, double heading, RotDir* out) {
    for (RotDir d : {RotDir::CCW, RotDir::CW}) {
        if (angle_distance(heading, e.heading_at(param, d)) < 1e-5) {
            *out = d;
            return true;
        }
    }
    return false;
}

struct RawTangent {
    int e1 = -1, e2 = -1;
    double p1 = 0.0, p2 = 0.0;
    Point q1, q2;
};

// Candidate common tangents between two elements, before blocking checks.
// Hull tangencies are exact tangencies to a corner circle whose tangency
// angle falls inside that corner's arc span.
inline void collect_candidates(const TangentGraph& g, int i, int j,
                               std::vector<RawTangent>& out) {
    const Element& a = g.elements[static_cast<size_t>(i)];
    const Element& b = g.elements[static_cast<size_t>(j)];
    const double eps = g.eps;

    struct Side {
        Circle circle;
        bool is_hull_corner = false;
        int corner = -1;
    };
    std::vector<Side> sides_a, sides_b;
    if (a.kind == Element::Kind::VisitingCircle) {
        sides_a.push_back({a.circle, false, -1});
    } else {
        for (int k = 0; k < static_cast<int>(a.hull.core().size()); ++k) {
            sides_a.push_back({a.hull.corner_circle(k), true, k});
        }
    }
    if (b.kind == Element::Kind::VisitingCircle) {
        sides_b.push_back({b.circle, false, -1});
    } else {
        for (int k = 0; k < static_cast<int>(b.hull.core().size()); ++k) {
            sides_b.push_back({b.hull.corner_circle(k), true, k});
        }
    }

    for (const Side& sa : sides_a) {
        for (const Side& sb : sides_b) {
            std::vector<TangentSegment> segs;
            try {
                segs = tangents_circle_circle(sa.circle, sb.circle, eps);
            } catch (const CirclesOverlap&) {
                continue;  // corner circles of nearby hulls may overlap
            }
            for (const auto& s : segs) {
                RawTangent rt;
                rt.e1 = i;
                rt.e2 = j;
                rt.q1 = s.from;
                rt.q2 = s.to;
                const double ang1 = angle_of(s.from - sa.circle.center);
                const double ang2 = angle_of(s.to - sb.circle.center);
                if (sa.is_hull_corner) {
                    const double tol = eps / std::max(1e-12, a.hull.margin()) + 1e-9;
                    if (!a.hull.angle_in_corner_span(sa.corner, ang1, tol)) continue;
                    rt.p1 = a.hull.param_at_corner(sa.corner, ang1);
                } else {
                    rt.p1 = ang1;
                }
                if (sb.is_hull_corner) {
                    const double tol = eps / std::max(1e-12, b.hull.margin()) + 1e-9;
                    if (!b.hull.angle_in_corner_span(sb.corner, ang2, tol)) continue;
                    rt.p2 = b.hull.param_at_corner(sb.corner, ang2);
                } else {
                    rt.p2 = ang2;
                }
                out.push_back(rt);
            }
        }
    }
}

}  // namespace detail

/// Build the tangent graph. Candidate tangents are dropped when they pass
/// within eps of any element other than the two they touch.
inline TangentGraph build_tangent_graph(const Scenario& s) {
    if (!validate(s).empty()) {
        throw InvalidScenario("scenario violates placement assumptions");
    }
    TangentGraph g;
    g.r_min = s.r_min();
    g.eps = s.tangency_eps();
    g.circle_count = static_cast<int>(s.nodes.size());

    for (size_t i = 0; i < s.nodes.size(); ++i) {
        Element e;
        e.kind = Element::Kind::VisitingCircle;
        e.node_index = static_cast<int>(i);
        e.circle = s.nodes[i].visiting_circle(g.r_min);
        g.elements.push_back(std::move(e));
    }
    for (size_t i = 0; i < s.obstacles.size(); ++i) {
        Element e;
        e.kind = Element::Kind::ObstacleHull;
        e.obstacle_index = static_cast<int>(i);
        e.hull = s.obstacles[i].hull;
        g.elements.push_back(std::move(e));
    }
    for (const auto& n : s.nodes) {
        g.adjustment_by_node.push_back(adjustment_params(n, s.robot, s.radio));
    }

    // Candidate tangents per element pair, then blocking checks against every
    // other element. Contact with a third element within eps counts as
    // intersection and drops the tangent.
    const int m = static_cast<int>(g.elements.size());
    std::vector<detail::RawTangent> raw;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            detail::collect_candidates(g, i, j, raw);
        }
    }

    std::vector<detail::RawTangent> valid;
    for (const auto& rt : raw) {
        bool ok = true;
        for (int k = 0; k < m && ok; ++k) {
            const double c = g.elements[static_cast<size_t>(k)].clearance(rt.q1, rt.q2);
            if (k == rt.e1 || k == rt.e2) {
                if (c < -g.eps) ok = false;  // own tangency sits at zero clearance
            } else {
                if (c <= g.eps) ok = false;
            }
        }
        if (ok) valid.push_back(rt);
    }

    // Vertices: merge tangency points closer than eps on the same element.
    std::vector<std::vector<int>> by_element(static_cast<size_t>(m));
    const auto vertex_id = [&](int element, double param, Point pos) {
        for (int k : by_element[static_cast<size_t>(element)]) {
            if (distance(g.vertices[static_cast<size_t>(k)].position, pos) <= g.eps) return k;
        }
        g.vertices.push_back({element, param, pos});
        const int id = static_cast<int>(g.vertices.size()) - 1;
        by_element[static_cast<size_t>(element)].push_back(id);
        return id;
    };

    for (const auto& rt : valid) {
        vertex_id(rt.e1, rt.p1, rt.q1);
        vertex_id(rt.e2, rt.p2, rt.q2);
        const double h_fwd = angle_of(rt.q2 - rt.q1);
        const double h_bwd = normalize_angle(h_fwd + kPi);
        const Element& ea = g.elements[static_cast<size_t>(rt.e1)];
        const Element& eb = g.elements[static_cast<size_t>(rt.e2)];
        GraphTangent fwd;
        fwd.from_element = rt.e1;
        fwd.to_element = rt.e2;
        fwd.from_param = rt.p1;
        fwd.to_param = rt.p2;
        fwd.from_point = rt.q1;
        fwd.to_point = rt.q2;
        fwd.heading = h_fwd;
        fwd.length = distance(rt.q1, rt.q2);
        if (!detail::classify_dir(ea, rt.p1, h_fwd, &fwd.from_dir)) continue;
        if (!detail::classify_dir(eb, rt.p2, h_fwd, &fwd.to_dir)) continue;
        GraphTangent bwd = fwd;
        std::swap(bwd.from_element, bwd.to_element);
        std::swap(bwd.from_param, bwd.to_param);
        std::swap(bwd.from_point, bwd.to_point);
        bwd.heading = h_bwd;
        bwd.from_dir = opposite(fwd.to_dir);
        bwd.to_dir = opposite(fwd.from_dir);
        g.tangents.push_back(fwd);
        g.tangents.push_back(bwd);
    }

    // Arc edges between angularly consecutive tangent points on each element,
    // both walking senses.
    for (int e = 0; e < m; ++e) {
        std::vector<int> on_elem = by_element[static_cast<size_t>(e)];
        std::sort(on_elem.begin(), on_elem.end(), [&](int x, int y) {
            return g.vertices[static_cast<size_t>(x)].param < g.vertices[static_cast<size_t>(y)].param;
        });
        const size_t cnt = on_elem.size();
        if (cnt < 2) continue;
        for (size_t k = 0; k < cnt; ++k) {
            const int va = on_elem[k];
            const int vb = on_elem[(k + 1) % cnt];
            const Element& el = g.elements[static_cast<size_t>(e)];
            const double len = el.traverse_length(g.vertices[static_cast<size_t>(va)].param,
                                                  g.vertices[static_cast<size_t>(vb)].param,
                                                  RotDir::CCW);
            g.arcs.push_back({e, va, vb, RotDir::CCW, len});
            g.arcs.push_back({e, vb, va, RotDir::CW, len});
        }
    }
    return g;
}

/// Debug export: vertex rows then edge rows.
inline std::string graph_to_csv(const TangentGraph& g) {
    std::string out = "kind,element_id,from,to,x,y,length_m\n";
    char buf[240];
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        const auto& v = g.vertices[i];
        std::snprintf(buf, sizeof(buf), "vertex,%d,%zu,,%.9f,%.9f,\n", v.element, i, v.position.x,
                      v.position.y);
        out += buf;
    }
    for (const auto& t : g.tangents) {
        std::snprintf(buf, sizeof(buf), "tangent,,%d,%d,,,%.9f\n", t.from_element, t.to_element,
                      t.length);
        out += buf;
    }
    for (const auto& a : g.arcs) {
        std::snprintf(buf, sizeof(buf), "arc,%d,%d,%d,,,%.9f\n", a.element, a.v_from, a.v_to,
                      a.length);
        out += buf;
    }
    return out;
}

}  // namespace viaplan
