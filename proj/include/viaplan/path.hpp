#pragma once

// Path representation shared by the tour planners and the threat planner:
// an ordered run of exact primitives (straight lines and circular arcs).
// Arc lengths may include whole extra turns added by the reading adjustment,
// so an arc's length can exceed one circumference.

#include <cstdio>
#include <string>
#include <vector>

#include "viaplan/geometry.hpp"

namespace viaplan {

struct PathSegment {
    enum class Kind { Line, Arc };

    Kind kind = Kind::Line;
    Point a, b;  // endpoints; for arcs these lie on the circle

    // Arc fields.
    Point center;
    double radius = 0.0;
    RotDir direction = RotDir::CCW;
    int extra_turns = 0;  // whole 2*pi turns beyond the geometric sweep

    double length = 0.0;
    int contact_node = -1;  // node index when the arc lies on a visiting circle

    static PathSegment line(Point a, Point b) {
        PathSegment s;
        s.kind = Kind::Line;
        s.a = a;
        s.b = b;
        s.length = distance(a, b);
        return s;
    }

    static PathSegment arc(const Circle& c, Point a, Point b, RotDir dir, int extra_turns = 0,
                           int contact_node = -1) {
        PathSegment s;
        s.kind = Kind::Arc;
        s.a = a;
        s.b = b;
        s.center = c.center;
        s.radius = c.radius;
        s.direction = dir;
        s.extra_turns = extra_turns;
        const double sweep = dir == RotDir::CCW
                                 ? ccw_sweep(angle_of(a - c.center), angle_of(b - c.center))
                                 : ccw_sweep(angle_of(b - c.center), angle_of(a - c.center));
        s.length = c.radius * (sweep + kTwoPi * extra_turns);
        s.contact_node = contact_node;
        return s;
    }

    double start_heading() const {
        if (kind == Kind::Line) return angle_of(b - a);
        return heading_on_circle(angle_of(a - center), direction);
    }

    double end_heading() const {
        if (kind == Kind::Line) return angle_of(b - a);
        return heading_on_circle(angle_of(b - center), direction);
    }

    /// Position after walking `s` meters from the start (s in [0, length]).
    Point point_at(double s) const {
        if (kind == Kind::Line) {
            const double t = length > 0.0 ? s / length : 0.0;
            return a + t * (b - a);
        }
        const double a0 = angle_of(a - center);
        const double ang = a0 + rot_sign(direction) * (s / radius);
        return center + radius * unit_from_angle(ang);
    }

    /// Unit velocity direction after walking `s` meters from the start.
    double heading_at(double s) const {
        if (kind == Kind::Line) return angle_of(b - a);
        const double a0 = angle_of(a - center);
        const double ang = a0 + rot_sign(direction) * (s / radius);
        return heading_on_circle(normalize_angle(ang), direction);
    }
};

struct ViablePath {
    std::vector<PathSegment> segments;
    double total_length = 0.0;
    std::vector<double> contact_length_by_node;  // on-circle meters per node index

    void push(PathSegment s) {
        total_length += s.length;
        if (s.contact_node >= 0) {
            if (contact_length_by_node.size() <= static_cast<size_t>(s.contact_node)) {
                contact_length_by_node.resize(static_cast<size_t>(s.contact_node) + 1, 0.0);
            }
            contact_length_by_node[static_cast<size_t>(s.contact_node)] += s.length;
        }
        segments.push_back(std::move(s));
    }

    Point start() const { return segments.front().a; }
    Point end() const { return segments.back().b; }
};

/// CSV rows: kind, x0, y0, x1, y1, cx, cy, r, dir, length_m
inline std::string path_to_csv(const ViablePath& path) {
    std::string out = "kind,x0,y0,x1,y1,cx,cy,r,dir,length_m\n";
    char buf[320];
    for (const auto& s : path.segments) {
        if (s.kind == PathSegment::Kind::Line) {
            std::snprintf(buf, sizeof(buf), "line,%.9f,%.9f,%.9f,%.9f,,,,,%.9f\n", s.a.x, s.a.y,
                          s.b.x, s.b.y, s.length);
        } else {
            std::snprintf(buf, sizeof(buf), "arc,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%s,%.9f\n",
                          s.a.x, s.a.y, s.b.x, s.b.y, s.center.x, s.center.y, s.radius,
                          s.direction == RotDir::CCW ? "ccw" : "cw", s.length);
        }
        out += buf;
    }
    return out;
}

}  // namespace viaplan
