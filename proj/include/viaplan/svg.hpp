#pragma once

// SVG rendering of scenes and planned paths. The y axis is flipped so the
// pictures match plot conventions (y up). Every path segment becomes one
// <path> element.

#include <cstdio>
#include <string>
#include <vector>

#include "viaplan/path.hpp"
#include "viaplan/scene.hpp"
#include "viaplan/threat.hpp"

namespace viaplan {

namespace svg_detail {

struct Mapper {
    double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;

    void grow(Point p, double r = 0.0) {
        min_x = std::min(min_x, p.x - r);
        max_x = std::max(max_x, p.x + r);
        min_y = std::min(min_y, p.y - r);
        max_y = std::max(max_y, p.y + r);
    }
    void init(Point p) {
        min_x = max_x = p.x;
        min_y = max_y = p.y;
    }
    // flip y so larger y renders higher
    double X(double x) const { return x; }
    double Y(double y) const { return (max_y + min_y) - y; }
};

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline void append_segment(const Mapper& m, const PathSegment& seg, const std::string& color,
                           std::string* out) {
    if (seg.kind == PathSegment::Kind::Line) {
        *out += "<path d=\"M " + fmt(m.X(seg.a.x)) + " " + fmt(m.Y(seg.a.y)) + " L " +
                fmt(m.X(seg.b.x)) + " " + fmt(m.Y(seg.b.y)) + "\" stroke=\"" + color +
                "\" fill=\"none\" stroke-width=\"0.6\"/>\n";
        return;
    }
    const double a0 = angle_of(seg.a - seg.center);
    const double a1 = angle_of(seg.b - seg.center);
    const double sweep =
        seg.direction == RotDir::CCW ? ccw_sweep(a0, a1) : ccw_sweep(a1, a0);
    // flipped y turns mathematical ccw into svg sweep=1
    const int svg_sweep = seg.direction == RotDir::CCW ? 1 : 0;
    const std::string r = fmt(seg.radius);
    if (sweep < 1e-9 && seg.extra_turns == 0) return;
    std::string d = "M " + fmt(m.X(seg.a.x)) + " " + fmt(m.Y(seg.a.y)) + " ";
    if (sweep < 1e-9 || seg.extra_turns > 0) {
        // full circle via two half arcs, drawn once
        const Point mid = seg.center + (seg.center - seg.a);
        d += "A " + r + " " + r + " 0 0 " + std::to_string(svg_sweep) + " " + fmt(m.X(mid.x)) +
             " " + fmt(m.Y(mid.y)) + " ";
        d += "A " + r + " " + r + " 0 0 " + std::to_string(svg_sweep) + " " + fmt(m.X(seg.a.x)) +
             " " + fmt(m.Y(seg.a.y)) + " ";
    }
    if (sweep >= 1e-9) {
        const int large = sweep > kPi ? 1 : 0;
        d += "A " + r + " " + r + " 0 " + std::to_string(large) + " " +
             std::to_string(svg_sweep) + " " + fmt(m.X(seg.b.x)) + " " + fmt(m.Y(seg.b.y));
    }
    *out += "<path d=\"" + d + "\" stroke=\"" + color + "\" fill=\"none\" stroke-width=\"0.6\"/>\n";
}

inline std::string document(const Mapper& m, const std::string& body) {
    const double pad = 0.05 * std::max(m.max_x - m.min_x, m.max_y - m.min_y) + 2.0;
    const double w = m.max_x - m.min_x + 2.0 * pad;
    const double h = m.max_y - m.min_y + 2.0 * pad;
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(m.min_x - pad) + " " +
           fmt(m.min_y - pad) + " " + fmt(w) + " " + fmt(h) + "\">\n";
    out += body;
    out += "</svg>\n";
    return out;
}

}  // namespace svg_detail

/// Scene plus any number of planned tours.
inline std::string render_svg(const Scenario& s, const std::vector<const ViablePath*>& paths) {
    svg_detail::Mapper m;
    m.init(s.initial_config.position);
    const double r = s.r_min();
    for (const auto& n : s.nodes) m.grow(n.location, r);
    for (const auto& o : s.obstacles) {
        for (const Point& p : o.hull.sample(1.0)) m.grow(p);
    }

    std::string body;
    for (const auto& o : s.obstacles) {
        std::string d;
        const auto& raw = o.raw_shape;
        for (size_t i = 0; i < raw.size(); ++i) {
            d += (i == 0 ? "M " : "L ") + svg_detail::fmt(m.X(raw[i].x)) + " " +
                 svg_detail::fmt(m.Y(raw[i].y)) + " ";
        }
        d += "Z";
        body += "<path d=\"" + d + "\" fill=\"#c8c8c8\" stroke=\"#707070\" stroke-width=\"0.4\"/>\n";
        std::string h;
        const auto hull_pts = o.hull.sample(std::max(0.25, o.d_safe / 8.0));
        for (size_t i = 0; i < hull_pts.size(); ++i) {
            h += (i == 0 ? "M " : "L ") + svg_detail::fmt(m.X(hull_pts[i].x)) + " " +
                 svg_detail::fmt(m.Y(hull_pts[i].y)) + " ";
        }
        h += "Z";
        body += "<path d=\"" + h +
                "\" fill=\"none\" stroke=\"#a0a0a0\" stroke-width=\"0.3\" stroke-dasharray=\"1,1\"/>\n";
    }
    for (const auto& n : s.nodes) {
        body += "<circle cx=\"" + svg_detail::fmt(m.X(n.location.x)) + "\" cy=\"" +
                svg_detail::fmt(m.Y(n.location.y)) + "\" r=\"" + svg_detail::fmt(r) +
                "\" fill=\"none\" stroke=\"#4080c0\" stroke-width=\"0.3\"/>\n";
        body += "<circle cx=\"" + svg_detail::fmt(m.X(n.location.x)) + "\" cy=\"" +
                svg_detail::fmt(m.Y(n.location.y)) +
                "\" r=\"0.8\" fill=\"#4080c0\" stroke=\"none\"/>\n";
    }
    static const char* kColors[] = {"#d03030", "#309040", "#9040c0", "#c08020", "#2090a0"};
    for (size_t p = 0; p < paths.size(); ++p) {
        for (const auto& seg : paths[p]->segments) {
            svg_detail::append_segment(m, seg, kColors[p % 5], &body);
        }
    }
    return svg_detail::document(m, body);
}

inline std::string render_svg(const Scenario& s, const ViablePath& path) {
    return render_svg(s, std::vector<const ViablePath*>{&path});
}

/// Threat scene: region, agent circles at full and shrunk radii, the path.
inline std::string render_threat_svg(const ThreatScenario& ts, const ViablePath* path,
                                     double theta) {
    svg_detail::Mapper m;
    m.init(ts.start.position);
    m.grow(ts.goal);
    if (ts.region.kind == RegionBoundary::Kind::Circle) {
        m.grow(ts.region.circle.center, ts.region.circle.radius);
    } else {
        for (const Point& p : ts.region.polygon) m.grow(p);
    }

    std::string body;
    if (ts.region.kind == RegionBoundary::Kind::Circle) {
        body += "<circle cx=\"" + svg_detail::fmt(m.X(ts.region.circle.center.x)) + "\" cy=\"" +
                svg_detail::fmt(m.Y(ts.region.circle.center.y)) + "\" r=\"" +
                svg_detail::fmt(ts.region.circle.radius) +
                "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"0.5\"/>\n";
    } else {
        std::string d;
        for (size_t i = 0; i < ts.region.polygon.size(); ++i) {
            d += (i == 0 ? "M " : "L ") + svg_detail::fmt(m.X(ts.region.polygon[i].x)) + " " +
                 svg_detail::fmt(m.Y(ts.region.polygon[i].y)) + " ";
        }
        d += "Z";
        body += "<path d=\"" + d + "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"0.5\"/>\n";
    }
    for (const auto& a : ts.agents) {
        body += "<circle cx=\"" + svg_detail::fmt(m.X(a.position.x)) + "\" cy=\"" +
                svg_detail::fmt(m.Y(a.position.y)) + "\" r=\"" + svg_detail::fmt(a.radius) +
                "\" fill=\"#f0d0d0\" fill-opacity=\"0.5\" stroke=\"#c06060\" stroke-width=\"0.3\"/>\n";
        if (theta > 0.0 && a.level(0.0) >= theta) {
            body += "<circle cx=\"" + svg_detail::fmt(m.X(a.position.x)) + "\" cy=\"" +
                    svg_detail::fmt(m.Y(a.position.y)) + "\" r=\"" +
                    svg_detail::fmt(shrunk_radius(a, theta)) +
                    "\" fill=\"none\" stroke=\"#c06060\" stroke-width=\"0.4\" stroke-dasharray=\"2,1\"/>\n";
        }
    }
    body += "<circle cx=\"" + svg_detail::fmt(m.X(ts.start.position.x)) + "\" cy=\"" +
            svg_detail::fmt(m.Y(ts.start.position.y)) + "\" r=\"1.2\" fill=\"#309040\"/>\n";
    body += "<circle cx=\"" + svg_detail::fmt(m.X(ts.goal.x)) + "\" cy=\"" +
            svg_detail::fmt(m.Y(ts.goal.y)) + "\" r=\"1.2\" fill=\"#d03030\"/>\n";
    if (path != nullptr) {
        for (const auto& seg : path->segments) {
            svg_detail::append_segment(m, seg, "#d03030", &body);
        }
    }
    return svg_detail::document(m, body);
}

}  // namespace viaplan
