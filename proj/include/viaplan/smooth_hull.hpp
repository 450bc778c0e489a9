#pragma once

// Smooth convex safety boundary around an obstacle: the convex hull of the
// raw shape grown by the safety margin. The grown boundary is an exact
// arc-line curve (circular arcs of the margin radius around hull corners,
// joined by offset edges), parameterized by arc length. Planners take exact
// tangencies against the corner circles, so paths that follow the boundary
// keep machine-precision heading continuity.

#include <cstddef>
#include <vector>

#include "viaplan/geometry.hpp"

namespace viaplan {

class SmoothHull {
public:
    struct ArcPiece {
        int corner = 0;      // index into core()
        double a0 = 0.0;     // polar angles on the corner circle, ccw sweep
        double a1 = 0.0;
        double s0 = 0.0;     // arc-length offset of the piece start
        double len = 0.0;
    };
    struct LinePiece {
        Point p0, p1;
        double s0 = 0.0;
        double len = 0.0;
    };
    struct Piece {
        bool is_arc = true;
        ArcPiece arc;
        LinePiece line;
        double s0() const { return is_arc ? arc.s0 : line.s0; }
        double len() const { return is_arc ? arc.len : line.len; }
    };

    SmoothHull() = default;

    /// Build from the raw shape samples and margin; the core polygon is the
    /// monotone-chain hull of the samples.
    SmoothHull(const std::vector<Point>& raw_shape, double margin)
        : core_(convex_hull(raw_shape)), margin_(margin) {
        build_pieces();
    }

    const std::vector<Point>& core() const { return core_; }
    double margin() const { return margin_; }
    double perimeter() const { return perimeter_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    Circle corner_circle(int i) const { return {core_[static_cast<size_t>(i)], margin_}; }

    /// Angular span [a0, a1] (ccw) covered by the corner's arc piece.
    bool angle_in_corner_span(int corner, double angle, double tol) const {
        const ArcPiece& a = arc_of_corner_[static_cast<size_t>(corner)];
        const double rel = ccw_sweep(a.a0, angle);
        const double span = ccw_sweep(a.a0, a.a1);
        if (span == 0.0 && pieces_.size() == 1) return true;  // full circle
        return rel <= span + tol || rel >= kTwoPi - tol;
    }

    /// Arc-length parameter of a point at `angle` on the given corner circle;
    /// angles within tolerance outside the span clamp to the nearer edge.
    double param_at_corner(int corner, double angle) const {
        const ArcPiece& a = arc_of_corner_[static_cast<size_t>(corner)];
        double rel = ccw_sweep(a.a0, angle);
        if (pieces_.size() > 1) {
            const double span = ccw_sweep(a.a0, a.a1);
            if (rel > span) rel = (rel - span < kTwoPi - rel) ? span : 0.0;
        }
        return wrap_param(a.s0 + margin_ * rel);
    }

    Point point_at(double s) const {
        const Piece& pc = piece_at(s);
        const double t = wrap_param(s) - pc.s0();
        if (pc.is_arc) {
            const double ang = pc.arc.a0 + t / margin_;
            return core_[static_cast<size_t>(pc.arc.corner)] + margin_ * unit_from_angle(ang);
        }
        const Vec2 d = (pc.line.p1 - pc.line.p0).normalized();
        return pc.line.p0 + t * d;
    }

    /// Heading when traversing the boundary at parameter s. RotDir::CCW walks
    /// with increasing s.
    double heading_at(double s, RotDir dir) const {
        const Piece& pc = piece_at(s);
        const double t = wrap_param(s) - pc.s0();
        double h;
        if (pc.is_arc) {
            const double ang = pc.arc.a0 + t / margin_;
            h = heading_on_circle(ang, RotDir::CCW);
        } else {
            h = angle_of(pc.line.p1 - pc.line.p0);
        }
        return dir == RotDir::CCW ? h : normalize_angle(h + kPi);
    }

    /// Boundary length from `s_from` to `s_to` walking in `dir`. Coincident
    /// endpoints rounded across each other read as zero, not a whole lap.
    double traverse_length(double s_from, double s_to, RotDir dir) const {
        const double a = wrap_param(s_from);
        const double b = wrap_param(s_to);
        double d = dir == RotDir::CCW ? b - a : a - b;
        d = std::fmod(d, perimeter_);
        if (d < 0.0) d += perimeter_;
        if (d > perimeter_ - 1e-9) d = 0.0;
        return d;
    }

    /// Uniform boundary sampling (for validation and rendering).
    std::vector<Point> sample(double max_spacing) const {
        const int n = std::max(8, static_cast<int>(std::ceil(perimeter_ / max_spacing)));
        std::vector<Point> out;
        out.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            out.push_back(point_at(perimeter_ * static_cast<double>(i) / n));
        }
        return out;
    }

    /// Distance from a segment to the grown region (0 if it enters).
    double distance_to_segment(Point a, Point b) const {
        return std::max(0.0, segment_polygon_distance(a, b, core_) - margin_);
    }

    double distance_to_point(Point p) const {
        if (core_.size() == 1) return std::max(0.0, distance(p, core_[0]) - margin_);
        double best = std::numeric_limits<double>::infinity();
        const size_t n = core_.size();
        const size_t edges = n == 2 ? 1 : n;
        bool inside = n >= 3;
        for (size_t i = 0; i < edges; ++i) {
            const Point q0 = core_[i];
            const Point q1 = core_[(i + 1) % n];
            best = std::min(best, point_segment_distance(p, q0, q1));
            if (n >= 3 && (q1 - q0).cross(p - q0) < 0.0) inside = false;
        }
        if (inside) return 0.0;
        return std::max(0.0, best - margin_);
    }

    double wrap_param(double s) const {
        s = std::fmod(s, perimeter_);
        if (s < 0.0) s += perimeter_;
        return s;
    }

    int piece_index_at(double s) const {
        s = wrap_param(s);
        // pieces are few; linear scan keeps this simple
        for (size_t i = pieces_.size(); i-- > 0;) {
            if (pieces_[i].s0() <= s + 1e-12) return static_cast<int>(i);
        }
        return 0;
    }

private:
    const Piece& piece_at(double s) const {
        return pieces_[static_cast<size_t>(piece_index_at(s))];
    }

    void build_pieces() {
        pieces_.clear();
        perimeter_ = 0.0;
        const size_t m = core_.size();
        arc_of_corner_.resize(m);
        if (m == 0) return;
        if (m == 1) {
            Piece p;
            p.is_arc = true;
            p.arc = {0, normalize_angle(-kPi), normalize_angle(-kPi), 0.0, kTwoPi * margin_};
            p.arc.a0 = kPi;  // full turn starting anywhere
            p.arc.a1 = kPi;
            pieces_.push_back(p);
            arc_of_corner_[0] = p.arc;
            perimeter_ = p.arc.len;
            return;
        }
        // Outward normal angle of edge i (core_[i] -> core_[i+1]); ccw core,
        // interior on the left, so outward is the right-hand normal.
        const auto edge_normal_angle = [&](size_t i) {
            const Vec2 d = core_[(i + 1) % m] - core_[i];
            return angle_of(Vec2{d.y, -d.x});
        };
        double s = 0.0;
        for (size_t i = 0; i < m; ++i) {
            const size_t prev = (i + m - 1) % m;
            const double n_in = edge_normal_angle(prev);
            const double n_out = edge_normal_angle(i);
            Piece arc;
            arc.is_arc = true;
            arc.arc.corner = static_cast<int>(i);
            arc.arc.a0 = n_in;
            arc.arc.a1 = n_out;
            arc.arc.s0 = s;
            arc.arc.len = margin_ * ccw_sweep(n_in, n_out);
            s += arc.arc.len;
            pieces_.push_back(arc);
            arc_of_corner_[i] = arc.arc;

            Piece line;
            line.is_arc = false;
            const Vec2 n = unit_from_angle(n_out);
            line.line.p0 = core_[i] + margin_ * n;
            line.line.p1 = core_[(i + 1) % m] + margin_ * n;
            line.line.s0 = s;
            line.line.len = distance(line.line.p0, line.line.p1);
            s += line.line.len;
            pieces_.push_back(line);
        }
        perimeter_ = s;
    }

    std::vector<Point> core_;
    double margin_ = 0.0;
    std::vector<Piece> pieces_;
    std::vector<ArcPiece> arc_of_corner_;
    double perimeter_ = 0.0;
};

}  // namespace viaplan
