#pragma once

// Planar primitives shared by every planner in this library: points, poses,
// circles, sampled convex boundaries, arcs, and the closed-form tangent
// constructions between them. All functions are pure; tolerances are explicit.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace viaplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointInsideCircle : Error { using Error::Error; };
struct DegenerateTangency : Error { using Error::Error; };
struct CirclesOverlap : Error { using Error::Error; };
struct PointInsideBoundary : Error { using Error::Error; };
struct BoundariesOverlap : Error { using Error::Error; };
struct PointNotOnCircle : Error { using Error::Error; };
struct NonPositiveInput : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Vectors and angles
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    // Left-hand perpendicular (rotate +90 degrees).
    Vec2 perp() const { return {-y, x}; }
};

using Point = Vec2;

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Point a, Point b) { return (a - b).norm(); }

/// Normalize an angle into (-pi, pi].
inline double normalize_angle(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

inline double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

/// Counterclockwise sweep from a0 to a1, in [0, 2*pi).
inline double ccw_sweep(double a0, double a1) {
    double d = std::fmod(a1 - a0, kTwoPi);
    if (d < 0.0) d += kTwoPi;
    return d;
}

/// Absolute difference between two angles folded into [0, pi].
inline double angle_distance(double a, double b) {
    return std::abs(normalize_angle(a - b));
}

// ---------------------------------------------------------------------------
// Poses, circles, rotation sense
// ---------------------------------------------------------------------------

struct Configuration {
    Point position;
    double heading = 0.0;  // radians in (-pi, pi]

    Configuration() = default;
    Configuration(Point p, double theta) : position(p), heading(normalize_angle(theta)) {}
};

struct Circle {
    Point center;
    double radius = 1.0;

    bool contains(Point p, double eps = 0.0) const {
        return distance(p, center) < radius - eps;
    }
};

enum class RotDir { CCW, CW };

inline RotDir opposite(RotDir d) { return d == RotDir::CCW ? RotDir::CW : RotDir::CCW; }

inline double rot_sign(RotDir d) { return d == RotDir::CCW ? 1.0 : -1.0; }

/// Heading of a robot sitting on `c` at polar angle `phi`, rotating in `dir`.
inline double heading_on_circle(double phi, RotDir dir) {
    return normalize_angle(phi + rot_sign(dir) * kPi / 2.0);
}

/// Rotation sense implied by moving through a point on `c` with `heading`.
/// Returns the matching direction, or throws if the heading is not tangent.
inline RotDir rotation_from_heading(const Circle& c, Point p, double heading,
                                    double tol = 1e-6) {
    const double phi = angle_of(p - c.center);
    if (angle_distance(heading, heading_on_circle(phi, RotDir::CCW)) <= tol) return RotDir::CCW;
    if (angle_distance(heading, heading_on_circle(phi, RotDir::CW)) <= tol) return RotDir::CW;
    throw DegenerateTangency("heading is not tangent to the circle");
}

// ---------------------------------------------------------------------------
// Arcs
// ---------------------------------------------------------------------------

struct Arc {
    Circle circle;
    double start_angle = 0.0;
    double end_angle = 0.0;
    RotDir direction = RotDir::CCW;
    double length = 0.0;  // radius * swept angle, plus any whole extra turns

    Point start_point() const { return circle.center + circle.radius * unit_from_angle(start_angle); }
    Point end_point() const { return circle.center + circle.radius * unit_from_angle(end_angle); }
    double sweep() const {
        return direction == RotDir::CCW ? ccw_sweep(start_angle, end_angle)
                                        : ccw_sweep(end_angle, start_angle);
    }
};

/// Arc on `c` from `from` to `to` in the given rotation sense. Swept angle is
/// in [0, 2*pi); identical endpoints give a zero-length arc.
inline Arc arc_between(const Circle& c, Point from, Point to, RotDir dir,
                       double eps = 1e-9) {
    if (std::abs(distance(from, c.center) - c.radius) > eps ||
        std::abs(distance(to, c.center) - c.radius) > eps) {
        throw PointNotOnCircle("arc endpoint is not on the circle");
    }
    Arc arc;
    arc.circle = c;
    arc.start_angle = angle_of(from - c.center);
    arc.end_angle = angle_of(to - c.center);
    arc.direction = dir;
    arc.length = c.radius * arc.sweep();
    return arc;
}

// ---------------------------------------------------------------------------
// Robot kinematics
// ---------------------------------------------------------------------------

/// Minimum turning radius of a unicycle with speed `v` and angular rate cap `u_max`.
inline double min_turn_radius(double v, double u_max) {
    if (v <= 0.0 || u_max <= 0.0) {
        throw NonPositiveInput("speed and angular velocity must be positive");
    }
    return v / u_max;
}

// ---------------------------------------------------------------------------
// Tangent segments
// ---------------------------------------------------------------------------

struct TangentSegment {
    Point from;
    Point to;
    int from_element = -1;
    int to_element = -1;
    // Boundary-sample index when the endpoint is a convex-boundary vertex.
    int from_vertex = -1;
    int to_vertex = -1;
    double from_departure_heading = 0.0;
    double to_arrival_heading = 0.0;

    double length() const { return distance(from, to); }
};

inline TangentSegment make_segment(Point a, Point b) {
    TangentSegment s;
    s.from = a;
    s.to = b;
    const double h = angle_of(b - a);
    s.from_departure_heading = h;
    s.to_arrival_heading = h;
    return s;
}

/// Tangent points from an external point onto a circle, by the closed form
/// t = c + (R^2 d +- R sqrt(D^2-R^2) d_perp) / D^2 with d the center-to-point
/// offset. Returns segments from `p` to each tangent point.
inline std::array<TangentSegment, 2> tangents_point_circle(Point p, const Circle& c,
                                                           double eps = 1e-9) {
    const Vec2 d = p - c.center;
    const double dist2 = d.norm2();
    const double dist = std::sqrt(dist2);
    const double r = c.radius;
    if (std::abs(dist - r) <= eps) {
        throw DegenerateTangency("point lies on the circle");
    }
    if (dist < r) {
        throw PointInsideCircle("point lies inside the circle");
    }
    const double root = std::sqrt(std::max(0.0, dist2 - r * r));
    std::array<TangentSegment, 2> out;
    for (int k = 0; k < 2; ++k) {
        const double sgn = k == 0 ? 1.0 : -1.0;
        Point t{(r * r * d.x + sgn * r * d.y * root) / dist2 + c.center.x,
                (r * r * d.y - sgn * r * d.x * root) / dist2 + c.center.y};
        out[k] = make_segment(p, t);
    }
    return out;
}

namespace detail {

// Pair tangent points on two circles into lines through the homothety
// center `h`: matching points are collinear with h.
inline std::array<TangentSegment, 2> pair_through_point(
        Point h, const std::array<TangentSegment, 2>& on1,
        const std::array<TangentSegment, 2>& on2) {
    std::array<TangentSegment, 2> out;
    for (int i = 0; i < 2; ++i) {
        const Vec2 u = (on1[i].to - h).normalized();
        int best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 2; ++j) {
            const Vec2 w = (on2[j].to - h).normalized();
            const double err = std::abs(u.cross(w));
            if (err < best_err) {
                best_err = err;
                best = j;
            }
        }
        out[i] = make_segment(on1[i].to, on2[best].to);
    }
    return out;
}

}  // namespace detail

/// The four common tangents between two disjoint circles: two outer (through
/// the external homothety center, or parallel to the center line for equal
/// radii) and two inner (through the internal center). Segments run c1 -> c2.
inline std::vector<TangentSegment> tangents_circle_circle(const Circle& c1,
                                                          const Circle& c2,
                                                          double eps = 1e-9) {
    const double d = distance(c1.center, c2.center);
    if (d <= c1.radius + c2.radius + eps) {
        throw CirclesOverlap("circles are not disjoint");
    }
    std::vector<TangentSegment> out;
    out.reserve(4);

    if (std::abs(c1.radius - c2.radius) <= eps) {
        // Outer tangents are translates of the center line.
        const Vec2 u = (c2.center - c1.center) / d;
        const Vec2 n = u.perp();
        for (double sgn : {1.0, -1.0}) {
            const Vec2 off = sgn * c1.radius * n;
            out.push_back(make_segment(c1.center + off, c2.center + off));
        }
    } else {
        const double dr = c2.radius - c1.radius;
        const Point a{(c1.center.x * c2.radius - c2.center.x * c1.radius) / dr,
                      (c1.center.y * c2.radius - c2.center.y * c1.radius) / dr};
        const auto on1 = tangents_point_circle(a, c1, eps);
        const auto on2 = tangents_point_circle(a, c2, eps);
        for (auto& seg : detail::pair_through_point(a, on1, on2)) out.push_back(seg);
    }

    const double sr = c1.radius + c2.radius;
    const Point b{(c1.center.x * c2.radius + c2.center.x * c1.radius) / sr,
                  (c1.center.y * c2.radius + c2.center.y * c1.radius) / sr};
    const auto in1 = tangents_point_circle(b, c1, eps);
    const auto in2 = tangents_point_circle(b, c2, eps);
    for (auto& seg : detail::pair_through_point(b, in1, in2)) out.push_back(seg);
    return out;
}

// ---------------------------------------------------------------------------
// Sampled convex boundaries
// ---------------------------------------------------------------------------

/// Closed convex polyline, counterclockwise, sampled from a smooth curve.
struct ConvexBoundary {
    std::vector<Point> vertices;

    Point centroid() const {
        Point c{0.0, 0.0};
        for (const Point& v : vertices) c = c + v;
        return c / static_cast<double>(vertices.size());
    }

    bool contains(Point p, double eps = 0.0) const {
        const size_t n = vertices.size();
        for (size_t i = 0; i < n; ++i) {
            const Point& a = vertices[i];
            const Point& b = vertices[(i + 1) % n];
            if ((b - a).cross(p - a) < -eps) return false;
        }
        return true;
    }
};

/// Monotone-chain convex hull; returns a counterclockwise hull with strictly
/// convex corners (collinear points dropped).
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Point> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Circumscribed-circle radius of three consecutive samples; infinity for
/// collinear points. Used as the discrete curvature estimate 1/radius.
inline double circumradius(Point a, Point b, Point c) {
    const double cross = (b - a).cross(c - a);
    if (std::abs(cross) < 1e-300) return std::numeric_limits<double>::infinity();
    const double la = distance(a, b);
    const double lb = distance(b, c);
    const double lc = distance(c, a);
    return la * lb * lc / (2.0 * std::abs(cross));
}

namespace detail {

// Angles measured against a frame axis keep the candidate fan inside one
// half-plane, so max/min are wrap-free. The frame is the separating direction.
inline double frame_angle(Vec2 axis, Vec2 ray) {
    return normalize_angle(angle_of(ray) - angle_of(axis));
}

inline Point closest_boundary_point(const ConvexBoundary& b, Point p) {
    double best = std::numeric_limits<double>::infinity();
    Point out = b.vertices.front();
    const size_t n = b.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Point a = b.vertices[i];
        const Point c = b.vertices[(i + 1) % n];
        const Vec2 ab = c - a;
        const double t = std::clamp(ab.norm2() > 0.0 ? (p - a).dot(ab) / ab.norm2() : 0.0, 0.0, 1.0);
        const Point q = a + t * ab;
        const double d = distance(p, q);
        if (d < best) {
            best = d;
            out = q;
        }
    }
    return out;
}

}  // namespace detail

/// Extremal-angle scan from an outside point over the boundary samples; the
/// two vertices with maximum and minimum ray angle carry the tangents.
/// Ties go to the smaller vertex index. O(N).
inline std::array<TangentSegment, 2> tangents_point_convex(Point p, const ConvexBoundary& b) {
    if (b.contains(p)) {
        throw PointInsideBoundary("point lies inside the boundary");
    }
    const Vec2 axis = detail::closest_boundary_point(b, p) - p;
    int imax = 0;
    int imin = 0;
    double amax = -std::numeric_limits<double>::infinity();
    double amin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < b.vertices.size(); ++i) {
        const double a = detail::frame_angle(axis, b.vertices[i] - p);
        if (a > amax) {
            amax = a;
            imax = static_cast<int>(i);
        }
        if (a < amin) {
            amin = a;
            imin = static_cast<int>(i);
        }
    }
    std::array<TangentSegment, 2> out = {make_segment(p, b.vertices[imax]),
                                         make_segment(p, b.vertices[imin])};
    out[0].to_vertex = imax;
    out[1].to_vertex = imin;
    return out;
}

/// The four common tangents between two disjoint sampled convex boundaries,
/// labeled by the max/min composition of per-vertex extremal angles. O(MN).
struct ConvexTangentSet {
    TangentSegment maximax;
    TangentSegment maximin;
    TangentSegment minimax;
    TangentSegment minimin;

    std::array<const TangentSegment*, 4> all() const {
        return {&maximax, &maximin, &minimax, &minimin};
    }
};

inline ConvexTangentSet tangents_convex_convex(const ConvexBoundary& b1,
                                               const ConvexBoundary& b2) {
    // Overlap test: any vertex of one inside the other (sufficient for the
    // disjoint scenes this library works with).
    for (const Point& v : b1.vertices) {
        if (b2.contains(v)) throw BoundariesOverlap("boundaries overlap");
    }
    for (const Point& v : b2.vertices) {
        if (b1.contains(v)) throw BoundariesOverlap("boundaries overlap");
    }

    // Shared frame axis: direction between the closest vertex pair separates
    // the two sets, so every ray angle stays wrap-free.
    Vec2 axis{1.0, 0.0};
    double best = std::numeric_limits<double>::infinity();
    for (const Point& w : b1.vertices) {
        const Point q = detail::closest_boundary_point(b2, w);
        const double d = distance(w, q);
        if (d < best && d > 0.0) {
            best = d;
            axis = q - w;
        }
    }

    struct Extreme {
        double angle;
        int from, to;
    };
    std::vector<Extreme> maxima, minima;
    maxima.reserve(b1.vertices.size());
    minima.reserve(b1.vertices.size());
    for (size_t i = 0; i < b1.vertices.size(); ++i) {
        const Point w = b1.vertices[i];
        double amax = -std::numeric_limits<double>::infinity();
        double amin = std::numeric_limits<double>::infinity();
        int jmax = 0, jmin = 0;
        for (size_t j = 0; j < b2.vertices.size(); ++j) {
            const double a = detail::frame_angle(axis, b2.vertices[j] - w);
            if (a > amax) {
                amax = a;
                jmax = static_cast<int>(j);
            }
            if (a < amin) {
                amin = a;
                jmin = static_cast<int>(j);
            }
        }
        maxima.push_back({amax, static_cast<int>(i), jmax});
        minima.push_back({amin, static_cast<int>(i), jmin});
    }
    const auto by_angle = [](const Extreme& a, const Extreme& b) { return a.angle < b.angle; };
    const Extreme maximax = *std::max_element(maxima.begin(), maxima.end(), by_angle);
    const Extreme maximin = *std::min_element(maxima.begin(), maxima.end(), by_angle);
    const Extreme minimax = *std::max_element(minima.begin(), minima.end(), by_angle);
    const Extreme minimin = *std::min_element(minima.begin(), minima.end(), by_angle);

    const auto to_seg = [&](const Extreme& e) {
        TangentSegment s = make_segment(b1.vertices[e.from], b2.vertices[e.to]);
        s.from_vertex = e.from;
        s.to_vertex = e.to;
        return s;
    };
    return {to_seg(maximax), to_seg(maximin), to_seg(minimax), to_seg(minimin)};
}

// ---------------------------------------------------------------------------
// Distance helpers
// ---------------------------------------------------------------------------

inline double point_segment_distance(Point p, Point a, Point b) {
    const Vec2 ab = b - a;
    const double n2 = ab.norm2();
    const double t = n2 > 0.0 ? std::clamp((p - a).dot(ab) / n2, 0.0, 1.0) : 0.0;
    return distance(p, a + t * ab);
}

inline bool segments_intersect(Point a, Point b, Point c, Point d) {
    const auto orient = [](Point p, Point q, Point r) {
        const double v = (q - p).cross(r - p);
        return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    };
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    const auto on = [](Point p, Point q, Point r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (o1 == 0 && on(a, b, c)) return true;
    if (o2 == 0 && on(a, b, d)) return true;
    if (o3 == 0 && on(c, d, a)) return true;
    if (o4 == 0 && on(c, d, b)) return true;
    return false;
}

inline double segment_segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

/// Distance from segment [a, b] to a convex polygon (0 when they intersect
/// or the segment lies inside).
inline double segment_polygon_distance(Point a, Point b, const std::vector<Point>& poly) {
    if (poly.empty()) return std::numeric_limits<double>::infinity();
    if (poly.size() == 1) return point_segment_distance(poly[0], a, b);
    ConvexBoundary cb{poly};
    if (poly.size() >= 3 && (cb.contains(a) || cb.contains(b))) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const size_t n = poly.size();
    const size_t edges = poly.size() == 2 ? 1 : n;
    for (size_t i = 0; i < edges; ++i) {
        best = std::min(best, segment_segment_distance(a, b, poly[i], poly[(i + 1) % n]));
        if (best == 0.0) return 0.0;
    }
    return best;
}

inline double segment_circle_distance(Point a, Point b, const Circle& c) {
    return std::max(0.0, point_segment_distance(c.center, a, b) - c.radius);
}

}  // namespace viaplan
