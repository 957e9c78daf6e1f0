#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace marl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Axis-aligned rectangle, closed on all sides.
struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(const Vec2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Rect expanded(double margin) const {
        return {xmin - margin, ymin - margin, xmax + margin, ymax + margin};
    }
};

/// Slab test: does the segment a->b intersect the rectangle?
inline bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect& r) {
    double tmin = 0.0, tmax = 1.0;
    const double o[2] = {a.x, a.y};
    const double d[2] = {b.x - a.x, b.y - a.y};
    const double lo[2] = {r.xmin, r.ymin};
    const double hi[2] = {r.xmax, r.ymax};
    for (int ax = 0; ax < 2; ++ax) {
        if (d[ax] == 0.0) {
            if (o[ax] < lo[ax] || o[ax] > hi[ax]) return false;
        } else {
            double t1 = (lo[ax] - o[ax]) / d[ax];
            double t2 = (hi[ax] - o[ax]) / d[ax];
            if (t1 > t2) std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin > tmax) return false;
        }
    }
    return true;
}

/// Parameter t >= 0 at which the ray o + t*dir first enters the rectangle,
/// or nullopt if it misses. dir need not be normalized.
inline std::optional<double> ray_rect_hit(const Vec2& o, const Vec2& dir, const Rect& r) {
    double tmin = 0.0;
    double tmax = std::numeric_limits<double>::infinity();
    const double ov[2] = {o.x, o.y};
    const double d[2] = {dir.x, dir.y};
    const double lo[2] = {r.xmin, r.ymin};
    const double hi[2] = {r.xmax, r.ymax};
    for (int ax = 0; ax < 2; ++ax) {
        if (d[ax] == 0.0) {
            if (ov[ax] < lo[ax] || ov[ax] > hi[ax]) return std::nullopt;
        } else {
            double t1 = (lo[ax] - ov[ax]) / d[ax];
            double t2 = (hi[ax] - ov[ax]) / d[ax];
            if (t1 > t2) std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin > tmax) return std::nullopt;
        }
    }
    return tmin;
}

/// Smallest t >= 0 where the ray hits the circle, or nullopt.
inline std::optional<double> ray_circle_hit(const Vec2& o, const Vec2& dir, const Vec2& center,
                                            double radius) {
    Vec2 oc = o - center;
    double a = dir.dot(dir);
    double b = 2.0 * oc.dot(dir);
    double c = oc.dot(oc) - radius * radius;
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    double sq = std::sqrt(disc);
    double t1 = (-b - sq) / (2.0 * a);
    double t2 = (-b + sq) / (2.0 * a);
    if (t1 >= 0.0) return t1;
    if (t2 >= 0.0) return t2;
    return std::nullopt;
}

/// Parameter t > 0 where a ray starting inside the rectangle crosses its
/// boundary outward.
inline double ray_rect_exit(const Vec2& o, const Vec2& dir, const Rect& r) {
    double tmax = std::numeric_limits<double>::infinity();
    const double ov[2] = {o.x, o.y};
    const double d[2] = {dir.x, dir.y};
    const double lo[2] = {r.xmin, r.ymin};
    const double hi[2] = {r.xmax, r.ymax};
    for (int ax = 0; ax < 2; ++ax) {
        if (d[ax] > 0.0) {
            tmax = std::min(tmax, (hi[ax] - ov[ax]) / d[ax]);
        } else if (d[ax] < 0.0) {
            tmax = std::min(tmax, (lo[ax] - ov[ax]) / d[ax]);
        }
    }
    return tmax;
}

}  // namespace marl
