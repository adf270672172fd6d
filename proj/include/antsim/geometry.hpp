// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace antsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2&) const = default;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3D cross product; positive is counter-clockwise
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }

    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Pose {
    Vec2 position;
    double heading = 0.0;  // rad, CCW from +x
    bool operator==(const Pose&) const = default;
};

struct Rect {
    Vec2 lo;
    Vec2 hi;
    bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

// Closest point on segment [a,b] to p, returned with its parameter in [0,1].
struct SegmentPoint {
    Vec2 point;
    double t = 0.0;
};

inline SegmentPoint closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    Vec2 ab = b - a;
    double len_sq = ab.norm_sq();
    if (len_sq <= 0.0) return {a, 0.0};
    double t = (p - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return {a + ab * t, t};
}

// Closest pair of points between segments [a0,a1] and [b0,b1].
struct SegmentPair {
    Vec2 on_a;
    Vec2 on_b;
    double dist = std::numeric_limits<double>::infinity();
};

inline SegmentPair closest_points_between_segments(const Vec2& a0, const Vec2& a1,
                                                   const Vec2& b0, const Vec2& b1) {
    // Planar segments: if they intersect the distance is zero, otherwise the
    // minimum is attained at an endpoint of one segment.
    Vec2 d1 = a1 - a0, d2 = b1 - b0, r = a0 - b0;
    double denom = d1.cross(d2);
    if (std::abs(denom) > 1e-14) {
        double t = d2.cross(r) / denom;
        double u = d1.cross(r) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) {
            Vec2 p = a0 + d1 * t;
            return {p, p, 0.0};
        }
    }
    SegmentPair best;
    auto consider = [&best](const SegmentPoint& sp, const Vec2& q, bool q_on_a) {
        double d = (sp.point - q).norm();
        if (d < best.dist) {
            best.dist = d;
            best.on_a = q_on_a ? q : sp.point;
            best.on_b = q_on_a ? sp.point : q;
        }
    };
    consider(closest_point_on_segment(b0, b1, a0), a0, true);
    consider(closest_point_on_segment(b0, b1, a1), a1, true);
    consider(closest_point_on_segment(a0, a1, b0), b0, false);
    consider(closest_point_on_segment(a0, a1, b1), b1, false);
    return best;
}

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace antsim
