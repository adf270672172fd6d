// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "antsim/geometry.hpp"

namespace antsim {

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

// Thin rigid wall modeled as a capsule around the segment [a,b].
struct Wall {
    Vec2 a;
    Vec2 b;
    double half_width = 0.005;
};

struct Obstacle {
    std::variant<Circle, Wall> shape;
    bool movable = false;
    double compliance = 0.0;  // m/N, displacement per unit pushing force

    bool is_circle() const { return std::holds_alternative<Circle>(shape); }
    const Circle& circle() const { return std::get<Circle>(shape); }
    Circle& circle() { return std::get<Circle>(shape); }
    const Wall& wall() const { return std::get<Wall>(shape); }
};

struct Environment {
    std::vector<Obstacle> obstacles;
    Rect goal_region;
    Rect bounds;

    void validate() const {
        for (const auto& ob : obstacles) {
            if (ob.is_circle() && ob.circle().radius <= 0.0)
                throw std::invalid_argument("obstacle radius must be positive");
        }
    }
};

// One penetration contact between a chain link and an obstacle.
struct Contact {
    std::size_t link_index = 0;
    std::size_t obstacle_index = 0;
    Vec2 point;        // contact point on the link
    Vec2 normal;       // unit, pointing out of the obstacle toward the link
    double penetration = 0.0;  // m, >= 0
};

// Deepest-point contact between one segment and one obstacle, if penetrating.
inline bool segment_obstacle_contact(const Vec2& a, const Vec2& b, const Obstacle& ob,
                                     Contact& out) {
    if (ob.is_circle()) {
        const Circle& c = ob.circle();
        SegmentPoint sp = closest_point_on_segment(a, b, c.center);
        double dist = (sp.point - c.center).norm();
        if (dist >= c.radius) return false;
        Vec2 n = dist > 1e-12 ? (sp.point - c.center) * (1.0 / dist)
                              : (b - a).perp().normalized();
        out.point = sp.point;
        out.normal = n;
        out.penetration = c.radius - dist;
        return true;
    }
    const Wall& w = ob.wall();
    SegmentPair pair = closest_points_between_segments(a, b, w.a, w.b);
    if (pair.dist >= w.half_width) return false;
    Vec2 n = pair.dist > 1e-12 ? (pair.on_a - pair.on_b) * (1.0 / pair.dist)
                               : (w.b - w.a).perp().normalized();
    out.point = pair.on_a;
    out.normal = n;
    out.penetration = w.half_width - pair.dist;
    return true;
}

// All contacts between a polyline chain (points.size()-1 links) and the
// environment. Link i is the segment [points[i], points[i+1]].
inline std::vector<Contact> chain_contacts(const std::vector<Vec2>& points,
                                           const Environment& env) {
    std::vector<Contact> contacts;
    if (points.size() < 2) return contacts;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
            Contact c;
            if (segment_obstacle_contact(points[i], points[i + 1], env.obstacles[k], c)) {
                c.link_index = i;
                c.obstacle_index = k;
                contacts.push_back(c);
            }
        }
    }
    return contacts;
}

}  // namespace antsim
