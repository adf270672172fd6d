// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "antsim/environment.hpp"
#include "antsim/gait.hpp"
#include "antsim/geometry.hpp"
#include "antsim/mechanics.hpp"
#include "antsim/sensing.hpp"

namespace antsim {

// Contact query for an antenna (or any polyline chain) against the world.
inline std::vector<Contact> antenna_contacts(const std::vector<Vec2>& chain,
                                             const Environment& env) {
    for (const Vec2& p : chain)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("chain geometry must be finite");
    return chain_contacts(chain, env);
}

// Kinematic maneuver-template locomotion for the 6-link platform.
struct LocomotionParams {
    double forward_speed = 0.12;   // m/s, anchored to the reported closed-loop speed
    double reverse_speed = 0.06;   // m/s
    double turn_curvature = 2.909; // rad/m, ~20 deg/s heading rate at forward_speed
    double turn_offset = 0.25;     // rad, gait offset for TURN templates
    double penalty_stiffness = 500.0;  // N/m, body-obstacle contact
    double movable_step_cap = 0.01;    // m, max obstacle displacement per step
    double contact_friction = 0.9;     // slide loss per unit of collision correction
    double stuck_fraction = 0.25;      // stuck below this fraction of commanded progress
    double stuck_window = 5.0;         // s, progress is judged over this window
    double stuck_limit = 10.0;         // s
    double timeout = 180.0;            // s
    double projection_cap = 0.004;      // m, max total collision correction per step
};

struct RobotState {
    Pose head_pose;
    std::vector<double> joint_angles;  // 5 yaw joints, commanded gait shape
    double link_length = 0.12;
    double body_width = 0.20;
    AntennaState left_antenna;
    AntennaState right_antenna;
    double stuck_timer = 0.0;
    double sim_time = 0.0;
    Vec2 stuck_anchor;
    double stuck_anchor_time = 0.0;
    // Recent head positions, oldest first; the body trails along this path.
    std::vector<Vec2> trail;
};

inline RobotState make_robot(const Pose& head_pose) {
    RobotState s;
    s.head_pose = head_pose;
    s.joint_angles.assign(5, 0.0);
    s.stuck_anchor = head_pose.position;
    s.trail = {head_pose.position -
               unit_vector(head_pose.heading) * (6.0 * s.link_length)};
    return s;
}

// Body joint positions head to tail, placed at link-length intervals along
// the trail the head has already traced, so the body occupies cleared space.
inline std::vector<Vec2> body_chain(const RobotState& s) {
    std::size_t joints = s.joint_angles.size() + 1;  // 6 links -> 7 points
    std::vector<Vec2> pts;
    pts.reserve(joints + 1);
    pts.push_back(s.head_pose.position);
    Vec2 ahead = s.head_pose.position;
    Vec2 last_dir = unit_vector(s.head_pose.heading) * -1.0;
    double want = s.link_length;
    std::size_t i = s.trail.size();
    while (pts.size() <= joints) {
        if (i == 0) {
            // Trail exhausted; extend straight along the oldest direction.
            pts.push_back(ahead + last_dir * want);
            ahead = pts.back();
            want = s.link_length;
            continue;
        }
        Vec2 behind = s.trail[--i];
        Vec2 seg = behind - ahead;
        double len = seg.norm();
        if (len < 1e-12) continue;
        last_dir = seg * (1.0 / len);
        while (want <= len && pts.size() <= joints) {
            pts.push_back(ahead + last_dir * want);
            want += s.link_length;
        }
        want -= len;
        ahead = behind;
    }
    return pts;
}

namespace detail {

// Capsule-chain contact against one obstacle; returns deepest penetration.
inline bool deepest_body_contact(const std::vector<Vec2>& pts, double radius,
                                 const Environment& env, Contact& out) {
    bool found = false;
    double deepest = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
            const Obstacle& ob = env.obstacles[k];
            Vec2 normal;
            double pen;
            if (ob.is_circle()) {
                const Circle& c = ob.circle();
                SegmentPoint sp = closest_point_on_segment(pts[i], pts[i + 1], c.center);
                double dist = (sp.point - c.center).norm();
                pen = c.radius + radius - dist;
                if (pen <= 0.0) continue;
                normal = dist > 1e-12 ? (sp.point - c.center) * (1.0 / dist)
                                      : (pts[i + 1] - pts[i]).perp().normalized();
            } else {
                const Wall& w = ob.wall();
                SegmentPair pair =
                    closest_points_between_segments(pts[i], pts[i + 1], w.a, w.b);
                pen = w.half_width + radius - pair.dist;
                if (pen <= 0.0) continue;
                normal = pair.dist > 1e-12 ? (pair.on_a - pair.on_b) * (1.0 / pair.dist)
                                           : (w.b - w.a).perp().normalized();
            }
            if (pen > deepest) {
                deepest = pen;
                out.link_index = i;
                out.obstacle_index = k;
                out.normal = normal;
                out.penetration = pen;
                found = true;
            }
        }
    }
    return found;
}

// Keep a displaced movable circle out of every immovable obstacle.
inline void settle_movable(Environment& env, std::size_t index) {
    Circle& c = env.obstacles[index].circle();
    for (int pass = 0; pass < 8; ++pass) {
        bool moved = false;
        for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
            if (k == index || env.obstacles[k].movable) continue;
            const Obstacle& ob = env.obstacles[k];
            if (ob.is_circle()) {
                const Circle& other = ob.circle();
                Vec2 d = c.center - other.center;
                double dist = d.norm();
                double pen = c.radius + other.radius - dist;
                if (pen > 0.0) {
                    c.center += (dist > 1e-12 ? d * (1.0 / dist) : Vec2{1.0, 0.0}) * pen;
                    moved = true;
                }
            } else {
                const Wall& w = ob.wall();
                SegmentPoint sp = closest_point_on_segment(w.a, w.b, c.center);
                Vec2 d = c.center - sp.point;
                double dist = d.norm();
                double pen = c.radius + w.half_width - dist;
                if (pen > 0.0) {
                    c.center += (dist > 1e-12 ? d * (1.0 / dist)
                                              : (w.b - w.a).perp().normalized()) * pen;
                    moved = true;
                }
            }
        }
        if (!moved) break;
    }
}

}  // namespace detail

// Advance the robot one step under a maneuver template. Movable obstacles
// are pushed aside in proportion to penetration force; any residual body
// penetration into the world is projected out, which makes the robot slide
// along obstacle tangents.
inline RobotState step_robot(const RobotState& state, Maneuver m, const GaitParams& base,
                             double dt, Environment& env,
                             const LocomotionParams& loco = {}) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    RobotState next = state;
    next.sim_time = state.sim_time + dt;

    GaitParams shaped = maneuver_template(m, base, loco.turn_offset);
    next.joint_angles = serpenoid_angles(next.sim_time, shaped);

    double heading_rate = 0.0;
    switch (m) {
        case Maneuver::Forward: break;
        case Maneuver::TurnLeft: heading_rate = loco.turn_curvature * loco.forward_speed; break;
        case Maneuver::TurnRight: heading_rate = -loco.turn_curvature * loco.forward_speed; break;
        case Maneuver::Reverse: break;
    }
    Vec2 prev = state.head_pose.position;
    if (m == Maneuver::Reverse) {
        // Back the head down the trail the body came in on.
        double remain = loco.reverse_speed * dt;
        Vec2 pos = next.head_pose.position;
        while (remain > 1e-12 && !next.trail.empty()) {
            Vec2 tgt = next.trail.back();
            double d = (tgt - pos).norm();
            if (d <= remain) {
                pos = tgt;
                next.trail.pop_back();
                remain -= d;
            } else {
                pos += (tgt - pos) * (remain / d);
                remain = 0.0;
            }
        }
        if (remain > 1e-12) pos -= unit_vector(next.head_pose.heading) * remain;
        next.head_pose.position = pos;
    } else {
        next.head_pose.heading += heading_rate * dt;
        next.head_pose.position +=
            unit_vector(next.head_pose.heading) * (loco.forward_speed * dt);
    }

    // Collision projection, deepest contact first. Fixed obstacles resolve
    // fully, so the body can never cross a wall. Pushback from movable
    // obstacles is capped per step so a wedge (a pinned cylinder against a
    // wall) cannot pump the body long distances.
    double radius = next.body_width / 2.0;
    double budget = loco.projection_cap;
    double corrected = 0.0;
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<Vec2> pts = body_chain(next);
        Contact c;
        if (!detail::deepest_body_contact(pts, radius, env, c)) break;
        Obstacle& ob = env.obstacles[c.obstacle_index];
        if (ob.movable && ob.compliance > 0.0 && ob.is_circle()) {
            double force = loco.penalty_stiffness * c.penetration;
            double shift = std::min({ob.compliance * force, c.penetration,
                                     loco.movable_step_cap});
            if (shift > 1e-9) {
                Vec2 old_center = ob.circle().center;
                ob.circle().center -= c.normal * shift;
                detail::settle_movable(env, c.obstacle_index);
                // A cylinder pinned against a wall makes no room; push the
                // robot out of the residual instead.
                if ((ob.circle().center - old_center).norm() > 0.25 * shift) continue;
            }
            if (c.link_index != 0) break;
            double correction = std::min(c.penetration, budget);
            if (correction <= 1e-9) break;
            budget -= correction;
            corrected += correction;
            next.head_pose.position += c.normal * correction;
        } else if (c.link_index == 0) {
            corrected += c.penetration;
            next.head_pose.position += c.normal * c.penetration;
        } else {
            // Rear links lie on the already-cleared trail; a residual contact
            // there cannot be fixed by moving the head.
            break;
        }
    }

    // Contact friction: sliding while pressed against an obstacle costs
    // forward progress, so blind head-on pushing stalls instead of skating.
    Vec2 achieved = next.head_pose.position - prev;
    double achieved_len = achieved.norm();
    double brake = std::min(achieved_len, loco.contact_friction * corrected);
    if (brake > 1e-12)
        next.head_pose.position -= achieved * (brake / achieved_len);

    if (m != Maneuver::Reverse && (next.head_pose.position - prev).norm() > 1e-9)
        next.trail.push_back(prev);

    // Judge progress along the heading over a window; lateral contact jitter
    // must not mask a robot that is pinned in place.
    next.stuck_timer = state.stuck_timer;
    double window = next.sim_time - next.stuck_anchor_time;
    if (window >= loco.stuck_window) {
        Vec2 disp = next.head_pose.position - next.stuck_anchor;
        double progress = std::abs(disp.dot(unit_vector(next.head_pose.heading)));
        if (progress < loco.stuck_fraction * loco.forward_speed * window)
            next.stuck_timer += window;
        else
            next.stuck_timer = 0.0;
        next.stuck_anchor = next.head_pose.position;
        next.stuck_anchor_time = next.sim_time;
    }
    return next;
}

// Vertical line of fixed spherical boulders, 6.35 mm diameter.
inline Environment build_boulder_wall(double spacing, int count) {
    if (!(spacing > 0.0)) throw std::invalid_argument("boulder spacing must be positive");
    Environment env;
    const double radius = 0.00635 / 2.0;
    for (int i = 0; i < count; ++i) {
        Obstacle ob;
        ob.shape = Circle{{0.0, spacing * static_cast<double>(i)}, radius};
        env.obstacles.push_back(ob);
    }
    env.bounds = {{-1.0, -1.0}, {1.0, spacing * std::max(count, 1) + 1.0}};
    return env;
}

struct TunnelSpec {
    double width = 0.40;        // m, widest local cross-section
    double leg1_length = 1.2;   // m before the turn
    double leg2_length = 1.0;   // m after the turn
    double turn_angle = deg_to_rad(50.0);
    double cylinder_radius = 0.07;
    double cylinder_compliance = 0.02;  // m/N, lightweight shifting cylinders
    double robot_width = 0.20;
    double wall_half_width = 0.01;
};

class TunnelGenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Vec2 centerline_point(const TunnelSpec& ts, double s, Vec2* tangent_out = nullptr) {
    if (s <= ts.leg1_length) {
        if (tangent_out) *tangent_out = {1.0, 0.0};
        return {s, 0.0};
    }
    Vec2 dir = unit_vector(ts.turn_angle);
    if (tangent_out) *tangent_out = dir;
    return Vec2{ts.leg1_length, 0.0} + dir * (s - ts.leg1_length);
}

}  // namespace detail

// Corridor with a single turn, lined with movable paper cylinders. Cylinder
// placement keeps a free channel at least the robot width wide; an attempt
// that cannot place all cylinders retries with the next sub-seed.
inline Environment build_tunnel(std::uint64_t seed, double width, int cylinder_count,
                                const TunnelSpec& spec_in = {}) {
    TunnelSpec ts = spec_in;
    ts.width = width;
    if (width < ts.robot_width)
        throw std::invalid_argument("tunnel width must be at least the robot width");

    const double w2 = width / 2.0;
    const Vec2 p0{0.0, 0.0};
    const Vec2 p1{ts.leg1_length, 0.0};
    const Vec2 dir2 = unit_vector(ts.turn_angle);
    const Vec2 p2 = p1 + dir2 * ts.leg2_length;
    const Vec2 n1{0.0, 1.0};
    const Vec2 n2 = dir2.perp();

    auto corner = [&](double side) {
        // Intersection of the two offset wall lines.
        Vec2 a = p1 + n1 * (side * w2);
        Vec2 b = p1 + n2 * (side * w2);
        Vec2 d1{1.0, 0.0};
        double t = (b - a).cross(dir2) / d1.cross(dir2);
        return a + d1 * t;
    };

    Environment env;
    auto add_wall = [&](Vec2 a, Vec2 b) {
        Obstacle ob;
        ob.shape = Wall{a, b, ts.wall_half_width};
        env.obstacles.push_back(ob);
    };
    for (double side : {+1.0, -1.0}) {
        Vec2 mid = corner(side);
        add_wall(p0 + n1 * (side * w2), mid);
        add_wall(mid, p2 + n2 * (side * w2));
    }

    double total = ts.leg1_length + ts.leg2_length;
    Vec2 goal_center = p2 - dir2 * 0.10;
    env.goal_region = {goal_center - Vec2{0.15, 0.15}, goal_center + Vec2{0.15, 0.15}};
    env.bounds = {{-0.5, -total}, {total + 0.5, total}};

    if (cylinder_count == 0) return env;

    // Every cylinder must leave a channel at least 2.5 cm wider than the
    // robot on its open side, walls included.
    const double max_offset = w2 - ts.wall_half_width - ts.cylinder_radius;
    const double min_offset =
        ts.robot_width + ts.cylinder_radius + ts.wall_half_width - w2 + 0.025;
    if (min_offset > max_offset)
        throw TunnelGenerationError("tunnel too narrow for cylinders and a free channel");
    const double min_gap = 2.0 * ts.cylinder_radius + 0.12;

    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        std::mt19937_64 rng(seed * 1000003ULL + attempt);
        std::uniform_real_distribution<double> station_dist(0.35, total - 0.35);
        std::uniform_real_distribution<double> offset_dist(std::max(min_offset, 0.0),
                                                           max_offset);
        std::uniform_int_distribution<int> sign_dist(0, 1);

        std::vector<double> stations;
        bool ok = true;
        for (int i = 0; i < cylinder_count; ++i) {
            bool placed = false;
            for (int tries = 0; tries < 100; ++tries) {
                double s = station_dist(rng);
                // Keep the corner itself clear.
                bool clear = std::abs(s - ts.leg1_length) >= 0.22;
                for (double other : stations)
                    if (std::abs(s - other) < min_gap) { clear = false; break; }
                if (clear) { stations.push_back(s); placed = true; break; }
            }
            if (!placed) { ok = false; break; }
        }
        if (!ok) continue;

        std::sort(stations.begin(), stations.end());
        Environment out = env;
        // Alternate sides down the corridor: adjacent same-side cylinders
        // form a cul-de-sac with their wall that a reactive controller
        // cannot escape.
        double sign = sign_dist(rng) == 0 ? 1.0 : -1.0;
        for (double s : stations) {
            Vec2 tangent;
            Vec2 center = detail::centerline_point(ts, s, &tangent);
            double off = offset_dist(rng);
            sign = -sign;
            Obstacle ob;
            ob.shape = Circle{center + tangent.perp() * (sign * off), ts.cylinder_radius};
            ob.movable = true;
            ob.compliance = ts.cylinder_compliance;
            out.obstacles.push_back(ob);
        }
        return out;
    }
    throw TunnelGenerationError("could not generate a feasible tunnel in 100 attempts");
}

// Reflect an environment across the x-axis (for symmetry checks).
inline Environment mirror_environment(const Environment& env) {
    Environment out = env;
    for (Obstacle& ob : out.obstacles) {
        if (ob.is_circle()) {
            ob.circle().center.y = -ob.circle().center.y;
        } else {
            Wall w = ob.wall();
            w.a.y = -w.a.y;
            w.b.y = -w.b.y;
            ob.shape = w;
        }
    }
    out.goal_region = {{env.goal_region.lo.x, -env.goal_region.hi.y},
                       {env.goal_region.hi.x, -env.goal_region.lo.y}};
    out.bounds = {{env.bounds.lo.x, -env.bounds.hi.y},
                  {env.bounds.hi.x, -env.bounds.lo.y}};
    return out;
}

enum class TrialOutcome { Success, Stuck, Timeout };

inline std::string to_string(TrialOutcome o) {
    switch (o) {
        case TrialOutcome::Success: return "success";
        case TrialOutcome::Stuck: return "stuck";
        case TrialOutcome::Timeout: return "timeout";
    }
    return "timeout";
}

struct TimelineEntry {
    double t = 0.0;
    Pose head_pose;
    Maneuver maneuver = Maneuver::Forward;
    SensorFrame frame;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    std::string scenario;
    std::vector<TimelineEntry> timeline;
    TrialOutcome outcome = TrialOutcome::Timeout;
    double elapsed = 0.0;
    double path_length = 0.0;
    double mean_speed = 0.0;
};

}  // namespace antsim
