// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "antsim/geometry.hpp"

namespace antsim {

enum class WaveDirection { HeadToTail, TailToHead };

struct GaitParams {
    double amplitude = 0.5;          // rad
    double spatial_frequency = 1.0;  // waves along the body
    double temporal_frequency = 0.8; // Hz
    double offset = 0.0;             // rad, steering bias
    int joint_count = 5;
    WaveDirection direction = WaveDirection::HeadToTail;
    double joint_limit = 1.2;        // rad, mechanical limit

    void validate() const {
        if (amplitude < 0.0 || temporal_frequency <= 0.0 || joint_count < 1)
            throw std::invalid_argument("invalid GaitParams");
        if (std::abs(amplitude) + std::abs(offset) > joint_limit)
            throw std::invalid_argument("amplitude plus offset exceeds joint limit");
    }

    double period() const { return 1.0 / temporal_frequency; }
};

// Traveling-wave joint angles: alpha_i = A sin(2 pi xi i/N -+ 2 pi w t) + phi,
// joints indexed 1..N from the head.
inline std::vector<double> serpenoid_angles(double t, const GaitParams& p) {
    if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
    double temporal = 2.0 * kPi * p.temporal_frequency * t;
    if (p.direction == WaveDirection::TailToHead) temporal = -temporal;
    std::vector<double> angles(p.joint_count);
    for (int i = 1; i <= p.joint_count; ++i) {
        double spatial = 2.0 * kPi * p.spatial_frequency * static_cast<double>(i) /
                         static_cast<double>(p.joint_count);
        angles[i - 1] = p.amplitude * std::sin(spatial - temporal) + p.offset;
    }
    return angles;
}

enum class Maneuver { Forward, TurnLeft, TurnRight, Reverse };

inline std::string to_string(Maneuver m) {
    switch (m) {
        case Maneuver::Forward: return "FORWARD";
        case Maneuver::TurnLeft: return "TURN_L";
        case Maneuver::TurnRight: return "TURN_R";
        case Maneuver::Reverse: return "REVERSE";
    }
    return "FORWARD";
}

// Maneuvers are wave templates: FORWARD is the plain head-to-tail wave, turns
// bias it with an offset, REVERSE runs the wave tail-to-head.
inline GaitParams maneuver_template(Maneuver m, const GaitParams& base,
                                    double turn_offset = 0.25) {
    GaitParams p = base;
    p.direction = WaveDirection::HeadToTail;
    p.offset = 0.0;
    switch (m) {
        case Maneuver::Forward:
            break;
        case Maneuver::TurnLeft:
            p.offset = turn_offset;
            break;
        case Maneuver::TurnRight:
            p.offset = -turn_offset;
            break;
        case Maneuver::Reverse:
            p.direction = WaveDirection::TailToHead;
            break;
    }
    return p;
}

}  // namespace antsim
