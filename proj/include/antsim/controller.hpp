// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "antsim/gait.hpp"
#include "antsim/sensing.hpp"

namespace antsim {

struct ControllerConfig {
    double contact_threshold = 0.5;        // theta
    double strong_threshold = 0.7;         // theta_strong
    double symmetry_tolerance = 0.15;      // eps_sym
    double hold_duration = 1.25;           // s, default one gait period

    void validate() const {
        if (!(contact_threshold > 0.0 && contact_threshold <= strong_threshold &&
              strong_threshold < 1.0))
            throw std::invalid_argument("require 0 < theta <= theta_strong < 1");
        if (!(symmetry_tolerance > 0.0)) throw std::invalid_argument("eps_sym must be positive");
        if (!(hold_duration > 0.0)) throw std::invalid_argument("t_hold must be positive");
    }
};

// Discrete bilateral-contact decision: free space goes forward, strong
// symmetric contact backs out, anything else turns away from the stronger
// side. Exact bilateral ties resolve to TURN_R.
inline Maneuver decide(double bend_left, double bend_right, const ControllerConfig& cfg) {
    if (bend_left < 0.0 || bend_left > 1.0 || bend_right < 0.0 || bend_right > 1.0)
        throw std::invalid_argument("bend levels must be in [0,1]");
    if (bend_left < cfg.contact_threshold && bend_right < cfg.contact_threshold)
        return Maneuver::Forward;
    if (std::min(bend_left, bend_right) >= cfg.strong_threshold &&
        std::abs(bend_left - bend_right) <= cfg.symmetry_tolerance)
        return Maneuver::Reverse;
    return bend_left >= bend_right ? Maneuver::TurnRight : Maneuver::TurnLeft;
}

struct ControllerState {
    Maneuver active = Maneuver::Forward;
    double hold_until = -std::numeric_limits<double>::infinity();
    double last_time = -std::numeric_limits<double>::infinity();
};

// Hold the active maneuver for the configured duration, then re-decide from
// the latest frame.
inline Maneuver controller_step(ControllerState& state, const SensorFrame& frame, double t,
                                const ControllerConfig& cfg) {
    if (t < state.last_time) throw std::invalid_argument("controller time must be non-decreasing");
    state.last_time = t;
    if (t < state.hold_until) return state.active;
    state.active = decide(frame.bend_left, frame.bend_right, cfg);
    state.hold_until = t + cfg.hold_duration;
    return state.active;
}

}  // namespace antsim
