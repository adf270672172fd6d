// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "antsim/controller.hpp"

using namespace antsim;

TEST_CASE("decision truth table") {
    ControllerConfig cfg;  // theta 0.5, theta_strong 0.7, eps_sym 0.15

    // both below threshold: free space
    CHECK(decide(0.0, 0.0, cfg) == Maneuver::Forward);
    CHECK(decide(0.49, 0.49, cfg) == Maneuver::Forward);

    // strong symmetric contact: back out
    CHECK(decide(0.8, 0.8, cfg) == Maneuver::Reverse);
    CHECK(decide(0.7, 0.7, cfg) == Maneuver::Reverse);
    CHECK(decide(0.875, 0.75, cfg) == Maneuver::Reverse);  // diff within eps_sym

    // otherwise turn away from the stronger side
    CHECK(decide(0.6, 0.2, cfg) == Maneuver::TurnRight);
    CHECK(decide(0.2, 0.6, cfg) == Maneuver::TurnLeft);
    CHECK(decide(0.9, 0.6, cfg) == Maneuver::TurnRight);  // min below strong
    CHECK(decide(0.6, 0.9, cfg) == Maneuver::TurnLeft);
    CHECK(decide(0.95, 0.75, cfg) == Maneuver::TurnRight);  // strong but asymmetric
    CHECK(decide(0.75, 0.95, cfg) == Maneuver::TurnLeft);

    // exact bilateral tie in the turn band resolves to TURN_R
    CHECK(decide(0.6, 0.6, cfg) == Maneuver::TurnRight);

    // one-sided threshold boundary is inclusive
    CHECK(decide(0.5, 0.0, cfg) == Maneuver::TurnRight);
    CHECK(decide(0.0, 0.5, cfg) == Maneuver::TurnLeft);
}

TEST_CASE("decision rejects bend levels outside the unit interval") {
    ControllerConfig cfg;
    CHECK_THROWS_AS(decide(-0.01, 0.5, cfg), std::invalid_argument);
    CHECK_THROWS_AS(decide(0.5, 1.01, cfg), std::invalid_argument);
}

TEST_CASE("decision is mirror-symmetric away from exact ties") {
    ControllerConfig cfg;
    auto mirror = [](Maneuver m) {
        switch (m) {
            case Maneuver::TurnLeft: return Maneuver::TurnRight;
            case Maneuver::TurnRight: return Maneuver::TurnLeft;
            default: return m;
        }
    };
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;  // ties break to TURN_R by convention
            double a = static_cast<double>(i) / (n - 1);
            double b = static_cast<double>(j) / (n - 1);
            CHECK(decide(a, b, cfg) == mirror(decide(b, a, cfg)));
        }
    }
}

TEST_CASE("every bend pair on a dense grid maps to one of the four maneuvers") {
    ControllerConfig cfg;
    const int n = 200;
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Maneuver m = decide(static_cast<double>(i) / (n - 1),
                                static_cast<double>(j) / (n - 1), cfg);
            ++counts[static_cast<int>(m)];
        }
    }
    // all four regions are non-empty and the grid is fully covered
    int total = 0;
    for (int c : counts) {
        CHECK(c > 0);
        total += c;
    }
    CHECK(total == n * n);
}

TEST_CASE("decision is deterministic") {
    ControllerConfig cfg;
    for (int i = 0; i < 100; ++i) {
        double a = 0.01 * i * 0.99;
        double b = 1.0 - a;
        CHECK(decide(a, b, cfg) == decide(a, b, cfg));
    }
}

TEST_CASE("active maneuver holds for t_hold then re-decides") {
    ControllerConfig cfg;
    cfg.hold_duration = 1.25;
    ControllerState st;

    SensorFrame blocked;
    blocked.bend_left = 0.9;
    blocked.bend_right = 0.9;
    SensorFrame free;

    CHECK(controller_step(st, blocked, 0.0, cfg) == Maneuver::Reverse);
    // frames change during the hold window; the maneuver must not
    CHECK(controller_step(st, free, 0.4, cfg) == Maneuver::Reverse);
    CHECK(controller_step(st, free, 1.2499, cfg) == Maneuver::Reverse);
    // at exactly t_hold the controller re-decides from the latest frame
    CHECK(controller_step(st, free, 1.25, cfg) == Maneuver::Forward);
    CHECK(controller_step(st, blocked, 1.3, cfg) == Maneuver::Forward);
    CHECK(controller_step(st, blocked, 2.5, cfg) == Maneuver::Reverse);
}

TEST_CASE("controller rejects time regressions") {
    ControllerConfig cfg;
    ControllerState st;
    controller_step(st, SensorFrame{}, 1.0, cfg);
    CHECK_THROWS_AS(controller_step(st, SensorFrame{}, 0.9, cfg), std::invalid_argument);
}

TEST_CASE("controller config validation") {
    ControllerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.contact_threshold = 0.8;  // above strong threshold
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ControllerConfig{};
    cfg.symmetry_tolerance = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ControllerConfig{};
    cfg.hold_duration = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
