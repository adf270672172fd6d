// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "antsim/controller.hpp"
#include "antsim/environment.hpp"
#include "antsim/gait.hpp"
#include "antsim/mechanics.hpp"
#include "antsim/sensing.hpp"
#include "antsim/world.hpp"

namespace antsim {

enum class Scenario { BoulderWall, Tunnel, CalibrationSweep };

inline std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::BoulderWall: return "boulder_wall";
        case Scenario::Tunnel: return "tunnel";
        case Scenario::CalibrationSweep: return "calibration_sweep";
    }
    return "tunnel";
}

// Passive antenna dragged along a boulder wall at constant speed.
struct BoulderWallSpec {
    double spacing = 0.012;          // m between boulder centers
    int boulder_count = 20;
    double traverse_speed = 0.008;   // m/s
    double mount_angle = kPi / 4.0;  // antenna direction from the wall-parallel axis
    double overlap = 0.015;          // m, undeflected tip reach past the wall line
    double overlap_jitter = 0.002;   // m, +- per-trial randomization
    double dt = 0.02;                // s
    double jam_force = 0.25;         // N, sustained total contact force that counts as jamming
    double track_force = 0.06;       // N, minimum force for a reliable (non-slipping) contact
    double jam_sustain = 0.5;        // s
    double coverage_min = 0.6;       // detected-contact fraction below which a trial missed
};

struct CalibrationSweepSpec {
    std::vector<double> speeds = {0.05, 0.10, 0.15};  // m/s indenter traverse speeds
    int levels = 40;                                  // staircase steps per sweep
    double dwell = 0.15;                              // s hold at each level
    double antenna_length = 0.18;                     // m, converts speed to bend rate
};

struct ExperimentConfig {
    Scenario scenario = Scenario::Tunnel;
    int trials = 10;
    std::uint64_t base_seed = 42;
    std::string out_dir = "out";

    SensorModel sensor;
    Calibration calibration;
    ControllerConfig controller;
    GaitParams gait;
    LocomotionParams locomotion;
    SolverParams solver;
    double averaging_window = 0.05;   // s, T_avg
    double antenna_mount = 0.6;       // rad, bilateral antenna mount angle
    StiffnessProfile antenna_profile = measured_descending_profile();

    TunnelSpec tunnel;
    int cylinder_count = 5;
    double tunnel_dt = 0.02;

    BoulderWallSpec boulder;
    CalibrationSweepSpec sweep;

    // Conditions compared in the boulder-wall protocol.
    std::vector<std::pair<std::string, StiffnessProfile>> profiles = {
        {"descending", measured_descending_profile()},
        {"uniform_stiff", uniform_profile(0.274, 6, ProfileKind::UniformStiff)},
        {"uniform_compliant", uniform_profile(0.091, 6, ProfileKind::UniformCompliant)},
    };

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        sensor.validate();
        calibration.validate();
        controller.validate();
        gait.validate();
        antenna_profile.validate();
        for (const auto& [name, p] : profiles) p.validate();
    }
};

struct TrialResult {
    std::uint64_t seed = 0;
    std::string condition;
    std::string classification;  // success / jam / missed_contact / stuck / timeout / error
    double elapsed = 0.0;
    double path_length = 0.0;
    double mean_speed = 0.0;
    double coverage = 0.0;    // boulder wall: detected-contact fraction in the wall zone
    double peak_force = 0.0;  // boulder wall: max total contact force, N
};

struct ConditionSummary {
    std::string condition;
    int trials = 0;
    int successes = 0;
    int jams = 0;
    int missed_contacts = 0;
    int stuck = 0;
    int timeouts = 0;
    int other_failures = 0;
    double mean_speed = 0.0;  // successful runs only

    double success_rate() const {
        return trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    }
};

struct ExperimentSummary {
    std::vector<ConditionSummary> conditions;
    std::vector<TrialResult> trial_results;
    std::vector<TrialRecord> records;
    int skipped = 0;

    const ConditionSummary& condition(const std::string& name) const {
        for (const auto& c : conditions)
            if (c.condition == name) return c;
        throw std::out_of_range("no such condition: " + name);
    }
};

// --- boulder wall -------------------------------------------------------------

namespace detail {

struct BoulderTrial {
    TrialResult result;
    TrialRecord record;
};

inline BoulderTrial run_boulder_trial(std::uint64_t seed, const std::string& condition,
                                      const StiffnessProfile& profile,
                                      const ExperimentConfig& cfg) {
    const BoulderWallSpec& bw = cfg.boulder;
    Environment env = build_boulder_wall(bw.spacing, bw.boulder_count);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-bw.overlap_jitter, bw.overlap_jitter);

    AntennaConfig antenna = default_antenna(profile);
    double reach_x = antenna.total_length() * std::cos(bw.mount_angle);
    double overlap = bw.overlap + jitter(rng);
    double base_x = -(reach_x - overlap);
    double y_start = -0.08 + 0.002 * jitter(rng) / std::max(bw.overlap_jitter, 1e-9);
    double y_last = bw.spacing * std::max(bw.boulder_count - 1, 0);
    double y_end = y_last + 0.08;

    AveragingWindow window(cfg.averaging_window);

    BoulderTrial trial;
    trial.result.seed = seed;
    trial.result.condition = condition;
    trial.record.seed = seed;
    trial.record.scenario = "boulder_wall:" + condition;

    std::vector<double> warm(profile.joint_stiffness.size(), 0.0);
    double jam_timer = 0.0;
    bool jammed = false;
    int zone_steps = 0, detected_steps = 0;
    double t = 0.0;
    double y = y_start;
    bool errored = false;

    while (y < y_end) {
        Pose base{{base_x, y}, bw.mount_angle};
        AntennaState state;
        try {
            state = solve_equilibrium(antenna, base, env, {}, cfg.solver, &warm);
        } catch (const SolverFailure&) {
            // Snap-through: the warm-started branch vanished. Re-solve cold.
            std::fill(warm.begin(), warm.end(), 0.0);
            try {
                state = solve_equilibrium(antenna, base, env, {}, cfg.solver, &warm);
            } catch (const SolverFailure&) {
                errored = true;
                break;
            }
        }
        warm = state.joint_deflections;

        double total_force = 0.0;
        for (const auto& c : state.contacts) total_force += c.normal_force;
        trial.result.peak_force = std::max(trial.result.peak_force, total_force);

        // A contact held below the tracking force slips instead of loading
        // the flex sensor; attenuate the emulated bend accordingly.
        double effective_bend = state.total_bend;
        if (!state.contacts.empty() && total_force < bw.track_force)
            effective_bend *= total_force / bw.track_force;

        int raw = emulate_adc(effective_bend, cfg.sensor, cfg.calibration, rng);
        double avg = window.push_and_average(raw, t);
        double b = bend_level(avg, cfg.calibration, cfg.sensor);
        bool c = contact_state(b, cfg.calibration);

        if (y >= -0.01 && y <= y_last + 0.01) {
            ++zone_steps;
            if (c) ++detected_steps;
        }

        bool jam_condition = total_force >= bw.jam_force;
        jam_timer = jam_condition ? jam_timer + bw.dt : 0.0;
        if (jam_timer >= bw.jam_sustain) jammed = true;

        TimelineEntry entry;
        entry.t = t;
        entry.head_pose = base;
        entry.maneuver = Maneuver::Forward;
        entry.frame.t = t;
        entry.frame.raw_left = raw;
        entry.frame.averaged_left = avg;
        entry.frame.bend_left = b;
        entry.frame.contact_left = c;
        trial.record.timeline.push_back(entry);

        t += bw.dt;
        y += bw.traverse_speed * bw.dt;
    }

    trial.result.elapsed = t;
    trial.record.elapsed = t;
    trial.record.path_length = y - y_start;
    trial.result.path_length = trial.record.path_length;
    trial.result.coverage =
        zone_steps > 0 ? static_cast<double>(detected_steps) / zone_steps : 0.0;

    if (errored) {
        trial.result.classification = "error";
        trial.record.outcome = TrialOutcome::Stuck;
    } else if (jammed) {
        trial.result.classification = "jam";
        trial.record.outcome = TrialOutcome::Stuck;
    } else if (trial.result.coverage < bw.coverage_min) {
        trial.result.classification = "missed_contact";
        trial.record.outcome = TrialOutcome::Timeout;
    } else {
        trial.result.classification = "success";
        trial.record.outcome = TrialOutcome::Success;
        trial.result.mean_speed = bw.traverse_speed;
        trial.record.mean_speed = trial.record.path_length / trial.record.elapsed;
    }
    return trial;
}

inline void finalize_condition(ConditionSummary& cs, const TrialResult& r) {
    ++cs.trials;
    if (r.classification == "success") {
        ++cs.successes;
        cs.mean_speed += r.mean_speed;
    } else if (r.classification == "jam") {
        ++cs.jams;
    } else if (r.classification == "missed_contact") {
        ++cs.missed_contacts;
    } else if (r.classification == "stuck") {
        ++cs.stuck;
    } else if (r.classification == "timeout") {
        ++cs.timeouts;
    } else {
        ++cs.other_failures;
    }
}

}  // namespace detail

inline ExperimentSummary run_boulder_wall(const ExperimentConfig& cfg) {
    if (cfg.scenario != Scenario::BoulderWall)
        throw std::invalid_argument("config scenario is not boulder_wall");
    cfg.validate();
    ExperimentSummary summary;
    for (const auto& [name, profile] : cfg.profiles) {
        ConditionSummary cs;
        cs.condition = name;
        for (int i = 0; i < cfg.trials; ++i) {
            std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
            detail::BoulderTrial trial = detail::run_boulder_trial(seed, name, profile, cfg);
            detail::finalize_condition(cs, trial.result);
            summary.trial_results.push_back(trial.result);
            summary.records.push_back(std::move(trial.record));
        }
        if (cs.successes > 0) cs.mean_speed /= cs.successes;
        summary.conditions.push_back(cs);
    }
    return summary;
}

// --- tunnel -------------------------------------------------------------------

namespace detail {

inline TrialRecord run_tunnel_trial(std::uint64_t seed, bool closed_loop, Environment env,
                                    const ExperimentConfig& cfg) {
    TrialRecord record;
    record.seed = seed;
    record.scenario = closed_loop ? "tunnel:closed_loop" : "tunnel:open_loop";

    RobotState robot = make_robot({{0.15, 0.0}, 0.0});
    robot.body_width = cfg.tunnel.robot_width;

    AntennaConfig left = default_antenna(cfg.antenna_profile, cfg.antenna_mount);
    AntennaConfig right = default_antenna(cfg.antenna_profile, -cfg.antenna_mount);
    std::vector<double> warm_left(left.link_lengths.size(), 0.0);
    std::vector<double> warm_right(right.link_lengths.size(), 0.0);

    std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
    AveragingWindow win_left(cfg.averaging_window), win_right(cfg.averaging_window);
    ControllerState controller;

    const double dt = cfg.tunnel_dt;
    double t = 0.0;
    Vec2 last_pos = robot.head_pose.position;

    while (true) {
        t += dt;
        SensorFrame frame;
        frame.t = t;
        Maneuver m = Maneuver::Forward;
        if (closed_loop) {
            Pose base{robot.head_pose.position, robot.head_pose.heading};
            auto solve_antenna = [&](const AntennaConfig& ant, std::vector<double>& warm) {
                try {
                    return solve_equilibrium(ant, base, env, {}, cfg.solver, &warm);
                } catch (const SolverFailure&) {
                    // Snap-through: the warm-started branch vanished. Retry
                    // from a few fixed shapes before giving up.
                    for (double start : {0.0, 0.4, -0.4}) {
                        std::fill(warm.begin(), warm.end(), start);
                        try {
                            return solve_equilibrium(ant, base, env, {}, cfg.solver, &warm);
                        } catch (const SolverFailure&) {
                        }
                    }
                    std::fill(warm.begin(), warm.end(), 0.0);
                    return solve_equilibrium(ant, base, env, {}, cfg.solver, &warm);
                }
            };
            AntennaState ls = solve_antenna(left, warm_left);
            AntennaState rs = solve_antenna(right, warm_right);
            warm_left = ls.joint_deflections;
            warm_right = rs.joint_deflections;
            robot.left_antenna = ls;
            robot.right_antenna = rs;

            frame.raw_left = emulate_adc(ls.total_bend, cfg.sensor, cfg.calibration, rng);
            frame.raw_right = emulate_adc(rs.total_bend, cfg.sensor, cfg.calibration, rng);
            frame.averaged_left = win_left.push_and_average(frame.raw_left, t);
            frame.averaged_right = win_right.push_and_average(frame.raw_right, t);
            frame.bend_left = bend_level(frame.averaged_left, cfg.calibration, cfg.sensor);
            frame.bend_right = bend_level(frame.averaged_right, cfg.calibration, cfg.sensor);
            frame.contact_left = contact_state(frame.bend_left, cfg.calibration);
            frame.contact_right = contact_state(frame.bend_right, cfg.calibration);
            m = controller_step(controller, frame, t, cfg.controller);
        }

        robot = step_robot(robot, m, cfg.gait, dt, env, cfg.locomotion);
        record.path_length += (robot.head_pose.position - last_pos).norm();
        last_pos = robot.head_pose.position;

        TimelineEntry entry;
        entry.t = t;
        entry.head_pose = robot.head_pose;
        entry.maneuver = m;
        entry.frame = frame;
        record.timeline.push_back(entry);

        if (env.goal_region.contains(robot.head_pose.position)) {
            record.outcome = TrialOutcome::Success;
            break;
        }
        if (robot.stuck_timer > cfg.locomotion.stuck_limit ||
            !env.bounds.contains(robot.head_pose.position)) {
            record.outcome = TrialOutcome::Stuck;
            break;
        }
        if (t >= cfg.locomotion.timeout) {
            record.outcome = TrialOutcome::Timeout;
            break;
        }
    }
    record.elapsed = t;
    if (record.outcome == TrialOutcome::Success && record.elapsed > 0.0)
        record.mean_speed = record.path_length / record.elapsed;
    return record;
}

}  // namespace detail

inline ExperimentSummary run_tunnel(const ExperimentConfig& cfg) {
    if (cfg.scenario != Scenario::Tunnel)
        throw std::invalid_argument("config scenario is not tunnel");
    cfg.validate();
    ExperimentSummary summary;
    ConditionSummary closed, open;
    closed.condition = "closed_loop";
    open.condition = "open_loop";

    for (int i = 0; i < cfg.trials; ++i) {
        std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
        Environment env;
        try {
            env = build_tunnel(seed, cfg.tunnel.width, cfg.cylinder_count, cfg.tunnel);
        } catch (const TunnelGenerationError&) {
            ++summary.skipped;
            continue;
        }
        for (bool closed_loop : {true, false}) {
            Environment trial_env = env;  // matched worlds per seed
            TrialResult result;
            result.seed = seed;
            result.condition = closed_loop ? "closed_loop" : "open_loop";
            TrialRecord record;
            try {
                record = detail::run_tunnel_trial(seed, closed_loop, trial_env, cfg);
                result.classification = record.outcome == TrialOutcome::Success ? "success"
                                        : record.outcome == TrialOutcome::Stuck ? "stuck"
                                                                                : "timeout";
                result.elapsed = record.elapsed;
                result.path_length = record.path_length;
                result.mean_speed = record.mean_speed;
            } catch (const SolverFailure&) {
                result.classification = "error";
                record.seed = seed;
                record.scenario = closed_loop ? "tunnel:closed_loop" : "tunnel:open_loop";
            }
            detail::finalize_condition(closed_loop ? closed : open, result);
            summary.trial_results.push_back(result);
            summary.records.push_back(std::move(record));
        }
    }
    if (closed.successes > 0) closed.mean_speed /= closed.successes;
    if (open.successes > 0) open.mean_speed /= open.successes;
    summary.conditions.push_back(closed);
    summary.conditions.push_back(open);
    return summary;
}

// --- calibration sweep ----------------------------------------------------------

struct SweepRow {
    double speed = 0.0;  // m/s label
    double averaged_count = 0.0;
    double reference_bend = 0.0;
};

struct CalibrationSweepResult {
    FitResult combined;
    std::vector<std::pair<double, FitResult>> per_speed;
    std::vector<SweepRow> rows;
    Calibration fitted;
};

// Staircase indentation sweep: ramp to each deflection level at the traverse
// speed, dwell long enough for the averaging window to settle, then record
// the averaged count against the commanded level.
inline CalibrationSweepResult run_calibration_sweep(const ExperimentConfig& cfg) {
    if (cfg.scenario != Scenario::CalibrationSweep)
        throw std::invalid_argument("config scenario is not calibration_sweep");
    cfg.validate();
    const CalibrationSweepSpec& sp = cfg.sweep;

    CalibrationSweepResult out;
    std::vector<SweepPoint> all_points;
    for (std::size_t si = 0; si < sp.speeds.size(); ++si) {
        double speed = sp.speeds[si];
        double level_rate = (speed / sp.antenna_length) / cfg.sensor.bend_at_full;
        std::mt19937_64 rng(cfg.base_seed * 7919ULL + si);
        AveragingWindow window(cfg.averaging_window);
        double t = 0.0;
        double level = 0.0;
        double sample_dt = 1.0 / cfg.sensor.sample_rate;
        std::vector<SweepPoint> points;

        for (int i = 0; i < sp.levels; ++i) {
            double target = (i + 0.5) / sp.levels;
            double avg = 0.0;
            while (level < target) {
                level = std::min(level + level_rate * sample_dt, target);
                double bend = level * cfg.sensor.bend_at_full;
                avg = window.push_and_average(
                    emulate_adc(bend, cfg.sensor, cfg.calibration, rng), t);
                t += sample_dt;
            }
            double dwell_end = t + sp.dwell;
            while (t < dwell_end) {
                double bend = level * cfg.sensor.bend_at_full;
                avg = window.push_and_average(
                    emulate_adc(bend, cfg.sensor, cfg.calibration, rng), t);
                t += sample_dt;
            }
            points.push_back({avg, target});
            out.rows.push_back({speed, avg, target});
        }
        out.per_speed.emplace_back(speed, fit_calibration(points, cfg.sensor.full_scale));
        all_points.insert(all_points.end(), points.begin(), points.end());
    }

    out.combined = fit_calibration(all_points, cfg.sensor.full_scale);
    out.fitted.slope = out.combined.slope;
    out.fitted.midpoint = out.combined.midpoint;
    out.fitted.contact_threshold = cfg.calibration.contact_threshold;
    out.fitted.validate();
    return out;
}

}  // namespace antsim
