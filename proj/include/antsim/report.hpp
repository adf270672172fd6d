// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "antsim/experiments.hpp"
#include "antsim/io.hpp"

namespace antsim {

inline Scenario scenario_from_string(const std::string& s) {
    if (s == "boulder_wall") return Scenario::BoulderWall;
    if (s == "tunnel") return Scenario::Tunnel;
    if (s == "calibration_sweep") return Scenario::CalibrationSweep;
    throw ConfigError("unknown scenario: " + s);
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("scenario")) cfg.scenario = scenario_from_string(j.at("scenario"));
    cfg.trials = j.value("trials", cfg.trials);
    cfg.base_seed = j.value("seed", cfg.base_seed);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.averaging_window = j.value("t_avg", cfg.averaging_window);
    cfg.antenna_mount = j.value("antenna_mount", cfg.antenna_mount);

    if (j.contains("sensor")) cfg.sensor = sensor_from_json(j.at("sensor"));
    if (j.contains("calibration")) cfg.calibration = calibration_from_json(j.at("calibration"));
    if (j.contains("controller")) cfg.controller = controller_from_json(j.at("controller"));
    if (j.contains("gait")) {
        cfg.gait = gait_from_json(j.at("gait"));
        cfg.locomotion.turn_offset = j.at("gait").value("phi_turn", cfg.locomotion.turn_offset);
    }
    if (j.contains("antenna_profile"))
        cfg.antenna_profile = stiffness_profile_from_json(j.at("antenna_profile"));
    if (j.contains("profiles")) {
        cfg.profiles.clear();
        for (const json& p : j.at("profiles"))
            cfg.profiles.emplace_back(p.at("name").get<std::string>(),
                                      stiffness_profile_from_json(p));
    }
    if (j.contains("locomotion")) {
        const json& l = j.at("locomotion");
        cfg.locomotion.forward_speed = l.value("v_forward", cfg.locomotion.forward_speed);
        cfg.locomotion.reverse_speed = l.value("v_reverse", cfg.locomotion.reverse_speed);
        cfg.locomotion.turn_curvature = l.value("kappa", cfg.locomotion.turn_curvature);
        cfg.locomotion.stuck_limit = l.value("stuck_limit", cfg.locomotion.stuck_limit);
        cfg.locomotion.timeout = l.value("timeout", cfg.locomotion.timeout);
    }
    if (j.contains("tunnel")) {
        const json& t = j.at("tunnel");
        cfg.tunnel.width = t.value("width", cfg.tunnel.width);
        cfg.tunnel.leg1_length = t.value("leg1_length", cfg.tunnel.leg1_length);
        cfg.tunnel.leg2_length = t.value("leg2_length", cfg.tunnel.leg2_length);
        if (t.contains("turn_deg")) cfg.tunnel.turn_angle = deg_to_rad(t.at("turn_deg"));
        cfg.tunnel.cylinder_radius = t.value("cylinder_radius", cfg.tunnel.cylinder_radius);
        cfg.tunnel.cylinder_compliance =
            t.value("cylinder_compliance", cfg.tunnel.cylinder_compliance);
        cfg.cylinder_count = t.value("cylinders", cfg.cylinder_count);
        cfg.tunnel_dt = t.value("dt", cfg.tunnel_dt);
    }
    if (j.contains("boulder_wall")) {
        const json& b = j.at("boulder_wall");
        cfg.boulder.spacing = b.value("spacing", cfg.boulder.spacing);
        cfg.boulder.boulder_count = b.value("count", cfg.boulder.boulder_count);
        cfg.boulder.traverse_speed = b.value("speed", cfg.boulder.traverse_speed);
        cfg.boulder.mount_angle = b.value("mount_angle", cfg.boulder.mount_angle);
        cfg.boulder.overlap = b.value("overlap", cfg.boulder.overlap);
        cfg.boulder.overlap_jitter = b.value("overlap_jitter", cfg.boulder.overlap_jitter);
        cfg.boulder.dt = b.value("dt", cfg.boulder.dt);
        cfg.boulder.jam_force = b.value("jam_force", cfg.boulder.jam_force);
        cfg.boulder.track_force = b.value("track_force", cfg.boulder.track_force);
        cfg.boulder.jam_sustain = b.value("jam_sustain", cfg.boulder.jam_sustain);
        cfg.boulder.coverage_min = b.value("coverage_min", cfg.boulder.coverage_min);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.contains("speeds"))
            cfg.sweep.speeds = s.at("speeds").get<std::vector<double>>();
        cfg.sweep.levels = s.value("levels", cfg.sweep.levels);
        cfg.sweep.dwell = s.value("dwell", cfg.sweep.dwell);
    }
    cfg.validate();
    return cfg;
}

inline json experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["scenario"] = to_string(cfg.scenario);
    j["trials"] = cfg.trials;
    j["seed"] = cfg.base_seed;
    j["out"] = cfg.out_dir;
    j["t_avg"] = cfg.averaging_window;
    j["antenna_mount"] = cfg.antenna_mount;
    j["sensor"] = sensor_to_json(cfg.sensor);
    j["calibration"] = calibration_to_json(cfg.calibration);
    j["controller"] = controller_to_json(cfg.controller);
    j["gait"] = gait_to_json(cfg.gait, cfg.locomotion.turn_offset);
    j["antenna_profile"] = stiffness_profile_to_json(cfg.antenna_profile);
    json profiles = json::array();
    for (const auto& [name, p] : cfg.profiles) {
        json pj = stiffness_profile_to_json(p);
        pj["name"] = name;
        profiles.push_back(pj);
    }
    j["profiles"] = profiles;
    j["locomotion"] = {{"v_forward", cfg.locomotion.forward_speed},
                       {"v_reverse", cfg.locomotion.reverse_speed},
                       {"kappa", cfg.locomotion.turn_curvature},
                       {"stuck_limit", cfg.locomotion.stuck_limit},
                       {"timeout", cfg.locomotion.timeout}};
    j["tunnel"] = {{"width", cfg.tunnel.width},
                   {"leg1_length", cfg.tunnel.leg1_length},
                   {"leg2_length", cfg.tunnel.leg2_length},
                   {"turn_deg", rad_to_deg(cfg.tunnel.turn_angle)},
                   {"cylinder_radius", cfg.tunnel.cylinder_radius},
                   {"cylinder_compliance", cfg.tunnel.cylinder_compliance},
                   {"cylinders", cfg.cylinder_count},
                   {"dt", cfg.tunnel_dt}};
    j["boulder_wall"] = {{"spacing", cfg.boulder.spacing},
                         {"count", cfg.boulder.boulder_count},
                         {"speed", cfg.boulder.traverse_speed},
                         {"mount_angle", cfg.boulder.mount_angle},
                         {"overlap", cfg.boulder.overlap},
                         {"overlap_jitter", cfg.boulder.overlap_jitter},
                         {"dt", cfg.boulder.dt},
                         {"jam_force", cfg.boulder.jam_force},
                         {"track_force", cfg.boulder.track_force},
                         {"jam_sustain", cfg.boulder.jam_sustain},
                         {"coverage_min", cfg.boulder.coverage_min}};
    j["sweep"] = {{"speeds", cfg.sweep.speeds},
                  {"levels", cfg.sweep.levels},
                  {"dwell", cfg.sweep.dwell}};
    return j;
}

inline std::string summary_csv(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << "condition,trials,successes,success_rate,jams,missed_contacts,stuck,timeouts,"
           "other_failures,mean_speed_mps\n";
    for (const ConditionSummary& c : summary.conditions) {
        out << c.condition << ',' << c.trials << ',' << c.successes << ','
            << fmt(c.success_rate()) << ',' << c.jams << ',' << c.missed_contacts << ','
            << c.stuck << ',' << c.timeouts << ',' << c.other_failures << ','
            << fmt(c.mean_speed) << '\n';
    }
    return out.str();
}

inline std::string trial_csv(const TrialRecord& record) {
    std::ostringstream out;
    out << "t,x,y,heading,maneuver,b_l,b_r\n";
    for (const TimelineEntry& e : record.timeline) {
        out << fmt(e.t, 3) << ',' << fmt(e.head_pose.position.x) << ','
            << fmt(e.head_pose.position.y) << ',' << fmt(e.head_pose.heading) << ','
            << to_string(e.maneuver) << ',' << fmt(e.frame.bend_left) << ','
            << fmt(e.frame.bend_right) << '\n';
    }
    return out.str();
}

inline std::string decision_log_csv(const TrialRecord& record) {
    std::ostringstream out;
    out << "t,b_l,b_r,maneuver\n";
    for (const TimelineEntry& e : record.timeline)
        out << fmt(e.t, 3) << ',' << fmt(e.frame.bend_left) << ','
            << fmt(e.frame.bend_right) << ',' << to_string(e.maneuver) << '\n';
    return out.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "speed_cmps,avg_adc,ref_bend\n";
    for (const SweepRow& r : rows)
        out << fmt(r.speed * 100.0, 1) << ',' << fmt(r.averaged_count, 3) << ','
            << fmt(r.reference_bend) << '\n';
    return out.str();
}

inline std::string trial_file_name(const TrialRecord& record) {
    // scenario tag after the colon distinguishes paired tunnel modes and
    // boulder-wall conditions sharing a seed.
    std::string tag = record.scenario;
    auto pos = tag.find(':');
    if (pos != std::string::npos) tag = tag.substr(pos + 1);
    return std::to_string(record.seed) + "_" + tag + ".csv";
}

// Runs the configured experiment and writes summary.csv, trials/<seed>_*.csv
// and config.snapshot under cfg.out_dir.
inline ExperimentSummary run_experiment_to_dir(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    write_text_file((fs::path(cfg.out_dir) / "config.snapshot").string(),
                    experiment_config_to_json(cfg).dump(2) + "\n");

    ExperimentSummary summary;
    if (cfg.scenario == Scenario::CalibrationSweep) {
        CalibrationSweepResult result;
        std::string fit_error;
        try {
            result = run_calibration_sweep(cfg);
        } catch (const FitError& e) {
            fit_error = e.what();
        }
        write_text_file((fs::path(cfg.out_dir) / "sweep.csv").string(),
                        sweep_csv(result.rows));
        if (!fit_error.empty()) throw FitError(fit_error);
        write_text_file((fs::path(cfg.out_dir) / "calibration.json").string(),
                        calibration_to_json(result.fitted).dump(2) + "\n");
        std::ostringstream fits;
        fits << "series,k_s,x_0,rms_residual\n";
        fits << "combined," << fmt(result.combined.slope, 4) << ','
             << fmt(result.combined.midpoint, 6) << ','
             << fmt(result.combined.rms_residual, 9) << '\n';
        for (const auto& [speed, fit] : result.per_speed)
            fits << "v_" << fmt(speed * 100.0, 0) << "cmps," << fmt(fit.slope, 4) << ','
                 << fmt(fit.midpoint, 6) << ',' << fmt(fit.rms_residual, 9) << '\n';
        write_text_file((fs::path(cfg.out_dir) / "fits.csv").string(), fits.str());
        return summary;
    }

    summary = cfg.scenario == Scenario::BoulderWall ? run_boulder_wall(cfg) : run_tunnel(cfg);
    write_text_file((fs::path(cfg.out_dir) / "summary.csv").string(), summary_csv(summary));
    fs::create_directories(fs::path(cfg.out_dir) / "trials");
    for (const TrialRecord& record : summary.records) {
        if (record.timeline.empty() && record.elapsed == 0.0) continue;  // errored trial
        write_text_file((fs::path(cfg.out_dir) / "trials" / trial_file_name(record)).string(),
                        trial_csv(record));
    }
    if (cfg.scenario == Scenario::Tunnel) {
        fs::create_directories(fs::path(cfg.out_dir) / "decisions");
        for (const TrialRecord& record : summary.records)
            if (record.scenario == "tunnel:closed_loop" && !record.timeline.empty())
                write_text_file((fs::path(cfg.out_dir) / "decisions" /
                                 (std::to_string(record.seed) + ".csv"))
                                    .string(),
                                decision_log_csv(record));
    }
    return summary;
}

}  // namespace antsim
