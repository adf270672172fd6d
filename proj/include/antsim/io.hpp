// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "antsim/controller.hpp"
#include "antsim/environment.hpp"
#include "antsim/gait.hpp"
#include "antsim/mechanics.hpp"
#include "antsim/sensing.hpp"
#include "antsim/world.hpp"

namespace antsim {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fixed-precision formatting so emitted CSVs are byte-stable across runs.
inline std::string fmt(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

// --- stiffness profiles ----------------------------------------------------

// Table-consistent constant: k [N*mm/deg] * N_c is ~0.822 for the measured
// 3/6/9-coil springs, so coil counts map to stiffness as 0.822 / N_c.
constexpr double kCoilStiffnessConstantNmmDeg = 0.822;

inline ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "uniform_stiff") return ProfileKind::UniformStiff;
    if (s == "uniform_compliant") return ProfileKind::UniformCompliant;
    if (s == "descending") return ProfileKind::Descending;
    if (s == "custom") return ProfileKind::Custom;
    throw ConfigError("unknown profile kind: " + s);
}

inline StiffnessProfile stiffness_profile_from_json(const json& j) {
    StiffnessProfile p;
    p.kind = j.contains("kind") ? profile_kind_from_string(j.at("kind").get<std::string>())
                                : ProfileKind::Custom;
    if (j.contains("stiffness_nmm_per_deg")) {
        for (double k : j.at("stiffness_nmm_per_deg"))
            p.joint_stiffness.push_back(nmm_per_deg_to_si(k));
    } else if (j.contains("coils")) {
        for (int nc : j.at("coils")) {
            if (nc < 1) throw ConfigError("coil counts must be >= 1");
            p.joint_stiffness.push_back(
                nmm_per_deg_to_si(kCoilStiffnessConstantNmmDeg / nc));
        }
    } else {
        throw ConfigError("stiffness profile needs 'coils' or 'stiffness_nmm_per_deg'");
    }
    p.validate();
    return p;
}

inline json stiffness_profile_to_json(const StiffnessProfile& p) {
    json j;
    j["kind"] = to_string(p.kind);
    json arr = json::array();
    for (double k : p.joint_stiffness) arr.push_back(si_to_nmm_per_deg(k));
    j["stiffness_nmm_per_deg"] = arr;
    return j;
}

// --- calibration -------------------------------------------------------------

inline Calibration calibration_from_json(const json& j) {
    Calibration c;
    c.slope = j.value("k_s", c.slope);
    c.midpoint = j.value("x_0", c.midpoint);
    c.contact_threshold = j.value("theta", c.contact_threshold);
    c.validate();
    return c;
}

inline json calibration_to_json(const Calibration& c) {
    return json{{"k_s", c.slope}, {"x_0", c.midpoint}, {"theta", c.contact_threshold}};
}

// --- controller / gait / sensing --------------------------------------------

inline ControllerConfig controller_from_json(const json& j) {
    ControllerConfig c;
    c.contact_threshold = j.value("theta", c.contact_threshold);
    c.strong_threshold = j.value("theta_strong", c.strong_threshold);
    c.symmetry_tolerance = j.value("eps_sym", c.symmetry_tolerance);
    c.hold_duration = j.value("t_hold", c.hold_duration);
    c.validate();
    return c;
}

inline json controller_to_json(const ControllerConfig& c) {
    return json{{"theta", c.contact_threshold},
                {"theta_strong", c.strong_threshold},
                {"eps_sym", c.symmetry_tolerance},
                {"t_hold", c.hold_duration}};
}

inline GaitParams gait_from_json(const json& j) {
    GaitParams g;
    g.amplitude = j.value("amplitude", g.amplitude);
    g.spatial_frequency = j.value("xi", g.spatial_frequency);
    g.temporal_frequency = j.value("omega", g.temporal_frequency);
    g.joint_count = j.value("joints", g.joint_count);
    g.validate();
    return g;
}

inline json gait_to_json(const GaitParams& g, double phi_turn) {
    return json{{"amplitude", g.amplitude},
                {"xi", g.spatial_frequency},
                {"omega", g.temporal_frequency},
                {"joints", g.joint_count},
                {"phi_turn", phi_turn}};
}

inline SensorModel sensor_from_json(const json& j) {
    SensorModel m;
    m.adc_bits = j.value("adc_bits", m.adc_bits);
    m.full_scale = j.value("full_scale", m.full_scale);
    m.noise_std = j.value("noise_std", m.noise_std);
    m.sample_rate = j.value("sample_rate", m.sample_rate);
    m.bend_at_full = j.value("bend_at_full", m.bend_at_full);
    m.validate();
    return m;
}

inline json sensor_to_json(const SensorModel& m) {
    return json{{"adc_bits", m.adc_bits},
                {"full_scale", m.full_scale},
                {"noise_std", m.noise_std},
                {"sample_rate", m.sample_rate},
                {"bend_at_full", m.bend_at_full}};
}

// --- environments ------------------------------------------------------------

inline json environment_to_json(const Environment& env) {
    json obstacles = json::array();
    for (const Obstacle& ob : env.obstacles) {
        json o;
        if (ob.is_circle()) {
            const Circle& c = ob.circle();
            o["type"] = "circle";
            o["center"] = {c.center.x, c.center.y};
            o["radius"] = c.radius;
        } else {
            const Wall& w = ob.wall();
            o["type"] = "wall";
            o["a"] = {w.a.x, w.a.y};
            o["b"] = {w.b.x, w.b.y};
            o["half_width"] = w.half_width;
        }
        o["movable"] = ob.movable;
        o["compliance"] = ob.compliance;
        obstacles.push_back(o);
    }
    auto rect = [](const Rect& r) {
        return json{{"lo", {r.lo.x, r.lo.y}}, {"hi", {r.hi.x, r.hi.y}}};
    };
    return json{{"obstacles", obstacles}, {"goal", rect(env.goal_region)},
                {"bounds", rect(env.bounds)}};
}

inline Environment environment_from_json(const json& j) {
    Environment env;
    for (const json& o : j.at("obstacles")) {
        Obstacle ob;
        std::string type = o.at("type");
        if (type == "circle") {
            ob.shape = Circle{{o.at("center")[0], o.at("center")[1]}, o.at("radius")};
        } else if (type == "wall") {
            ob.shape = Wall{{o.at("a")[0], o.at("a")[1]},
                            {o.at("b")[0], o.at("b")[1]},
                            o.value("half_width", 0.005)};
        } else {
            throw ConfigError("unknown obstacle type: " + type);
        }
        ob.movable = o.value("movable", false);
        ob.compliance = o.value("compliance", 0.0);
        env.obstacles.push_back(ob);
    }
    auto rect = [](const json& r) {
        return Rect{{r.at("lo")[0], r.at("lo")[1]}, {r.at("hi")[0], r.at("hi")[1]}};
    };
    if (j.contains("goal")) env.goal_region = rect(j.at("goal"));
    if (j.contains("bounds")) env.bounds = rect(j.at("bounds"));
    env.validate();
    return env;
}

// --- sweep CSV ----------------------------------------------------------------

// Reads `avg_adc,ref_bend` rows; a leading label column (e.g. speed) is
// tolerated and ignored.
inline std::vector<SweepPoint> read_sweep_csv(std::istream& in) {
    std::vector<SweepPoint> points;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty sweep CSV");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    int adc_col = -1, bend_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "avg_adc") adc_col = static_cast<int>(i);
        if (header[i] == "ref_bend") bend_col = static_cast<int>(i);
    }
    if (adc_col < 0 || bend_col < 0)
        throw ConfigError("sweep CSV must have avg_adc and ref_bend columns");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        points.push_back({std::stod(cells.at(adc_col)), std::stod(cells.at(bend_col))});
    }
    return points;
}

inline std::vector<SweepPoint> read_sweep_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep CSV: " + path);
    return read_sweep_csv(in);
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace antsim
