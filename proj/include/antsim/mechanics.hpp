// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "antsim/environment.hpp"
#include "antsim/geometry.hpp"

namespace antsim {

// 1 N*mm/deg expressed in N*m/rad.
constexpr double kNmmPerDegToSi = 1e-3 * 180.0 / kPi;

inline double nmm_per_deg_to_si(double k) { return k * kNmmPerDegToSi; }
inline double si_to_nmm_per_deg(double k) { return k / kNmmPerDegToSi; }

// Close-coiled helical torsion spring, SI units throughout.
struct SpringSpec {
    double youngs_modulus = 0.0;  // Pa
    double wire_diameter = 0.0;   // m
    double coil_diameter = 0.0;   // m (mean)
    int active_coils = 0;

    void validate() const {
        if (youngs_modulus <= 0.0 || wire_diameter <= 0.0 || coil_diameter <= 0.0 ||
            active_coils < 1)
            throw std::invalid_argument("SpringSpec fields must be strictly positive");
    }
};

// Torsional stiffness in N*m/rad. The 10.8 factor comes from curved-beam
// bending theory for close-coiled torsion springs.
inline double torsion_stiffness(const SpringSpec& spec) {
    spec.validate();
    double dw4 = std::pow(spec.wire_diameter, 4);
    return spec.youngs_modulus * dw4 /
           (10.8 * spec.coil_diameter * static_cast<double>(spec.active_coils));
}

enum class ProfileKind { UniformStiff, UniformCompliant, Descending, Custom };

inline std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::UniformStiff: return "uniform_stiff";
        case ProfileKind::UniformCompliant: return "uniform_compliant";
        case ProfileKind::Descending: return "descending";
        case ProfileKind::Custom: return "custom";
    }
    return "custom";
}

struct StiffnessProfile {
    std::vector<double> joint_stiffness;  // N*m/rad, base (index 0) to tip
    ProfileKind kind = ProfileKind::Custom;

    void validate() const {
        if (joint_stiffness.empty())
            throw std::invalid_argument("StiffnessProfile must not be empty");
        for (double k : joint_stiffness)
            if (!(k > 0.0)) throw std::invalid_argument("joint stiffness must be positive");
        if (kind == ProfileKind::Descending) {
            for (std::size_t j = 1; j < joint_stiffness.size(); ++j)
                if (joint_stiffness[j] > joint_stiffness[j - 1] + 1e-15)
                    throw std::invalid_argument(
                        "descending profile must be non-increasing base to tip");
        }
    }
};

struct DiameterProfile {
    std::vector<double> diameters;  // m, proximal (index 0) to distal

    void validate() const {
        if (diameters.size() < 2)
            throw std::invalid_argument("DiameterProfile needs at least two entries");
        for (double d : diameters)
            if (!(d > 0.0)) throw std::invalid_argument("diameters must be positive");
    }
};

// Normalized bending-stiffness proxy relative to the proximal segment,
// (d_j / d_1)^4. Follows from the area moment of a circular section,
// I = pi d^4 / 64.
inline std::vector<double> normalized_stiffness(const DiameterProfile& profile) {
    profile.validate();
    std::vector<double> out;
    out.reserve(profile.diameters.size());
    double d1 = profile.diameters.front();
    for (double d : profile.diameters) {
        double r = d / d1;
        out.push_back(r * r * r * r);
    }
    return out;
}

// Measured spring set used on the hardware antenna: one stiff spring at the
// base (3 coils), two medium (6 coils), three compliant near the tip (9
// coils). Values in N*mm/deg converted to SI.
inline StiffnessProfile measured_descending_profile() {
    StiffnessProfile p;
    for (double k_nmm : {0.274, 0.137, 0.137, 0.091, 0.091, 0.091})
        p.joint_stiffness.push_back(nmm_per_deg_to_si(k_nmm));
    p.kind = ProfileKind::Descending;
    return p;
}

inline StiffnessProfile uniform_profile(double k_nmm_per_deg, std::size_t joints,
                                        ProfileKind kind) {
    StiffnessProfile p;
    p.joint_stiffness.assign(joints, nmm_per_deg_to_si(k_nmm_per_deg));
    p.kind = kind;
    return p;
}

struct AntennaConfig {
    std::vector<double> link_lengths;  // m, base to tip
    StiffnessProfile profile;
    double base_mount_angle = 0.0;                       // rad, relative to body heading
    double max_linear_deflection = deg_to_rad(30.0);     // per-joint linear-range limit

    void validate() const {
        profile.validate();
        if (link_lengths.size() != profile.joint_stiffness.size())
            throw std::invalid_argument("link count must equal joint count");
        for (double l : link_lengths)
            if (!(l > 0.0)) throw std::invalid_argument("link lengths must be positive");
    }

    double total_length() const {
        double s = 0.0;
        for (double l : link_lengths) s += l;
        return s;
    }
};

// Six equal links totaling 0.18 m, matching the six-spring hardware antenna.
inline AntennaConfig default_antenna(StiffnessProfile profile = measured_descending_profile(),
                                     double mount_angle = 0.0) {
    AntennaConfig cfg;
    cfg.link_lengths.assign(profile.joint_stiffness.size(),
                            0.18 / static_cast<double>(profile.joint_stiffness.size()));
    cfg.profile = std::move(profile);
    cfg.base_mount_angle = mount_angle;
    return cfg;
}

struct AntennaContact {
    std::size_t link_index = 0;
    Vec2 point;
    Vec2 normal;          // unit, out of the obstacle
    double normal_force = 0.0;  // N, >= 0
    double penetration = 0.0;   // m
};

struct AntennaState {
    std::vector<double> joint_deflections;  // rad, base to tip
    std::vector<Vec2> link_endpoints;       // joint/tip positions, size links+1
    std::vector<AntennaContact> contacts;
    double total_bend = 0.0;       // sum of |deflection|
    double residual = 0.0;         // max |k_j Theta_j - M_j| at return, N*m
    bool beyond_linear = false;    // some joint exceeded max_linear_deflection
    int iterations = 0;
};

// External point load on the chain, e.g. a calibration indenter at the tip.
struct AppliedForce {
    std::size_t link_index = 0;
    double along = 1.0;  // position on the link, 0 = proximal joint, 1 = distal end
    Vec2 force;          // N, world frame
};

struct SolverParams {
    double penalty_stiffness = 500.0;  // N/m
    double damping = 0.5;
    int max_iterations = 2000;
    double residual_tolerance = 1e-6;  // N*m
};

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(double residual, int iterations)
        : std::runtime_error("equilibrium solve did not converge, residual " +
                             std::to_string(residual) + " N*m after " +
                             std::to_string(iterations) + " iterations"),
          last_residual(residual) {}
    double last_residual;
};

namespace detail {

inline std::vector<Vec2> chain_points(const AntennaConfig& cfg, const Pose& base,
                                      const std::vector<double>& deflections) {
    std::vector<Vec2> pts;
    pts.reserve(cfg.link_lengths.size() + 1);
    pts.push_back(base.position);
    double angle = base.heading + cfg.base_mount_angle;
    for (std::size_t j = 0; j < cfg.link_lengths.size(); ++j) {
        angle += deflections[j];
        pts.push_back(pts.back() + unit_vector(angle) * cfg.link_lengths[j]);
    }
    return pts;
}

}  // namespace detail

// Quasi-static equilibrium of the spring chain against penalty contacts and
// any applied loads. Damped Newton on the per-joint torque residual; plain
// Theta <- M/k relaxation diverges when the penalty stiffness dominates the
// springs.
inline AntennaState solve_equilibrium(const AntennaConfig& cfg, const Pose& base_pose,
                                      const Environment& env,
                                      const std::vector<AppliedForce>& applied = {},
                                      const SolverParams& params = {},
                                      const std::vector<double>* warm_start = nullptr) {
    cfg.validate();
    if (!std::isfinite(base_pose.position.x) || !std::isfinite(base_pose.position.y) ||
        !std::isfinite(base_pose.heading))
        throw std::invalid_argument("base pose must be finite");

    const std::size_t n = cfg.link_lengths.size();
    const std::vector<double>& k = cfg.profile.joint_stiffness;

    std::vector<double> theta(n, 0.0);
    if (warm_start && warm_start->size() == n) theta = *warm_start;

    std::vector<Vec2> pts;
    std::vector<Contact> contacts;
    std::vector<double> moment(n), resid(n);
    std::vector<double> jac(n * n);  // d(k Theta - M)/dTheta, SPD
    double residual = std::numeric_limits<double>::infinity();
    int iter = 0;

    auto evaluate = [&](const std::vector<double>& th, bool with_jacobian) {
        pts = detail::chain_points(cfg, base_pose, th);
        contacts = chain_contacts(pts, env);
        std::fill(moment.begin(), moment.end(), 0.0);
        if (with_jacobian) {
            std::fill(jac.begin(), jac.end(), 0.0);
            for (std::size_t j = 0; j < n; ++j) jac[j * n + j] = k[j];
        }
        for (const Contact& c : contacts) {
            // h_j = d(penetration)/d(-Theta_j) = (point - joint_j) x normal;
            // contact moment about joint j is k_pen * pen * h_j.
            double f = params.penalty_stiffness * c.penetration;
            for (std::size_t j = 0; j <= c.link_index; ++j) {
                double hj = (c.point - pts[j]).cross(c.normal);
                moment[j] += f * hj;
                if (with_jacobian)
                    for (std::size_t l = 0; l <= c.link_index; ++l)
                        jac[j * n + l] += params.penalty_stiffness * hj *
                                          (c.point - pts[l]).cross(c.normal);
            }
        }
        for (const AppliedForce& af : applied) {
            if (af.link_index >= n) throw std::invalid_argument("applied force link out of range");
            Vec2 p = pts[af.link_index] +
                     (pts[af.link_index + 1] - pts[af.link_index]) * af.along;
            for (std::size_t j = 0; j <= af.link_index; ++j)
                moment[j] += (p - pts[j]).cross(af.force);
        }
        residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            resid[j] = moment[j] - k[j] * th[j];
            residual = std::max(residual, std::abs(resid[j]));
        }
    };

    // Damped Newton on the torque residual. The linearized system couples
    // joints through each contact's rank-one penalty stiffness; solving it
    // exactly avoids the limit cycles a per-joint relaxation falls into.
    evaluate(theta, true);
    std::vector<double> delta(n), trial(n);
    while (residual > params.residual_tolerance && iter < params.max_iterations) {
        // Gaussian elimination with partial pivoting on the n x n system.
        std::vector<double> a = jac;
        delta = resid;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t row = col + 1; row < n; ++row)
                if (std::abs(a[row * n + col]) > std::abs(a[piv * n + col])) piv = row;
            if (std::abs(a[piv * n + col]) < 1e-300) throw SolverFailure(residual, iter);
            if (piv != col) {
                for (std::size_t l = 0; l < n; ++l) std::swap(a[col * n + l], a[piv * n + l]);
                std::swap(delta[col], delta[piv]);
            }
            for (std::size_t row = col + 1; row < n; ++row) {
                double m = a[row * n + col] / a[col * n + col];
                for (std::size_t l = col; l < n; ++l) a[row * n + l] -= m * a[col * n + l];
                delta[row] -= m * delta[col];
            }
        }
        for (std::size_t col = n; col-- > 0;) {
            for (std::size_t l = col + 1; l < n; ++l)
                delta[col] -= a[col * n + l] * delta[l];
            delta[col] /= a[col * n + col];
        }

        // Backtrack when a step crosses a contact-set change and worsens the
        // residual.
        double prev_residual = residual;
        double alpha = params.damping;
        for (int bt = 0; bt < 12; ++bt) {
            for (std::size_t j = 0; j < n; ++j) trial[j] = theta[j] + alpha * delta[j];
            evaluate(trial, false);
            if (residual < prev_residual || residual <= params.residual_tolerance) break;
            alpha *= 0.5;
        }
        theta = trial;
        evaluate(theta, true);
        ++iter;
    }
    if (residual > params.residual_tolerance) throw SolverFailure(residual, iter);

    AntennaState state;
    state.joint_deflections = theta;
    state.link_endpoints = pts;
    state.residual = residual;
    state.iterations = iter;
    for (double t : theta) {
        state.total_bend += std::abs(t);
        if (std::abs(t) > cfg.max_linear_deflection) state.beyond_linear = true;
    }
    state.contacts.reserve(contacts.size());
    for (const Contact& c : contacts) {
        AntennaContact ac;
        ac.link_index = c.link_index;
        ac.point = c.point;
        ac.normal = c.normal;
        ac.penetration = c.penetration;
        ac.normal_force = params.penalty_stiffness * c.penetration;
        state.contacts.push_back(ac);
    }
    return state;
}

// Sum of contact force magnitudes on the distal link.
inline double tip_contact_force(const AntennaState& state) {
    if (state.link_endpoints.size() < 2) return 0.0;
    std::size_t tip = state.link_endpoints.size() - 2;
    double f = 0.0;
    for (const AntennaContact& c : state.contacts)
        if (c.link_index == tip) f += c.normal_force;
    return f;
}

}  // namespace antsim
