// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <vector>

#include "antsim/geometry.hpp"

namespace antsim {

// Flex-sensor / ADC front end. The emulated sensor reads high when straight
// and saturates low as the antenna approaches bend_at_full.
struct SensorModel {
    int adc_bits = 12;
    int full_scale = 4095;
    double noise_std = 8.0;          // counts
    double sample_rate = 100.0;      // Hz
    double bend_at_full = kPi / 6.0; // rad of total bend at low saturation

    void validate() const {
        if (adc_bits == 12 && full_scale != 4095)
            throw std::invalid_argument("12-bit ADC implies full_scale 4095");
        if (noise_std < 0.0 || sample_rate <= 0.0 || bend_at_full <= 0.0)
            throw std::invalid_argument("invalid SensorModel");
    }
};

struct Calibration {
    double slope = 18.3;            // k_s, dimensionless
    double midpoint = 0.305;        // x_0, fraction of full scale
    double contact_threshold = 0.5; // theta, on the bend level

    void validate() const {
        if (!(slope > 0.0)) throw std::invalid_argument("calibration slope must be positive");
        if (!(midpoint > 0.0 && midpoint < 1.0))
            throw std::invalid_argument("calibration midpoint must be in (0,1)");
        if (!(contact_threshold > 0.0 && contact_threshold < 1.0))
            throw std::invalid_argument("contact threshold must be in (0,1)");
    }
};

// Decreasing sigmoid from normalized ADC to bend level, b = 1/(1+e^{k_s (x - x_0)}).
inline double bend_level_from_normalized(double x, const Calibration& calib) {
    return 1.0 / (1.0 + std::exp(calib.slope * (x - calib.midpoint)));
}

inline double bend_level(double averaged_count, const Calibration& calib,
                         const SensorModel& model) {
    if (averaged_count < 0.0 || averaged_count > model.full_scale)
        throw std::invalid_argument("averaged count outside ADC range");
    return bend_level_from_normalized(averaged_count / model.full_scale, calib);
}

inline bool contact_state(double bend, const Calibration& calib) {
    if (bend < 0.0 || bend > 1.0) throw std::invalid_argument("bend level outside [0,1]");
    return bend >= calib.contact_threshold;
}

// Noiseless inverse of the calibration sigmoid, clamped to the ADC range.
inline double ideal_count_for_level(double level, const Calibration& calib,
                                    const SensorModel& model) {
    level = std::clamp(level, 1e-12, 1.0 - 1e-12);
    double x = calib.midpoint + std::log(1.0 / level - 1.0) / calib.slope;
    return std::clamp(x, 0.0, 1.0) * model.full_scale;
}

inline int emulate_adc_from_level(double level, const SensorModel& model,
                                  const Calibration& calib, std::mt19937_64& rng) {
    double count = ideal_count_for_level(level, calib, model);
    if (model.noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, model.noise_std);
        count += noise(rng);
    }
    count = std::clamp(count, 0.0, static_cast<double>(model.full_scale));
    return static_cast<int>(std::lround(count));
}

inline int emulate_adc(double total_bend, const SensorModel& model, const Calibration& calib,
                       std::mt19937_64& rng) {
    if (total_bend < 0.0) throw std::invalid_argument("total bend must be non-negative");
    double level = std::min(total_bend / model.bend_at_full, 1.0);
    return emulate_adc_from_level(level, model, calib, rng);
}

// Short-time average over a sliding window (t - T_avg, t].
class AveragingWindow {
public:
    explicit AveragingWindow(double window_seconds = 0.05) : window_(window_seconds) {
        if (!(window_ > 0.0)) throw std::invalid_argument("averaging window must be positive");
    }

    double push_and_average(double sample, double t) {
        if (!samples_.empty() && t < samples_.back().t)
            throw std::invalid_argument("sample timestamps must be non-decreasing");
        samples_.push_back({t, sample});
        while (samples_.front().t <= t - window_) samples_.pop_front();
        double sum = 0.0;
        for (const auto& s : samples_) sum += s.value;
        return sum / static_cast<double>(samples_.size());
    }

    void reset() { samples_.clear(); }
    double span() const { return window_; }

private:
    struct Sample {
        double t;
        double value;
    };
    double window_;
    std::deque<Sample> samples_;
};

// One bilateral sensor reading after the full front end.
struct SensorFrame {
    double t = 0.0;
    int raw_left = 0, raw_right = 0;
    double averaged_left = 0.0, averaged_right = 0.0;
    double bend_left = 0.0, bend_right = 0.0;
    bool contact_left = false, contact_right = false;
};

struct FitResult {
    double slope = 0.0;
    double midpoint = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepPoint {
    double averaged_count = 0.0;
    double reference_bend = 0.0;  // normalized level in [0,1]
};

// Least-squares fit of the decreasing sigmoid to (averaged count, reference
// level) sweep data. A logit-space linear regression gives the starting
// point, then Gauss-Newton refines on the sigmoid residuals.
inline FitResult fit_calibration(const std::vector<SweepPoint>& sweep,
                                 double full_scale = 4095.0) {
    if (sweep.size() < 4) throw FitError("calibration sweep needs at least 4 points");

    double bmin = 1.0, bmax = 0.0;
    for (const auto& p : sweep) {
        bmin = std::min(bmin, p.reference_bend);
        bmax = std::max(bmax, p.reference_bend);
    }
    if (bmax - bmin < 1e-9) throw FitError("calibration sweep is degenerate (constant reference)");

    // Logit regression: log(1/b - 1) = k_s (x - x_0).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& p : sweep) {
        double b = p.reference_bend;
        if (b < 1e-4 || b > 1.0 - 1e-4) continue;
        double x = p.averaged_count / full_scale;
        double y = std::log(1.0 / b - 1.0);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 2) throw FitError("not enough points inside the sigmoid transition");
    double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-15) throw FitError("sweep does not span the transition");
    double slope = (m * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / m;
    if (!(slope > 0.0)) throw FitError("sweep is not decreasing in ADC counts");
    double ks = slope;
    double x0 = -intercept / slope;

    auto rms = [&](double k, double c) {
        double ss = 0.0;
        for (const auto& p : sweep) {
            double x = p.averaged_count / full_scale;
            double r = 1.0 / (1.0 + std::exp(k * (x - c))) - p.reference_bend;
            ss += r * r;
        }
        return std::sqrt(ss / sweep.size());
    };

    // Gauss-Newton on (k_s, x_0).
    int it = 0;
    for (; it < 100; ++it) {
        double a11 = 0, a12 = 0, a22 = 0, g1 = 0, g2 = 0;
        for (const auto& p : sweep) {
            double x = p.averaged_count / full_scale;
            double s = 1.0 / (1.0 + std::exp(ks * (x - x0)));
            double r = s - p.reference_bend;
            double ds = -s * (1.0 - s);           // d sigmoid / d argument
            double jk = ds * (x - x0);
            double jx = ds * (-ks);
            a11 += jk * jk; a12 += jk * jx; a22 += jx * jx;
            g1 += jk * r; g2 += jx * r;
        }
        double det = a11 * a22 - a12 * a12;
        if (std::abs(det) < 1e-18) break;
        double dk = (a22 * g1 - a12 * g2) / det;
        double dx = (a11 * g2 - a12 * g1) / det;
        ks -= dk;
        x0 -= dx;
        if (std::abs(dk) < 1e-12 * std::max(1.0, std::abs(ks)) &&
            std::abs(dx) < 1e-12)
            break;
    }
    if (!(ks > 0.0) || !std::isfinite(ks) || !std::isfinite(x0))
        throw FitError("sigmoid fit diverged");

    FitResult result;
    result.slope = ks;
    result.midpoint = x0;
    result.rms_residual = rms(ks, x0);
    result.iterations = it;
    return result;
}

}  // namespace antsim
