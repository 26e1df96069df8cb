#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "eventcast/errors.hpp"
#include "eventcast/fit.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

/// One event's additive traffic pulse.  `volume` is the total traffic the
/// pulse carries (the integral of the curve), `center` the hour it peaks on
/// the continuous day axis, `width` its spread in hours.
struct EventPulse {
    double volume = 0.0;  // R_sg, traffic units x hours
    double center = 0.0;  // t_sg
    double width = 1.0;   // sigma_sg
};

inline void validate(const EventPulse& p) {
    if (p.volume < 0.0) throw std::invalid_argument("pulse volume must be non-negative");
    if (!(p.width > 0.0)) throw std::invalid_argument("pulse width must be positive");
}

/// Peak traffic rate of the pulse: volume / (width * sqrt(2 pi)).
inline double pulse_peak(const EventPulse& p) {
    return p.volume / (p.width * std::sqrt(2.0 * std::numbers::pi));
}

inline double eval_pulse(const EventPulse& p, double t) {
    double u = (t - p.center) / p.width;
    return pulse_peak(p) * std::exp(-0.5 * u * u);
}

/// Pulse with its center shifted by `hours` (used to re-anchor a pulse onto
/// another day's axis: +24 per day forward).
inline EventPulse shifted(const EventPulse& p, double hours) {
    return EventPulse{p.volume, p.center + hours, p.width};
}

/// Trapezoid integral of the pulse over [center - span*width, center + span*width].
/// With grid_step <= width/4 and span >= 6 the result matches `volume` to
/// well within 0.1%.
inline double pulse_volume(const EventPulse& p, double grid_step, double span) {
    validate(p);
    if (!(grid_step > 0.0) || grid_step > p.width / 4.0)
        throw std::invalid_argument("pulse_volume: grid_step must lie in (0, width/4]");
    if (span < 6.0) throw std::invalid_argument("pulse_volume: span must be at least 6 widths");
    double lo = p.center - span * p.width;
    double hi = p.center + span * p.width;
    auto n = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step));
    double h = (hi - lo) / static_cast<double>(n);
    double sum = 0.5 * (eval_pulse(p, lo) + eval_pulse(p, hi));
    for (std::size_t i = 1; i < n; ++i)
        sum += eval_pulse(p, lo + h * static_cast<double>(i));
    return sum * h;
}

/// Total traffic: daily series plus the pulse sampled at each hour.  Sample
/// coordinates follow the series' own day frame (see day_frame_hour), so the
/// pulse center must be expressed on that frame.
inline HourlyTrafficSeries compose_total(const HourlyTrafficSeries& daily, const EventPulse& pulse) {
    require_hour_aligned(daily, "compose_total");
    HourlyTrafficSeries total;
    total.start = daily.start;
    total.values.resize(daily.size());
    for (std::size_t i = 0; i < daily.size(); ++i)
        total.values[i] = daily.values[i] + eval_pulse(pulse, day_frame_hour(daily, i));
    return total;
}

struct PulseFitResult {
    EventPulse pulse;
    double sse = 0.0;  // squared error over the fitted samples
    bool converged = false;
};

namespace detail {
constexpr double kPulseSigmaMin = 0.25;
constexpr double kPulseSigmaMax = 6.0;
constexpr double kPulseWindowHours = 6.0;
}  // namespace detail

/// Least-squares fit of (volume, width) to arbitrary (hour, value) residual
/// samples, center held at t_sg_fixed unless fit_center releases it.
/// Gradient descent under volume >= 0, width in [0.25, 6].
inline PulseFitResult fit_pulse_samples(std::span<const std::pair<double, double>> samples,
                                        double t_sg_fixed, const EventPulse& init,
                                        const FitConfig& config, bool fit_center = false) {
    validate(config);
    validate(init);

    double scale = 0.0;
    for (const auto& [t, y] : samples) scale = std::max(scale, std::abs(y));
    if (samples.empty() || scale == 0.0) {
        // Nothing to fit: volume collapses to zero, width is unidentifiable.
        PulseFitResult r;
        r.pulse = EventPulse{0.0, fit_center ? init.center : t_sg_fixed, init.width};
        r.sse = 0.0;
        r.converged = true;
        return r;
    }

    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
    const double inv_scale = 1.0 / scale;
    const double n = static_cast<double>(samples.size());

    auto objective = [&](std::span<const double> p) {
        double c = fit_center ? p[2] : t_sg_fixed;
        double sse = 0.0;
        for (const auto& [t, y] : samples) {
            double u = (t - c) / p[1];
            double m = p[0] / (p[1] * sqrt2pi) * std::exp(-0.5 * u * u);
            double err = m - y * inv_scale;
            sse += err * err;
        }
        return sse / n;
    };
    auto gradient = [&](std::span<const double> p, std::span<double> g) {
        std::fill(g.begin(), g.end(), 0.0);
        double c = fit_center ? p[2] : t_sg_fixed;
        double R = p[0], sig = p[1];
        for (const auto& [t, y] : samples) {
            double u = (t - c) / sig;
            double a = std::exp(-0.5 * u * u) / (sig * sqrt2pi);
            double m = R * a;
            double err = m - y * inv_scale;
            g[0] += err * a;
            g[1] += err * m * (u * u - 1.0) / sig;
            if (fit_center) g[2] += err * m * u / sig;
        }
        for (double& v : g) v *= 2.0 / n;
    };
    auto project = [](std::span<double> p) {
        if (p[0] < 0.0) p[0] = 0.0;
        if (p[1] < detail::kPulseSigmaMin) p[1] = detail::kPulseSigmaMin;
        if (p[1] > detail::kPulseSigmaMax) p[1] = detail::kPulseSigmaMax;
    };
    // The model is linear in the volume, so its conditional optimum is exact;
    // descent then only has to travel the width (and center) directions.
    auto refine = [&](std::span<double> p) {
        double c = fit_center ? p[2] : t_sg_fixed;
        double num = 0.0, den = 0.0;
        for (const auto& [t, y] : samples) {
            double u = (t - c) / p[1];
            double a = std::exp(-0.5 * u * u) / (p[1] * sqrt2pi);
            num += a * y * inv_scale;
            den += a * a;
        }
        if (den > 0.0) p[0] = std::max(0.0, num / den);
    };

    std::vector<double> start{init.volume * inv_scale, init.width};
    if (fit_center) start.push_back(init.center);
    DescentResult run =
        gradient_descent(std::move(start), objective, gradient, project, refine, config);

    PulseFitResult result;
    result.pulse.volume = run.params[0] * scale;
    result.pulse.width = run.params[1];
    result.pulse.center = fit_center ? run.params[2] : t_sg_fixed;
    result.converged = run.converged;
    result.sse = run.objective * n * scale * scale;
    return result;
}

/// Least-squares pulse fit over the residual samples within +-6 h of the
/// fixed center.  Sample coordinates follow the series' day frame, so
/// t_sg_fixed must be expressed on that frame too.
inline PulseFitResult fit_pulse(const HourlyTrafficSeries& residual, double t_sg_fixed,
                                const EventPulse& init, const FitConfig& config,
                                bool fit_center = false) {
    require_hour_aligned(residual, "fit_pulse");
    std::vector<std::pair<double, double>> window;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        double t = day_frame_hour(residual, i);
        if (std::abs(t - t_sg_fixed) <= detail::kPulseWindowHours)
            window.emplace_back(t, residual.values[i]);
    }
    if (window.size() < 3)
        throw InsufficientDataError("fit_pulse: fewer than 3 residual samples in the event window");
    return fit_pulse_samples(window, t_sg_fixed, init, config, fit_center);
}

}  // namespace eventcast
