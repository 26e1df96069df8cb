#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "eventcast/errors.hpp"
#include "eventcast/event_model.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

/// Linear map from event attendance to pulse volume, with the correlation
/// strength it was fitted under.
struct AttendanceRegression {
    double slope = 0.0;      // traffic volume per attendee
    double intercept = 0.0;  // traffic volume
    double pearson_r = 0.0;
    int n_samples = 0;
};

/// Average fitted pulse width, used as the advance estimate of sigma.
struct SigmaPrior {
    double mean_sigma = 1.0;
    int n_samples = 0;
};

inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson: need at least 2 samples");
    std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateDataError("pearson: constant input has no correlation");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

/// Ordinary least squares of pulse volume on attendance.
inline AttendanceRegression fit_attendance_regression(
    const std::vector<std::pair<std::int64_t, double>>& pairs) {
    if (pairs.size() < 2)
        throw InsufficientDataError("attendance regression needs at least 2 events");
    std::vector<double> a(pairs.size()), r(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        a[i] = static_cast<double>(pairs[i].first);
        r[i] = pairs[i].second;
    }
    double ma = 0.0, mr = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mr += r[i];
    }
    ma /= static_cast<double>(a.size());
    mr /= static_cast<double>(a.size());
    double saa = 0.0, sar = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sar += (a[i] - ma) * (r[i] - mr);
    }
    if (saa == 0.0)
        throw InsufficientDataError("attendance regression: all attendances equal");

    AttendanceRegression reg;
    reg.slope = sar / saa;
    reg.intercept = mr - reg.slope * ma;
    reg.n_samples = static_cast<int>(pairs.size());
    reg.pearson_r = pearson(a, r);
    return reg;
}

/// Arithmetic mean of the fitted pulse widths.
inline SigmaPrior fit_sigma_prior(std::span<const double> sigmas) {
    if (sigmas.empty()) throw InsufficientDataError("sigma prior needs at least one width");
    double sum = 0.0;
    for (double s : sigmas) sum += s;
    return SigmaPrior{sum / static_cast<double>(sigmas.size()), static_cast<int>(sigmas.size())};
}

/// Advance estimate of an event's pulse: volume from the attendance line
/// (clamped at zero), width from the prior, center at the kickoff's hour of
/// day plus the configured offset.
inline EventPulse estimate_initial_pulse(const EventInfo& event, const AttendanceRegression& reg,
                                         const SigmaPrior& prior, double kickoff_offset) {
    EventPulse p;
    p.volume = std::max(0.0, reg.slope * static_cast<double>(event.attendance) + reg.intercept);
    p.width = prior.mean_sigma;
    p.center = hour_of_day(event.commencement) + kickoff_offset;
    return p;
}

}  // namespace eventcast
