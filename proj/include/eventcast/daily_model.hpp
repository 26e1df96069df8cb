#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eventcast/errors.hpp"
#include "eventcast/fit.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

/// The nine recurring traffic components: morning/afternoon/evening for the
/// weekday class, Saturday and Sunday.
enum class ComponentLabel : int {
    mw = 0, aw, ew,    // weekday morning/afternoon/evening
    msa, asa, esa,     // Saturday
    msu, asu, esu,     // Sunday
};

constexpr std::array<ComponentLabel, 9> kAllComponents = {
    ComponentLabel::mw,  ComponentLabel::aw,  ComponentLabel::ew,
    ComponentLabel::msa, ComponentLabel::asa, ComponentLabel::esa,
    ComponentLabel::msu, ComponentLabel::asu, ComponentLabel::esu,
};

enum class DayClass : int { weekday = 0, saturday = 1, sunday = 2 };

inline DayClass day_class(ComponentLabel label) {
    return static_cast<DayClass>(static_cast<int>(label) / 3);
}

/// 0 = morning, 1 = afternoon, 2 = evening.
inline int time_of_day_slot(ComponentLabel label) { return static_cast<int>(label) % 3; }

inline DayClass day_class_for(int day_of_week) {
    if (day_of_week < 1 || day_of_week > 7)
        throw std::invalid_argument("day of week must be in 1..7");
    if (day_of_week <= 5) return DayClass::weekday;
    return day_of_week == 6 ? DayClass::saturday : DayClass::sunday;
}

inline std::array<ComponentLabel, 3> labels_for(DayClass dc) {
    int base = static_cast<int>(dc) * 3;
    return {static_cast<ComponentLabel>(base), static_cast<ComponentLabel>(base + 1),
            static_cast<ComponentLabel>(base + 2)};
}

inline const char* to_string(ComponentLabel label) {
    static constexpr const char* names[9] = {"mw",  "aw",  "ew",  "msa", "asa",
                                             "esa", "msu", "asu", "esu"};
    return names[static_cast<int>(label)];
}

inline ComponentLabel component_from_string(const std::string& name) {
    for (ComponentLabel l : kAllComponents)
        if (name == to_string(l)) return l;
    throw std::invalid_argument("unknown traffic component label: " + name);
}

/// One Gaussian traffic component: peak value R, center hour t_c, width sigma.
struct GaussianComponent {
    double peak = 0.0;    // R_c, traffic units
    double center = 0.0;  // t_c, hours on the continuous day axis
    double width = 1.0;   // sigma_c, hours
};

inline void validate(const GaussianComponent& c) {
    if (c.peak < 0.0) throw std::invalid_argument("component peak must be non-negative");
    if (!(c.width > 0.0) || c.width > 12.0)
        throw std::invalid_argument("component width must lie in (0, 12] hours");
}

/// The weekly daily-traffic profile: all nine components, one per label.
struct WeeklyProfileModel {
    std::array<GaussianComponent, 9> components{};

    GaussianComponent& at(ComponentLabel l) { return components[static_cast<std::size_t>(l)]; }
    const GaussianComponent& at(ComponentLabel l) const {
        return components[static_cast<std::size_t>(l)];
    }
};

inline void validate(const WeeklyProfileModel& m) {
    for (const auto& c : m.components) validate(c);
}

/// R_c * exp(-(t - t_c)^2 / (2 sigma_c^2))
inline double eval_component(const GaussianComponent& c, double t) {
    double u = (t - c.center) / c.width;
    return c.peak * std::exp(-0.5 * u * u);
}

/// One day's traffic: the sum of its three components, t on that day's axis.
inline double eval_day(const WeeklyProfileModel& model, DayClass dc, double t) {
    double sum = 0.0;
    for (ComponentLabel l : labels_for(dc)) sum += eval_component(model.at(l), t);
    return sum;
}

/// Overload taking the explicit label triple; the labels must be exactly the
/// morning/afternoon/evening components of a single day class.
inline double eval_day(const WeeklyProfileModel& model, std::span<const ComponentLabel> labels,
                       double t) {
    if (labels.size() != 3) throw std::invalid_argument("eval_day expects exactly 3 labels");
    DayClass dc = day_class(labels[0]);
    bool slot_seen[3] = {false, false, false};
    for (ComponentLabel l : labels) {
        if (day_class(l) != dc) throw std::invalid_argument("eval_day labels mix day classes");
        int slot = time_of_day_slot(l);
        if (slot_seen[slot]) throw std::invalid_argument("eval_day labels repeat a component");
        slot_seen[slot] = true;
    }
    return eval_day(model, dc, t);
}

namespace detail {

/// Day offsets (hours) placing every component instance on the axis of day k.
/// A component of day n_d evaluated on day k sits 24*(k - n_d) hours into the
/// past, so its contribution at hour t of day k is centered at t_c - 24*(k - n_d).
struct WeekOffsets {
    // offsets[class][*]: weekday class has 5 entries, Saturday/Sunday 1 each.
    std::array<std::vector<double>, 3> by_class;
};

inline WeekOffsets week_offsets(int k) {
    WeekOffsets o;
    for (int n_d = 1; n_d <= 5; ++n_d)
        o.by_class[0].push_back(24.0 * static_cast<double>(k - n_d));
    o.by_class[1].push_back(24.0 * static_cast<double>(k - 6));
    o.by_class[2].push_back(24.0 * static_cast<double>(k - 7));
    return o;
}

}  // namespace detail

/// Weekly model value at hour t of day k (1=Monday..7=Sunday).  The three
/// blocks sum the weekday components over the five weekday instances plus
/// the single Saturday and Sunday instances, each shifted onto day k's axis.
/// The result depends only on the absolute weekly hour t + 24*(k-1), so hours
/// beyond 23 continue into the next day.
inline double eval_week(const WeeklyProfileModel& model, int k, double t) {
    if (k < 1 || k > 7) throw std::invalid_argument("eval_week: day index k must be in 1..7");
    detail::WeekOffsets offsets = detail::week_offsets(k);
    double sum = 0.0;
    for (ComponentLabel l : kAllComponents) {
        const GaussianComponent& c = model.at(l);
        if (c.peak == 0.0) continue;
        const auto& offs = offsets.by_class[static_cast<int>(day_class(l))];
        for (double o : offs) {
            double u = (t + o - c.center) / c.width;
            sum += c.peak * std::exp(-0.5 * u * u);
        }
    }
    return sum;
}

/// Largest hourly sample of the weekly curve (hours 0..23 of each day).
inline double weekly_peak(const WeeklyProfileModel& model) {
    double peak = 0.0;
    for (int k = 1; k <= 7; ++k)
        for (int t = 0; t < kHoursPerDay; ++t)
            peak = std::max(peak, eval_week(model, k, static_cast<double>(t)));
    return peak;
}

struct WeeklyFitResult {
    WeeklyProfileModel model;
    double objective = 0.0;  // sum of squared residuals over all samples
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;  // accepted internal objectives, when recorded
};

namespace detail {

struct WeeklySample {
    int k = 1;
    double t = 0.0;
    double y = 0.0;
};

// Parameter layout: [R_0, t_0, s_0, R_1, t_1, s_1, ...] for the 9 components,
// amplitudes normalized by the data peak.
constexpr double kSigmaMin = 0.25;
constexpr double kSigmaMax = 12.0;
constexpr double kExpCutoff = 60.0;  // drop terms below exp(-60)

inline double weekly_objective(std::span<const double> p,
                               const std::vector<WeeklySample>& samples,
                               const std::array<WeekOffsets, 8>& offsets_by_k) {
    double sse = 0.0;
    for (const auto& s : samples) {
        const auto& offsets = offsets_by_k[static_cast<std::size_t>(s.k)];
        double m = 0.0;
        for (int c = 0; c < 9; ++c) {
            double R = p[static_cast<std::size_t>(3 * c)];
            if (R == 0.0) continue;
            double tc = p[static_cast<std::size_t>(3 * c + 1)];
            double sig = p[static_cast<std::size_t>(3 * c + 2)];
            for (double o : offsets.by_class[c / 3]) {
                double u = (s.t + o - tc) / sig;
                double e = 0.5 * u * u;
                if (e > kExpCutoff) continue;
                m += R * std::exp(-e);
            }
        }
        double err = m - s.y;
        sse += err * err;
    }
    return sse / static_cast<double>(samples.size());
}

inline void weekly_gradient(std::span<const double> p, std::span<double> grad,
                            const std::vector<WeeklySample>& samples,
                            const std::array<WeekOffsets, 8>& offsets_by_k) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::array<double, 9> gv{}, gt{}, gs{};  // per-sample partial sums, reused
    for (const auto& s : samples) {
        const auto& offsets = offsets_by_k[static_cast<std::size_t>(s.k)];
        double m = 0.0;
        for (int c = 0; c < 9; ++c) {
            double R = p[static_cast<std::size_t>(3 * c)];
            double tc = p[static_cast<std::size_t>(3 * c + 1)];
            double sig = p[static_cast<std::size_t>(3 * c + 2)];
            double v = 0.0, dt = 0.0, ds = 0.0;
            for (double o : offsets.by_class[c / 3]) {
                double u = (s.t + o - tc) / sig;
                double e = 0.5 * u * u;
                if (e > kExpCutoff) continue;
                double g = std::exp(-e);
                v += g;
                dt += g * u / sig;
                ds += g * u * u / sig;
            }
            gv[static_cast<std::size_t>(c)] = v;
            gt[static_cast<std::size_t>(c)] = dt;
            gs[static_cast<std::size_t>(c)] = ds;
            m += R * v;
        }
        double err = m - s.y;
        for (int c = 0; c < 9; ++c) {
            double R = p[static_cast<std::size_t>(3 * c)];
            grad[static_cast<std::size_t>(3 * c)] += err * gv[static_cast<std::size_t>(c)];
            grad[static_cast<std::size_t>(3 * c + 1)] += err * R * gt[static_cast<std::size_t>(c)];
            grad[static_cast<std::size_t>(3 * c + 2)] += err * R * gs[static_cast<std::size_t>(c)];
        }
    }
    double scale = 2.0 / static_cast<double>(samples.size());
    for (double& g : grad) g *= scale;
}

inline void weekly_project(std::span<double> p) {
    for (int c = 0; c < 9; ++c) {
        double& R = p[static_cast<std::size_t>(3 * c)];
        double& sig = p[static_cast<std::size_t>(3 * c + 2)];
        if (R < 0.0) R = 0.0;
        if (sig < kSigmaMin) sig = kSigmaMin;
        if (sig > kSigmaMax) sig = kSigmaMax;
    }
}

}  // namespace detail

/// Fit the nine-component weekly model to all non-event days by projected
/// gradient descent on the pooled squared-error objective.  Days from
/// multiple weeks stack into the same day-of-week index.  Runs
/// config.restarts descents from jittered initializations and keeps the
/// best; `objective` is the achieved sum of squares in data units.
inline WeeklyFitResult fit_weekly(const std::vector<HourlyTrafficSeries>& non_event_days,
                                  const FitConfig& config) {
    validate(config);
    std::array<bool, 8> covered{};
    std::vector<detail::WeeklySample> samples;
    for (const auto& day : non_event_days) {
        if (!is_day_aligned(day.start) || day.size() != kHoursPerDay)
            throw FormatError("fit_weekly: each input segment must be one whole day");
        int k = iso_weekday(day.start);
        covered[static_cast<std::size_t>(k)] = true;
        for (int t = 0; t < kHoursPerDay; ++t)
            samples.push_back({k, static_cast<double>(t), day.values[static_cast<std::size_t>(t)]});
    }
    for (int k = 1; k <= 7; ++k)
        if (!covered[static_cast<std::size_t>(k)])
            throw InsufficientDataError("fit_weekly: no non-event day covers weekday " +
                                        std::to_string(k));

    double peak = 0.0;
    for (const auto& s : samples) peak = std::max(peak, s.y);
    double scale = peak > 0.0 ? peak : 1.0;
    for (auto& s : samples) s.y /= scale;

    std::array<detail::WeekOffsets, 8> offsets_by_k;
    for (int k = 1; k <= 7; ++k) offsets_by_k[static_cast<std::size_t>(k)] = detail::week_offsets(k);

    // Anchor initialization: centers at the three daily bumps, width 2 h,
    // amplitude from the mean observed traffic at the anchor hour.
    constexpr double anchors[3] = {9.0, 15.0, 21.0};
    std::vector<double> base_init(27, 0.0);
    for (int c = 0; c < 9; ++c) {
        DayClass dc = day_class(static_cast<ComponentLabel>(c));
        double anchor = anchors[time_of_day_slot(static_cast<ComponentLabel>(c))];
        double sum = 0.0;
        int n = 0;
        for (const auto& s : samples) {
            if (day_class_for(s.k) == dc && s.t == anchor) {
                sum += s.y;
                ++n;
            }
        }
        base_init[static_cast<std::size_t>(3 * c)] = n > 0 ? sum / n : 0.0;
        base_init[static_cast<std::size_t>(3 * c + 1)] = anchor;
        base_init[static_cast<std::size_t>(3 * c + 2)] = 2.0;
    }

    auto objective = [&](std::span<const double> p) {
        return detail::weekly_objective(p, samples, offsets_by_k);
    };
    auto gradient = [&](std::span<const double> p, std::span<double> g) {
        detail::weekly_gradient(p, g, samples, offsets_by_k);
    };

    auto run_restart = [&](int r) {
        std::vector<double> init = base_init;
        if (r > 0) {
            std::mt19937_64 rng(0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(r));
            std::uniform_real_distribution<double> jitter_t(-1.5, 1.5);
            std::uniform_real_distribution<double> jitter_s(0.75, 1.5);
            std::uniform_real_distribution<double> jitter_r(0.5, 1.5);
            for (int c = 0; c < 9; ++c) {
                init[static_cast<std::size_t>(3 * c)] *= jitter_r(rng);
                init[static_cast<std::size_t>(3 * c + 1)] += jitter_t(rng);
                init[static_cast<std::size_t>(3 * c + 2)] *= jitter_s(rng);
            }
        }
        return gradient_descent(std::move(init), objective, gradient, detail::weekly_project,
                                config);
    };

    std::vector<DescentResult> runs(static_cast<std::size_t>(config.restarts));
    if (config.restarts == 1) {
        runs[0] = run_restart(0);
    } else {
        std::vector<std::future<DescentResult>> futures;
        for (int r = 0; r < config.restarts; ++r)
            futures.push_back(std::async(std::launch::async, run_restart, r));
        for (int r = 0; r < config.restarts; ++r)
            runs[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].objective < runs[best].objective) best = r;
    const DescentResult& win = runs[best];

    WeeklyFitResult result;
    for (int c = 0; c < 9; ++c) {
        GaussianComponent& gc = result.model.components[static_cast<std::size_t>(c)];
        gc.peak = win.params[static_cast<std::size_t>(3 * c)] * scale;
        gc.center = win.params[static_cast<std::size_t>(3 * c + 1)];
        gc.width = win.params[static_cast<std::size_t>(3 * c + 2)];
    }
    result.converged = win.converged;
    result.iterations = win.iterations;
    result.trace = win.trace;

    double sse = 0.0;
    for (const auto& s : samples) {
        double err = eval_week(result.model, s.k, s.t) - s.y * scale;
        sse += err * err;
    }
    result.objective = sse;
    return result;
}

}  // namespace eventcast
