#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "eventcast/daily_model.hpp"
#include "eventcast/data_io.hpp"
#include "eventcast/errors.hpp"
#include "eventcast/event_model.hpp"
#include "eventcast/event_regression.hpp"
#include "eventcast/predictor.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

/// An error annotated with the pipeline stage it came from.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

namespace detail {

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

}  // namespace detail

/// Slice [from, to) out of a series, clamped to the series span.
inline HourlyTrafficSeries slice_series(const HourlyTrafficSeries& series, std::int64_t from,
                                        std::int64_t to) {
    from = std::max(from, series.start);
    to = std::min(to, series.end_epoch());
    if (from >= to) throw std::out_of_range("slice_series: empty slice");
    HourlyTrafficSeries out;
    out.start = from;
    std::size_t i0 = static_cast<std::size_t>((from - series.start) / kSecondsPerHour);
    std::size_t i1 = static_cast<std::size_t>((to - series.start) / kSecondsPerHour);
    out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(i0),
                      series.values.begin() + static_cast<std::ptrdiff_t>(i1));
    return out;
}

/// The +-6 h observation window around an event's pulse center, cut from the
/// full series, together with the center's hour on the window's day frame.
struct EventWindow {
    HourlyTrafficSeries observed;
    double center_frame_hour = 0.0;  // pulse center on observed's day frame
    std::int64_t day_anchor = 0;     // event day midnight
    double center_day_hour = 0.0;    // pulse center on the event day's frame
};

inline EventWindow cut_event_window(const HourlyTrafficSeries& series, const EventInfo& event,
                                    double kickoff_offset) {
    EventWindow w;
    w.day_anchor = day_start(event.commencement);
    w.center_day_hour = hour_of_day(event.commencement) + kickoff_offset;
    double center_abs = static_cast<double>(w.day_anchor) + w.center_day_hour * kSecondsPerHour;
    auto lo = static_cast<std::int64_t>(std::ceil((center_abs - 6.0 * kSecondsPerHour) /
                                                  kSecondsPerHour)) *
              kSecondsPerHour;
    auto hi = static_cast<std::int64_t>(std::floor((center_abs + 6.0 * kSecondsPerHour) /
                                                   kSecondsPerHour)) *
              kSecondsPerHour;
    w.observed = slice_series(series, lo, hi + kSecondsPerHour);
    w.center_frame_hour =
        (center_abs - static_cast<double>(day_start(w.observed.start))) / kSecondsPerHour;
    return w;
}

/// Weekly-model prediction sampled over the same hours as `like`.
inline HourlyTrafficSeries predict_daily(const WeeklyProfileModel& weekly,
                                         const HourlyTrafficSeries& like) {
    HourlyTrafficSeries out;
    out.start = like.start;
    out.values.resize(like.size());
    for (std::size_t i = 0; i < like.size(); ++i) {
        CalendarIndex ci = calendar_index(like.hour_epoch(i));
        out.values[i] = eval_week(weekly, ci.day_of_week, ci.hour);
    }
    return out;
}

/// Full training pass: split the series, fit the weekly profile on the
/// non-event days, fit one pulse per event on the residual window, then fit
/// the attendance regression and sigma prior over the fitted pulses.
/// Warnings (skipped regression, unconverged fits) go to `log` when given;
/// errors carry the failing stage.
inline ModelDocument fit_pipeline(const HourlyTrafficSeries& series, const EventCalendar& calendar,
                                  const FitConfig& config, double kickoff_offset = -1.0,
                                  std::ostream* log = nullptr) {
    DatasetSplit split =
        detail::run_stage("split", [&] { return split_by_events(series, calendar); });

    WeeklyFitResult weekly =
        detail::run_stage("weekly-fit", [&] { return fit_weekly(split.non_event_days, config); });
    if (log && !weekly.converged)
        *log << "warning: weekly fit stopped at the iteration cap before converging\n";

    ModelDocument doc;
    doc.weekly = weekly.model;
    doc.weekly_objective = weekly.objective;
    doc.weekly_converged = weekly.converged;
    doc.kickoff_offset = kickoff_offset;

    std::vector<std::pair<std::int64_t, double>> attendance_pairs;
    std::vector<double> widths;
    for (const auto& event : calendar.events) {
        PulseFitResult fit = detail::run_stage("pulse-fit", [&] {
            EventWindow w = cut_event_window(series, event, kickoff_offset);
            HourlyTrafficSeries daily = predict_daily(doc.weekly, w.observed);
            HourlyTrafficSeries residual =
                detail::run_stage("residual", [&] { return extract_residual(w.observed, daily); });
            double volume_guess = 0.0;
            for (double v : residual.values) volume_guess += v;
            EventPulse init{std::max(volume_guess, 1.0), w.center_frame_hour, 1.5};
            PulseFitResult r = fit_pulse(residual, w.center_frame_hour, init, config);
            // Re-anchor the fitted center onto the event day's own frame.
            r.pulse.center = w.center_day_hour;
            return r;
        });
        if (log && !fit.converged)
            *log << "warning: pulse fit for " << format_date(event.commencement)
                 << " stopped at the iteration cap\n";
        doc.pulses.push_back(
            PulseRecord{day_start(event.commencement), fit.pulse, fit.sse, fit.converged});
        attendance_pairs.emplace_back(event.attendance, fit.pulse.volume);
        widths.push_back(fit.pulse.width);
    }

    if (calendar.events.empty()) {
        if (log) *log << "warning: no events in calendar; model carries the weekly profile only\n";
        return doc;
    }

    detail::run_stage("regression", [&] {
        bool varied = false;
        for (const auto& [a, _] : attendance_pairs)
            if (a != attendance_pairs.front().first) varied = true;
        if (attendance_pairs.size() >= 2 && varied) {
            doc.regression = fit_attendance_regression(attendance_pairs);
        } else if (log) {
            *log << "warning: need >= 2 events with varied attendance for the regression; "
                    "skipped\n";
        }
        doc.sigma_prior = fit_sigma_prior(widths);
        return 0;
    });
    return doc;
}

/// Regression + prior bundle from a fitted document, for the predictors.
inline std::pair<AttendanceRegression, SigmaPrior> advance_estimators(const ModelDocument& doc) {
    if (!doc.regression)
        throw InsufficientDataError("model document carries no attendance regression");
    if (!doc.sigma_prior)
        throw InsufficientDataError("model document carries no sigma prior");
    return {*doc.regression, *doc.sigma_prior};
}

}  // namespace eventcast
