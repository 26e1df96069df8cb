#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "eventcast/daily_model.hpp"
#include "eventcast/errors.hpp"
#include "eventcast/event_model.hpp"
#include "eventcast/event_regression.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

enum class ForecastMode { multi_step, single_step };

struct ForecastRequest {
    int horizon_hours = 1;
    std::int64_t start = 0;  // hour-aligned UTC
    EventCalendar events;    // events whose pulses fall inside the horizon
    ForecastMode mode = ForecastMode::multi_step;
};

/// A pulse anchored to a calendar day: pulse.center is expressed on the
/// day frame of `day_anchor` (that day's midnight).
struct PlacedPulse {
    EventPulse pulse;
    std::int64_t day_anchor = 0;
};

inline PlacedPulse place_pulse(const EventInfo& event, const AttendanceRegression& reg,
                               const SigmaPrior& prior, double kickoff_offset) {
    return PlacedPulse{estimate_initial_pulse(event, reg, prior, kickoff_offset),
                       day_start(event.commencement)};
}

/// Hour coordinate of an absolute timestamp on the placed pulse's day frame.
inline double pulse_frame_hour(const PlacedPulse& placed, std::int64_t epoch_s) {
    return static_cast<double>(epoch_s - placed.day_anchor) / kSecondsPerHour;
}

/// An hour belongs to a pulse when it lies within +-6 h of the center.
inline bool pulse_covers(const PlacedPulse& placed, std::int64_t epoch_s) {
    return std::abs(pulse_frame_hour(placed, epoch_s) - placed.pulse.center) <=
           detail::kPulseWindowHours;
}

/// Per-hour split of a forecast into its daily and pulse parts.
struct ForecastComponents {
    std::vector<double> daily;
    std::vector<double> pulse;
};

/// Forecast `horizon_hours` hours from advance information alone: the weekly
/// profile plus the regression-estimated pulse of every event whose center
/// lies within +-6 h of the forecast hour.  No observed data is consumed.
inline HourlyTrafficSeries predict_multistep(const WeeklyProfileModel& weekly,
                                             const ForecastRequest& request,
                                             const AttendanceRegression& reg,
                                             const SigmaPrior& prior, double kickoff_offset,
                                             ForecastComponents* breakdown = nullptr) {
    if (request.mode != ForecastMode::multi_step)
        throw std::invalid_argument("predict_multistep: request mode must be multi_step");
    if (request.horizon_hours < 1)
        throw std::invalid_argument("predict_multistep: horizon must be at least 1 hour");
    if (!is_hour_aligned(request.start))
        throw std::invalid_argument("predict_multistep: start must be hour-aligned");

    std::vector<PlacedPulse> placed;
    placed.reserve(request.events.size());
    for (const auto& e : request.events.events)
        placed.push_back(place_pulse(e, reg, prior, kickoff_offset));

    HourlyTrafficSeries out;
    out.start = request.start;
    out.values.resize(static_cast<std::size_t>(request.horizon_hours));
    if (breakdown) {
        breakdown->daily.assign(out.size(), 0.0);
        breakdown->pulse.assign(out.size(), 0.0);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::int64_t h = out.hour_epoch(i);
        CalendarIndex ci = calendar_index(h);
        double daily = eval_week(weekly, ci.day_of_week, ci.hour);
        double pulse = 0.0;
        for (const auto& pp : placed)
            if (pulse_covers(pp, h)) pulse += eval_pulse(pp.pulse, pulse_frame_hour(pp, h));
        out.values[i] = daily + pulse;
        if (breakdown) {
            breakdown->daily[i] = daily;
            breakdown->pulse[i] = pulse;
        }
    }
    return out;
}

/// Rolling state for one event's pulse during single-step prediction.
struct SingleStepState {
    std::vector<std::pair<double, double>> observed_residuals;  // (hour, value), ascending hours
    EventPulse current_pulse;                 // best fit so far (initial estimate before data)
    std::vector<EventPulse> initial_candidates;
    double t_sg = 0.0;                        // fixed pulse center, day-frame hours
    double best_sse = 0.0;                    // in-sample sse of current_pulse
};

/// Build the rolling state: the estimated pulse plus the four +-25%
/// perturbation corners in (volume, width), clamped to the fit bounds.
inline SingleStepState make_singlestep_state(const EventPulse& initial, double spread = 0.25) {
    validate(initial);
    SingleStepState state;
    state.current_pulse = initial;
    state.t_sg = initial.center;
    state.initial_candidates.push_back(initial);
    for (double dr : {1.0 + spread, 1.0 - spread}) {
        for (double ds : {1.0 + spread, 1.0 - spread}) {
            EventPulse p = initial;
            p.volume = std::max(0.0, p.volume * dr);
            p.width = std::clamp(p.width * ds, detail::kPulseSigmaMin, detail::kPulseSigmaMax);
            state.initial_candidates.push_back(p);
        }
    }
    return state;
}

/// Refit the pulse once per candidate over the residuals so far and keep the
/// smallest-sse fit.  The minimum over a candidate superset never exceeds the
/// minimum over a subset.
inline PulseFitResult refit_best_candidate(std::span<const std::pair<double, double>> residuals,
                                           std::span<const EventPulse> candidates, double t_sg,
                                           const FitConfig& config) {
    if (candidates.empty())
        throw std::invalid_argument("refit_best_candidate: need at least one candidate");
    std::optional<PulseFitResult> best;
    for (const auto& cand : candidates) {
        PulseFitResult fit = fit_pulse_samples(residuals, t_sg, cand, config);
        if (!best || fit.sse < best->sse) best = fit;
    }
    return *best;
}

/// A refit can only say something about the pulse once an observation falls
/// inside its body; far-tail samples alone are all noise and extrapolate
/// exponentially.
constexpr double kRefitInfoRadiusWidths = 2.5;

inline bool refit_informative(const SingleStepState& state) {
    double radius = kRefitInfoRadiusWidths * state.initial_candidates.front().width;
    for (const auto& [hour, value] : state.observed_residuals)
        if (std::abs(hour - state.t_sg) <= radius) return true;
    return false;
}

/// Absorb one observed residual; refit from every candidate as soon as the
/// history carries pulse information, otherwise keep the advance estimate.
inline void singlestep_absorb(SingleStepState& state, double hour, double residual,
                              const FitConfig& config) {
    if (!state.observed_residuals.empty() && hour <= state.observed_residuals.back().first)
        throw OrderingError("single-step observations must advance in time");
    state.observed_residuals.emplace_back(hour, residual);
    if (!refit_informative(state)) return;
    PulseFitResult best =
        refit_best_candidate(state.observed_residuals, state.initial_candidates, state.t_sg, config);
    state.current_pulse = best.pulse;
    state.best_sse = best.sse;
}

/// Pulse-corrected prediction at `hour` given the daily model value there.
inline double singlestep_predict_at(const SingleStepState& state, double hour, double daily_value) {
    return daily_value + eval_pulse(state.current_pulse, hour);
}

/// One rolling step: absorb the observation of hour next_hour - 1 (total
/// traffic and the daily model value there), refit the pulse over all
/// residuals so far, and predict hour next_hour as daily_next plus the
/// refitted pulse.  With no prior residuals the refit starts from the
/// initial candidates, so the first prediction before any call reflects the
/// advance estimate unchanged (see singlestep_predict_at).
inline double predict_singlestep_advance(SingleStepState& state, double observed_total,
                                         double daily_value, double next_hour, double daily_next,
                                         const FitConfig& config) {
    singlestep_absorb(state, next_hour - 1.0, observed_total - daily_value, config);
    return singlestep_predict_at(state, next_hour, daily_next);
}

/// A full single-step pass over an observed span, with per-hour components.
struct RollingForecast {
    HourlyTrafficSeries predicted;
    ForecastComponents components;
};

/// Roll hour by hour over the observed series, predicting each hour from
/// everything observed before it.  Hours outside every pulse window are
/// predicted by the weekly profile alone; inside a window the event's pulse
/// state is updated after each observation.
inline RollingForecast predict_singlestep_rolling(const WeeklyProfileModel& weekly,
                                                  const HourlyTrafficSeries& observed,
                                                  const EventCalendar& events,
                                                  const AttendanceRegression& reg,
                                                  const SigmaPrior& prior, double kickoff_offset,
                                                  const FitConfig& config) {
    require_hour_aligned(observed, "predict_singlestep_rolling");

    std::vector<PlacedPulse> placed;
    for (const auto& e : events.events) placed.push_back(place_pulse(e, reg, prior, kickoff_offset));
    std::map<std::size_t, SingleStepState> states;

    RollingForecast out;
    out.predicted.start = observed.start;
    out.predicted.values.resize(observed.size());
    out.components.daily.resize(observed.size());
    out.components.pulse.resize(observed.size());

    for (std::size_t i = 0; i < observed.size(); ++i) {
        std::int64_t h = observed.hour_epoch(i);
        CalendarIndex ci = calendar_index(h);
        double daily = eval_week(weekly, ci.day_of_week, ci.hour);

        double pulse_part = 0.0;
        std::optional<std::size_t> active;
        for (std::size_t e = 0; e < placed.size(); ++e) {
            if (pulse_covers(placed[e], h)) {
                active = e;
                break;
            }
        }
        if (active) {
            auto [it, inserted] = states.try_emplace(*active);
            if (inserted) it->second = make_singlestep_state(placed[*active].pulse);
            pulse_part = eval_pulse(it->second.current_pulse, pulse_frame_hour(placed[*active], h));
        }

        out.components.daily[i] = daily;
        out.components.pulse[i] = pulse_part;
        out.predicted.values[i] = daily + pulse_part;

        if (active) {
            double t_frame = pulse_frame_hour(placed[*active], h);
            singlestep_absorb(states[*active], t_frame, observed.values[i] - daily, config);
        }
    }
    return out;
}

}  // namespace eventcast
