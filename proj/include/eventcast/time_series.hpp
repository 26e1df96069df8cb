#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eventcast/errors.hpp"

namespace eventcast {

constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kSecondsPerDay = 24 * kSecondsPerHour;
constexpr int kHoursPerDay = 24;
constexpr int kHoursPerWeek = 168;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

inline bool is_hour_aligned(std::int64_t epoch_s) { return epoch_s % kSecondsPerHour == 0; }
inline bool is_day_aligned(std::int64_t epoch_s) { return epoch_s % kSecondsPerDay == 0; }

/// Midnight (UTC) of the day containing the timestamp.
inline std::int64_t day_start(std::int64_t epoch_s) {
    return floor_div(epoch_s, kSecondsPerDay) * kSecondsPerDay;
}

/// ISO day of week, 1 = Monday .. 7 = Sunday.
inline int iso_weekday(std::int64_t epoch_s) {
    using namespace std::chrono;
    sys_days d{floor<days>(sys_seconds{seconds{epoch_s}})};
    return static_cast<int>(weekday{d}.iso_encoding());
}

/// Hour of day as a real number (21:45 -> 21.75).
inline double hour_of_day(std::int64_t epoch_s) {
    return static_cast<double>(epoch_s - day_start(epoch_s)) / kSecondsPerHour;
}

/// Calendar coordinates of one sample: day-of-week k (1=Monday..7=Sunday),
/// weekday index n_d (1..5 for Monday..Friday, 0 for weekend days) and the
/// hour of day t.  t of an observed sample lies in [0, 24); model evaluation
/// accepts any real t (hours beyond 23 spill into the following day).
struct CalendarIndex {
    int day_of_week = 1;   // k
    int weekday_index = 0; // n_d, 0 when day_of_week > 5
    double hour = 0.0;     // t
};

inline CalendarIndex calendar_index(std::int64_t epoch_s) {
    CalendarIndex ci;
    ci.day_of_week = iso_weekday(epoch_s);
    ci.weekday_index = ci.day_of_week <= 5 ? ci.day_of_week : 0;
    ci.hour = hour_of_day(epoch_s);
    return ci;
}

/// Hourly traffic samples on a continuous hour axis.  `start` is the UTC
/// timestamp of the first sample, hour-aligned; sample i covers the hour
/// starting at start + i*3600.
struct HourlyTrafficSeries {
    std::int64_t start = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    std::int64_t hour_epoch(std::size_t i) const {
        return start + static_cast<std::int64_t>(i) * kSecondsPerHour;
    }
    std::int64_t end_epoch() const { return hour_epoch(values.size()); }
};

inline void require_hour_aligned(const HourlyTrafficSeries& s, const char* who) {
    if (!is_hour_aligned(s.start))
        throw FormatError(std::string(who) + ": series start is not hour-aligned");
}

/// Hour coordinate of sample i on the continuous day axis anchored at the
/// midnight of the series' first day.  A series starting 09:00 has samples
/// at 9, 10, ...; past midnight the coordinate continues 24, 25, ...
inline double day_frame_hour(const HourlyTrafficSeries& s, std::size_t i) {
    return hour_of_day(s.start) + static_cast<double>(i);
}

/// Advance information for one scheduled event.
struct EventInfo {
    std::int64_t commencement = 0;  // kickoff, UTC epoch seconds
    double duration_hours = 0.0;
    std::string kind;
    std::int64_t attendance = 0;
};

inline void validate(const EventInfo& e) {
    if (e.duration_hours <= 0.0) throw std::invalid_argument("event duration must be positive");
    if (e.attendance < 0) throw std::invalid_argument("event attendance must be non-negative");
}

/// All known events over a series span, kept sorted by commencement.
/// Events may not overlap in time.
struct EventCalendar {
    std::vector<EventInfo> events;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
};

inline EventCalendar make_calendar(std::vector<EventInfo> events) {
    for (const auto& e : events) validate(e);
    std::sort(events.begin(), events.end(),
              [](const EventInfo& a, const EventInfo& b) { return a.commencement < b.commencement; });
    for (std::size_t i = 1; i < events.size(); ++i) {
        double prev_end = static_cast<double>(events[i - 1].commencement) +
                          events[i - 1].duration_hours * kSecondsPerHour;
        if (static_cast<double>(events[i].commencement) < prev_end)
            throw std::invalid_argument("calendar events overlap in time");
    }
    return EventCalendar{std::move(events)};
}

/// One whole day of traffic that an event touches, with that event attached.
struct EventDay {
    HourlyTrafficSeries day;
    EventInfo event;
};

/// Whole-day partition of a series into event days and non-event days.
struct DatasetSplit {
    std::vector<HourlyTrafficSeries> non_event_days;
    std::vector<EventDay> event_days;
};

/// Closed event interval [commencement, commencement + duration] against the
/// half-open day [day_start, day_start + 24 h).
inline bool event_touches_day(const EventInfo& e, std::int64_t day_start_s) {
    double ev_start = static_cast<double>(e.commencement);
    double ev_end = ev_start + e.duration_hours * kSecondsPerHour;
    double d0 = static_cast<double>(day_start_s);
    double d1 = d0 + kSecondsPerDay;
    return ev_start < d1 && ev_end >= d0;
}

/// Partition a day-aligned series into event days and non-event days.
/// A day is an event day iff any event's interval intersects it.
inline DatasetSplit split_by_events(const HourlyTrafficSeries& series, const EventCalendar& calendar) {
    if (!is_day_aligned(series.start))
        throw FormatError("split_by_events: series must start at midnight");
    if (series.size() == 0 || series.size() % kHoursPerDay != 0)
        throw FormatError("split_by_events: series must cover whole days (24 samples each)");

    // Sorting is a no-op for a calendar built through make_calendar; raw
    // calendars in any order produce the same split.
    std::vector<EventInfo> events = calendar.events;
    std::sort(events.begin(), events.end(),
              [](const EventInfo& a, const EventInfo& b) { return a.commencement < b.commencement; });
    for (const auto& e : events) {
        if (e.commencement < series.start || e.commencement >= series.end_epoch())
            throw std::out_of_range("split_by_events: event commencement outside series span");
    }

    DatasetSplit split;
    std::size_t n_days = series.size() / kHoursPerDay;
    for (std::size_t d = 0; d < n_days; ++d) {
        std::int64_t d0 = series.start + static_cast<std::int64_t>(d) * kSecondsPerDay;
        HourlyTrafficSeries day;
        day.start = d0;
        day.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(d * kHoursPerDay),
                          series.values.begin() + static_cast<std::ptrdiff_t>((d + 1) * kHoursPerDay));
        const EventInfo* touching = nullptr;
        for (const auto& e : events) {
            if (event_touches_day(e, d0)) {
                touching = &e;
                break;
            }
        }
        if (touching)
            split.event_days.push_back(EventDay{std::move(day), *touching});
        else
            split.non_event_days.push_back(std::move(day));
    }
    return split;
}

/// Pointwise difference total - daily_prediction.  Negative values are
/// legitimate (noise in the daily fit) and are preserved.
inline HourlyTrafficSeries extract_residual(const HourlyTrafficSeries& total,
                                            const HourlyTrafficSeries& daily_prediction) {
    if (total.start != daily_prediction.start || total.size() != daily_prediction.size())
        throw AlignmentError("extract_residual: series differ in start or length");
    HourlyTrafficSeries residual;
    residual.start = total.start;
    residual.values.resize(total.size());
    for (std::size_t i = 0; i < total.size(); ++i)
        residual.values[i] = total.values[i] - daily_prediction.values[i];
    return residual;
}

}  // namespace eventcast
