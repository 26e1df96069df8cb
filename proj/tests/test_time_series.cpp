#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "eventcast/data_io.hpp"
#include "eventcast/time_series.hpp"

using namespace eventcast;

namespace {

HourlyTrafficSeries flat_days(std::int64_t start, int days, double value = 1.0) {
    HourlyTrafficSeries s;
    s.start = start;
    s.values.assign(static_cast<std::size_t>(days) * 24, value);
    return s;
}

EventInfo game(const std::string& kickoff, double duration = 2.0, std::int64_t attendance = 40000) {
    EventInfo e;
    e.commencement = parse_timestamp(kickoff);
    e.duration_hours = duration;
    e.kind = "soccer";
    e.attendance = attendance;
    return e;
}

const std::int64_t kMonday = parse_timestamp("2013-11-18T00:00");

}  // namespace

TEST_CASE("calendar coordinates", "[time_series]") {
    CHECK(iso_weekday(kMonday) == 1);
    CHECK(iso_weekday(parse_timestamp("2013-12-01T16:00")) == 7);  // a Sunday kickoff
    CHECK(iso_weekday(parse_timestamp("2013-11-23T00:00")) == 6);

    CHECK(hour_of_day(parse_timestamp("2013-12-08T21:45")) == Catch::Approx(21.75));
    CHECK(hour_of_day(kMonday) == 0.0);

    CalendarIndex ci = calendar_index(parse_timestamp("2013-11-20T05:00"));
    CHECK(ci.day_of_week == 3);
    CHECK(ci.weekday_index == 3);
    CHECK(ci.hour == Catch::Approx(5.0));
    CHECK(calendar_index(parse_timestamp("2013-11-24T09:00")).weekday_index == 0);
}

TEST_CASE("day frame hours continue past midnight", "[time_series]") {
    HourlyTrafficSeries s;
    s.start = parse_timestamp("2013-11-18T20:00");
    s.values.assign(8, 0.0);
    CHECK(day_frame_hour(s, 0) == Catch::Approx(20.0));
    CHECK(day_frame_hour(s, 5) == Catch::Approx(25.0));
}

TEST_CASE("split assigns event days by interval intersection", "[time_series]") {
    SECTION("four games over three weeks") {
        HourlyTrafficSeries series = flat_days(kMonday, 21);
        std::vector<EventInfo> events;
        for (int day : {0, 3, 7, 10}) {
            std::int64_t d0 = kMonday + day * kSecondsPerDay;
            events.push_back(game(format_timestamp(d0 + 16 * kSecondsPerHour).substr(0, 16)));
        }
        DatasetSplit split = split_by_events(series, make_calendar(events));
        CHECK(split.event_days.size() == 4);
        CHECK(split.non_event_days.size() == 17);
    }

    SECTION("empty calendar leaves every day non-event") {
        DatasetSplit split = split_by_events(flat_days(kMonday, 5), EventCalendar{});
        CHECK(split.event_days.empty());
        CHECK(split.non_event_days.size() == 5);
    }

    SECTION("an event spanning midnight claims both days") {
        HourlyTrafficSeries series = flat_days(kMonday, 2);
        EventInfo e = game("2013-11-18T23:00", 3.0);  // ends 02:00 next day
        DatasetSplit split = split_by_events(series, make_calendar({e}));
        CHECK(split.event_days.size() == 2);
        CHECK(split.non_event_days.empty());
        CHECK(split.event_days[0].event.commencement == e.commencement);
        CHECK(split.event_days[1].event.commencement == e.commencement);
    }

    SECTION("event outside the span is a range error") {
        HourlyTrafficSeries series = flat_days(kMonday, 2);
        EventInfo e = game("2013-12-25T16:00");
        CHECK_THROWS_AS(split_by_events(series, make_calendar({e})), std::out_of_range);
    }

    SECTION("misaligned series is a format error") {
        HourlyTrafficSeries series = flat_days(kMonday + kSecondsPerHour, 2);
        CHECK_THROWS_AS(split_by_events(series, EventCalendar{}), FormatError);

        HourlyTrafficSeries short_series = flat_days(kMonday, 1);
        short_series.values.pop_back();
        CHECK_THROWS_AS(split_by_events(short_series, EventCalendar{}), FormatError);
    }
}

TEST_CASE("split partitions the days exactly once", "[time_series][property]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int days = 7 + static_cast<int>(rng() % 21);
        HourlyTrafficSeries series = flat_days(kMonday, days);
        std::vector<EventInfo> events;
        std::vector<int> event_days;
        for (int d = 0; d < days; ++d)
            if (rng() % 4 == 0) event_days.push_back(d);
        for (int d : event_days) {
            EventInfo e;
            e.commencement = kMonday + d * kSecondsPerDay + 15 * kSecondsPerHour;
            e.duration_hours = 2.0;
            e.attendance = 1000;
            events.push_back(e);
        }

        DatasetSplit split = split_by_events(series, EventCalendar{events});
        CHECK(split.event_days.size() + split.non_event_days.size() ==
              static_cast<std::size_t>(days));
        CHECK(split.event_days.size() == event_days.size());

        // Shuffling the calendar must not change the split.
        std::vector<EventInfo> shuffled = events;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        DatasetSplit again = split_by_events(series, EventCalendar{shuffled});
        REQUIRE(again.event_days.size() == split.event_days.size());
        for (std::size_t i = 0; i < split.event_days.size(); ++i)
            CHECK(again.event_days[i].day.start == split.event_days[i].day.start);
    }
}

TEST_CASE("residual extraction is exact pointwise arithmetic", "[time_series]") {
    HourlyTrafficSeries total = flat_days(kMonday, 1, 100.0);
    HourlyTrafficSeries daily = flat_days(kMonday, 1, 100.0);

    SECTION("identical series give a zero residual") {
        HourlyTrafficSeries r = extract_residual(total, daily);
        for (double v : r.values) CHECK(v == 0.0);
    }

    SECTION("a known pulse comes back exactly") {
        HourlyTrafficSeries composed = total;
        std::vector<double> pulse = {0, 0, 1.5, 4.0, 9.5, 4.0, 1.5, 0};
        for (std::size_t i = 0; i < pulse.size(); ++i) composed.values[i + 10] += pulse[i];
        HourlyTrafficSeries r = extract_residual(composed, daily);
        for (std::size_t i = 0; i < pulse.size(); ++i) CHECK(r.values[i + 10] == pulse[i]);
    }

    SECTION("negative residuals are preserved") {
        daily.values[5] = 103.0;
        HourlyTrafficSeries r = extract_residual(total, daily);
        CHECK(r.values[5] == -3.0);
    }

    SECTION("misaligned inputs are rejected") {
        HourlyTrafficSeries shifted = daily;
        shifted.start += kSecondsPerHour;
        CHECK_THROWS_AS(extract_residual(total, shifted), AlignmentError);
        HourlyTrafficSeries shorter = daily;
        shorter.values.pop_back();
        CHECK_THROWS_AS(extract_residual(total, shorter), AlignmentError);
    }
}

TEST_CASE("residual then re-addition reconstructs the input bit-exactly",
          "[time_series][property]") {
    // Totals within a factor of two of the daily curve (residuals no larger
    // than the daily level itself) keep the subtraction exact, so adding the
    // daily curve back must reproduce every bit.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> level(100.0, 500.0);
    std::uniform_real_distribution<double> bump(-0.5, 1.0);
    HourlyTrafficSeries total = flat_days(kMonday, 3);
    HourlyTrafficSeries daily = flat_days(kMonday, 3);
    for (std::size_t i = 0; i < daily.size(); ++i) {
        daily.values[i] = level(rng);
        total.values[i] = daily.values[i] + bump(rng) * daily.values[i];
    }

    HourlyTrafficSeries residual = extract_residual(total, daily);
    for (std::size_t i = 0; i < total.size(); ++i)
        CHECK(residual.values[i] + daily.values[i] == total.values[i]);
}

TEST_CASE("calendar construction validates events", "[time_series]") {
    CHECK_THROWS_AS(make_calendar({game("2013-11-18T16:00", -1.0)}), std::invalid_argument);

    EventInfo bad = game("2013-11-18T16:00");
    bad.attendance = -5;
    CHECK_THROWS_AS(make_calendar({bad}), std::invalid_argument);

    // Overlap: second game starts inside the first one's interval.
    CHECK_THROWS_AS(make_calendar({game("2013-11-18T16:00", 3.0), game("2013-11-18T18:00")}),
                    std::invalid_argument);
}
