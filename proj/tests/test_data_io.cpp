#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "eventcast/data_io.hpp"

using namespace eventcast;

namespace {

std::string tsv_line(std::int64_t grid, std::int64_t epoch_ms, const std::string& sms_in) {
    return std::to_string(grid) + "\t" + std::to_string(epoch_ms) + "\t39\t" + sms_in +
           "\t\t\t\t";
}

}  // namespace

TEST_CASE("timestamp parsing and formatting", "[data_io]") {
    CHECK(parse_timestamp("1970-01-01T00:00:00") == 0);
    CHECK(parse_timestamp("2013-11-18T00:00") == 1384732800);
    CHECK(parse_timestamp("2013-12-08T21:45") ==
          parse_timestamp("2013-12-08T00:00") + 21 * 3600 + 45 * 60);
    CHECK(parse_timestamp("2013-12-01") == parse_timestamp("2013-12-01T00:00"));
    CHECK(format_timestamp(1384732800) == "2013-11-18T00:00:00Z");
    CHECK(format_date(parse_timestamp("2013-12-01T16:00")) == "2013-12-01");

    CHECK_THROWS_AS(parse_timestamp("yesterday"), FormatError);
    CHECK_THROWS_AS(parse_timestamp("2013-13-01T00:00"), FormatError);
    CHECK(parse_timestamp(format_timestamp(1386018000)) == 1386018000);
}

TEST_CASE("grid record parsing", "[data_io]") {
    GridTrafficRecord r = parse_grid_record("5060\t1385856000000\t39\t2.5\t1.0\t\t\t7.75", 1);
    CHECK(r.square_id == 5060);
    CHECK(r.sms_in == 2.5);
    CHECK_FALSE(r.call_in.has_value());
    CHECK(r.internet == 7.75);

    CHECK_THROWS_AS(parse_grid_record("5060\t1385856000000", 3), FormatError);
    CHECK_THROWS_AS(parse_grid_record("5060\t1385856012345\t39\t1\t\t\t\t", 4), FormatError);
    CHECK_THROWS_AS(parse_grid_record("5060\t1385856000000\t39\t\t\t\t\t", 5), FormatError);
    CHECK_THROWS_AS(parse_grid_record("x\t1385856000000\t39\t1\t\t\t\t", 6), FormatError);

    SECTION("format errors carry the line number") {
        try {
            parse_grid_record("bad line", 17);
            FAIL("expected a format error");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("17") != std::string::npos);
        }
    }
}

TEST_CASE("hourly ingestion aggregates sub-intervals and grids", "[data_io]") {
    std::int64_t hour_ms = 1385856000000;  // 2013-12-01T00:00Z

    SECTION("six sub-intervals of one grid sum into one hour") {
        std::ostringstream in;
        for (int i = 0; i < 6; ++i) in << tsv_line(1, hour_ms + i * 600000, "2") << "\n";
        std::istringstream stream(in.str());
        HourlyTrafficSeries s = ingest_tsv(stream, TrafficKind::sms_in, {1}, 0.0);
        REQUIRE(s.size() == 1);
        CHECK(s.values[0] == Catch::Approx(12.0));
        CHECK(s.start == hour_ms / 1000);
    }

    SECTION("two grids in the same hour sum spatially") {
        std::istringstream stream(tsv_line(1, hour_ms, "5") + "\n" + tsv_line(2, hour_ms, "7") +
                                  "\n");
        HourlyTrafficSeries s = ingest_tsv(stream, TrafficKind::sms_in, {1, 2}, 0.0);
        CHECK(s.values[0] == Catch::Approx(12.0));
    }

    SECTION("records outside the grid filter are an empty selection") {
        std::istringstream stream(tsv_line(99, hour_ms, "5") + "\n");
        CHECK_THROWS_AS(ingest_tsv(stream, TrafficKind::sms_in, {1}, 0.0), EmptySelectionError);
    }

    SECTION("hours with no records become zeros and are counted") {
        std::ostringstream in;
        in << tsv_line(1, hour_ms, "5") << "\n";
        in << tsv_line(1, hour_ms + 2 * 3600000, "7") << "\n";
        std::istringstream stream(in.str());
        IngestStats stats;
        HourlyTrafficSeries s = ingest_tsv(stream, TrafficKind::sms_in, {1}, 0.0, &stats);
        REQUIRE(s.size() == 3);
        CHECK(s.values[1] == 0.0);
        CHECK(stats.zero_filled_hours == 1);
        CHECK(stats.matched_records == 2);
    }

    SECTION("the default timezone shift moves the hour bucket forward") {
        std::istringstream stream(tsv_line(1, hour_ms, "5") + "\n");
        HourlyTrafficSeries s = ingest_tsv(stream, TrafficKind::sms_in, {1});
        CHECK(s.start == hour_ms / 1000 + 3600);
    }

    SECTION("line order does not matter") {
        std::vector<std::string> lines;
        for (int i = 0; i < 24; ++i)
            lines.push_back(tsv_line(1 + i % 3, hour_ms + i * 600000, std::to_string(i)));
        std::string forward, backward;
        for (const auto& l : lines) forward += l + "\n";
        for (auto it = lines.rbegin(); it != lines.rend(); ++it) backward += *it + "\n";
        std::istringstream a(forward), b(backward);
        HourlyTrafficSeries sa = ingest_tsv(a, TrafficKind::sms_in, {}, 0.0);
        HourlyTrafficSeries sb = ingest_tsv(b, TrafficKind::sms_in, {}, 0.0);
        CHECK(sa.start == sb.start);
        CHECK(sa.values == sb.values);
    }
}

TEST_CASE("series CSV round trip", "[data_io]") {
    HourlyTrafficSeries s;
    s.start = parse_timestamp("2013-12-01T00:00");
    s.values = {1.0, 0.0, 2.5, 1e-17, 123456.789};

    std::ostringstream out;
    write_series_csv(s, out);
    std::istringstream in(out.str());
    HourlyTrafficSeries back = read_series_csv(in);
    CHECK(back.start == s.start);
    CHECK(back.values == s.values);

    SECTION("gaps and negatives are rejected") {
        std::istringstream gap(
            "timestamp,value\n2013-12-01T00:00:00Z,1\n2013-12-01T02:00:00Z,2\n");
        CHECK_THROWS_AS(read_series_csv(gap), FormatError);
        std::istringstream neg("timestamp,value\n2013-12-01T00:00:00Z,-1\n");
        CHECK_THROWS_AS(read_series_csv(neg), FormatError);
        std::istringstream headerless("2013-12-01T00:00:00Z,1\n");
        CHECK_THROWS_AS(read_series_csv(headerless), FormatError);
    }
}

TEST_CASE("calendar CSV round trip", "[data_io]") {
    std::vector<EventInfo> events;
    EventInfo e;
    e.commencement = parse_timestamp("2013-12-01T16:00");
    e.duration_hours = 2.0;
    e.kind = "soccer";
    e.attendance = 32761;
    events.push_back(e);
    e.commencement = parse_timestamp("2013-12-04T22:00");
    e.attendance = 18320;
    events.push_back(e);
    EventCalendar calendar = make_calendar(events);

    std::ostringstream out;
    write_calendar_csv(calendar, out);
    std::istringstream in(out.str());
    EventCalendar back = read_calendar_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back.events[0].commencement == calendar.events[0].commencement);
    CHECK(back.events[1].attendance == 18320);
    CHECK(back.events[0].kind == "soccer");
}

TEST_CASE("model document round trip is field-exact", "[data_io]") {
    ModelDocument doc;
    std::mt19937_64 rng(3);
    doc.weekly = sample_weekly_model(rng);
    doc.weekly_objective = 1234.5678901234567;
    doc.weekly_converged = true;
    doc.kickoff_offset = -1.0;
    const double volumes[4] = {829.8, 349.8, 769.7, 2059.8};
    const double widths[4] = {1.263, 1.176, 1.011, 1.155};
    const double centers[4] = {15.0, 21.0, 20.75, 20.75};
    const char* days[4] = {"2013-12-01", "2013-12-04", "2013-12-08", "2013-12-11"};
    for (int i = 0; i < 4; ++i)
        doc.pulses.push_back(PulseRecord{parse_timestamp(days[i]),
                                         EventPulse{volumes[i], centers[i], widths[i]},
                                         0.5 + i, true});
    doc.regression = AttendanceRegression{0.03323, -258.85, 0.922, 4};
    doc.sigma_prior = SigmaPrior{1.15125, 4};

    std::ostringstream out;
    save_model(doc, out);
    std::istringstream in(out.str());
    ModelDocument back = load_model(in);

    for (ComponentLabel l : kAllComponents) {
        CHECK(back.weekly.at(l).peak == doc.weekly.at(l).peak);
        CHECK(back.weekly.at(l).center == doc.weekly.at(l).center);
        CHECK(back.weekly.at(l).width == doc.weekly.at(l).width);
    }
    REQUIRE(back.pulses.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(back.pulses[static_cast<std::size_t>(i)].pulse.volume == volumes[i]);
        CHECK(back.pulses[static_cast<std::size_t>(i)].pulse.width == widths[i]);
        CHECK(back.pulses[static_cast<std::size_t>(i)].event_day == parse_timestamp(days[i]));
    }
    REQUIRE(back.regression.has_value());
    CHECK(back.regression->slope == 0.03323);
    CHECK(back.regression->intercept == -258.85);
    REQUIRE(back.sigma_prior.has_value());
    CHECK(back.sigma_prior->mean_sigma == 1.15125);
    CHECK(back.weekly_objective == doc.weekly_objective);

    SECTION("truncated documents are rejected") {
        std::string text = out.str();
        std::istringstream cut(text.substr(0, text.size() / 2));
        CHECK_THROWS_AS(load_model(cut), FormatError);
    }

    SECTION("unknown versions are rejected") {
        std::string text = out.str();
        text.replace(text.find("format 1"), 8, "format 2");
        std::istringstream v2(text);
        CHECK_THROWS_AS(load_model(v2), VersionError);
    }

    SECTION("a model without events omits regression and prior") {
        ModelDocument bare;
        bare.weekly = doc.weekly;
        std::ostringstream bare_out;
        save_model(bare, bare_out);
        std::istringstream bare_in(bare_out.str());
        ModelDocument back_bare = load_model(bare_in);
        CHECK_FALSE(back_bare.regression.has_value());
        CHECK_FALSE(back_bare.sigma_prior.has_value());
        CHECK(back_bare.pulses.empty());
    }
}

TEST_CASE("forecast CSV format", "[data_io]") {
    std::vector<ForecastRow> rows(2);
    rows[0].hour = parse_timestamp("2013-12-16T00:00");
    rows[0].observed = 10.5;
    rows[0].predicted = 11.0;
    rows[0].daily = 10.0;
    rows[0].pulse = 1.0;
    rows[1].hour = parse_timestamp("2013-12-16T01:00");
    rows[1].predicted = 9.0;
    rows[1].daily = 9.0;

    std::ostringstream out;
    export_forecast_csv(rows, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "hour,observed,predicted,daily,pulse");
    std::getline(in, line);
    CHECK(line == "2013-12-16T00:00:00Z,10.5,11,10,1");
    std::getline(in, line);
    CHECK(line == "2013-12-16T01:00:00Z,,9,9,0");
    CHECK(out.str().back() == '\n');
}

TEST_CASE("synthetic generation is deterministic and faithful", "[data_io]") {
    std::mt19937_64 rng(8);
    SyntheticSpec spec;
    spec.weekly = sample_weekly_model(rng);
    spec.weeks = 1;

    SECTION("no noise reproduces the model exactly") {
        SyntheticData data = generate_synthetic(spec);
        REQUIRE(data.series.size() == 168);
        for (std::size_t i = 0; i < data.series.size(); ++i) {
            CalendarIndex ci = calendar_index(data.series.hour_epoch(i));
            CHECK(data.series.values[i] ==
                  Catch::Approx(eval_week(spec.weekly, ci.day_of_week, ci.hour)));
        }
    }

    SECTION("the same seed is bit-identical, another seed is not") {
        spec.noise_fraction = 0.05;
        spec.seed = 42;
        SyntheticData a = generate_synthetic(spec);
        SyntheticData b = generate_synthetic(spec);
        CHECK(a.series.values == b.series.values);
        spec.seed = 43;
        SyntheticData c = generate_synthetic(spec);
        CHECK(a.series.values != c.series.values);
    }

    SECTION("noise matches its target std where clamping cannot bite") {
        spec.weeks = 3;
        spec.noise_fraction = 0.05;
        spec.seed = 4242;
        SyntheticData data = generate_synthetic(spec);
        double target = 0.05 * weekly_peak(spec.weekly);

        double sum_sq = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < data.series.size(); ++i) {
            CalendarIndex ci = calendar_index(data.series.hour_epoch(i));
            double clean = eval_week(spec.weekly, ci.day_of_week, ci.hour);
            if (clean < 4.0 * target) continue;  // clamped region excluded
            double dev = data.series.values[i] - clean;
            sum_sq += dev * dev;
            ++n;
        }
        REQUIRE(n >= 150);
        double sd = std::sqrt(sum_sq / static_cast<double>(n));
        CHECK(sd == Catch::Approx(target).epsilon(0.10));
    }

    SECTION("events appear in both series and calendar") {
        SyntheticData data = generate_synthetic(make_corpus_spec(CorpusParams{}));
        CHECK(data.calendar.size() == 6);
        CHECK(data.series.size() == 3 * 168);
        CHECK(data.ground_truth.pulses.size() == 6);
        // Pulse hours visibly exceed the weekly curve.
        const PulseRecord& p = data.ground_truth.pulses[0];
        std::size_t idx = static_cast<std::size_t>(
            (p.event_day - data.series.start) / kSecondsPerHour +
            static_cast<std::int64_t>(std::lround(p.pulse.center)));
        CalendarIndex ci = calendar_index(data.series.hour_epoch(idx));
        double clean = eval_week(data.ground_truth.weekly, ci.day_of_week, ci.hour);
        CHECK(data.series.values[idx] > clean + 0.5 * pulse_peak(p.pulse));
    }
}
