#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eventcast/daily_model.hpp"
#include "eventcast/errors.hpp"
#include "eventcast/event_model.hpp"
#include "eventcast/event_regression.hpp"
#include "eventcast/metrics.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

/// Full round-trip decimal form of a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Timestamps
// ---------------------------------------------------------------------------

/// Parse "YYYY-MM-DD[THH:MM[:SS]][Z]" as UTC epoch seconds.
inline std::int64_t parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
    if (n < 3) throw FormatError("unparseable timestamp: " + text);
    using namespace std::chrono;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 59)
        throw FormatError("timestamp field out of range: " + text);
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw FormatError("invalid calendar date: " + text);
    sys_days days{ymd};
    return duration_cast<seconds>(days.time_since_epoch()).count() + h * 3600 + mi * 60 + s;
}

inline std::string format_timestamp(std::int64_t epoch_s) {
    using namespace std::chrono;
    sys_seconds tp{seconds{epoch_s}};
    sys_days dp = floor<days>(tp);
    year_month_day ymd{dp};
    std::int64_t rem = epoch_s - duration_cast<seconds>(dp.time_since_epoch()).count();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                  static_cast<int>((rem % 3600) / 60), static_cast<int>(rem % 60));
    return buf;
}

inline std::string format_date(std::int64_t epoch_s) {
    return format_timestamp(day_start(epoch_s)).substr(0, 10);
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

inline double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw FormatError("trailing characters in number", line_no);
        return v;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception&) {
        throw FormatError("unparseable number '" + s + "'", line_no);
    }
}

inline std::int64_t parse_int(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw FormatError("trailing characters in integer", line_no);
        return v;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception&) {
        throw FormatError("unparseable integer '" + s + "'", line_no);
    }
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Grid record ingestion
// ---------------------------------------------------------------------------

enum class TrafficKind { sms_in, sms_out, call_in, call_out, internet };

inline TrafficKind traffic_kind_from_string(const std::string& s) {
    if (s == "sms_in") return TrafficKind::sms_in;
    if (s == "sms_out") return TrafficKind::sms_out;
    if (s == "call_in") return TrafficKind::call_in;
    if (s == "call_out") return TrafficKind::call_out;
    if (s == "internet") return TrafficKind::internet;
    throw std::invalid_argument("unknown traffic kind: " + s);
}

/// One raw record: a grid square, a 10-minute interval, per-service volumes.
struct GridTrafficRecord {
    std::int64_t square_id = 0;
    std::int64_t epoch_ms = 0;
    std::optional<double> sms_in, sms_out, call_in, call_out, internet;

    std::optional<double> field(TrafficKind kind) const {
        switch (kind) {
            case TrafficKind::sms_in: return sms_in;
            case TrafficKind::sms_out: return sms_out;
            case TrafficKind::call_in: return call_in;
            case TrafficKind::call_out: return call_out;
            case TrafficKind::internet: return internet;
        }
        return std::nullopt;
    }
};

/// Tab-separated fields: square_id, epoch_ms, country_code, sms_in, sms_out,
/// call_in, call_out, internet.  Trailing fields may be empty or absent.
inline GridTrafficRecord parse_grid_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> f = detail::split(line, '\t');
    if (f.size() < 3) throw FormatError("record needs square_id, timestamp, country_code", line_no);
    GridTrafficRecord r;
    r.square_id = detail::parse_int(f[0], line_no);
    r.epoch_ms = detail::parse_int(f[1], line_no);
    if (r.epoch_ms % 600000 != 0)
        throw FormatError("timestamp is not a 10-minute boundary", line_no);
    auto opt_field = [&](std::size_t i) -> std::optional<double> {
        if (i >= f.size() || f[i].empty()) return std::nullopt;
        return detail::parse_double(f[i], line_no);
    };
    r.sms_in = opt_field(3);
    r.sms_out = opt_field(4);
    r.call_in = opt_field(5);
    r.call_out = opt_field(6);
    r.internet = opt_field(7);
    if (!r.sms_in && !r.sms_out && !r.call_in && !r.call_out && !r.internet)
        throw FormatError("record carries no traffic field", line_no);
    return r;
}

struct IngestStats {
    std::size_t lines = 0;
    std::size_t matched_records = 0;
    std::size_t zero_filled_hours = 0;
};

/// Aggregate raw 10-minute grid records into one hourly series: filter to
/// grid_ids (empty set = every grid), sum the chosen field over grids and
/// over the six sub-intervals of each hour.  Timestamps are UTC shifted by
/// utc_offset_hours before bucketing (default +1, Milan winter time).  Hours
/// inside the covered span with no records become zeros, counted in stats.
inline HourlyTrafficSeries ingest_tsv(std::istream& in, TrafficKind kind,
                                      const std::set<std::int64_t>& grid_ids,
                                      double utc_offset_hours = 1.0,
                                      IngestStats* stats = nullptr) {
    std::map<std::int64_t, double> hours;  // hour epoch (shifted) -> sum
    std::int64_t offset_s = static_cast<std::int64_t>(utc_offset_hours * kSecondsPerHour);
    std::string line;
    std::size_t line_no = 0;
    IngestStats local;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        GridTrafficRecord r = parse_grid_record(line, line_no);
        if (!grid_ids.empty() && !grid_ids.count(r.square_id)) continue;
        ++local.matched_records;
        std::int64_t shifted = r.epoch_ms / 1000 + offset_s;
        std::int64_t bucket = floor_div(shifted, kSecondsPerHour) * kSecondsPerHour;
        hours[bucket] += r.field(kind).value_or(0.0);
    }
    local.lines = line_no;
    if (hours.empty()) throw EmptySelectionError("ingest_tsv: no records matched the grid filter");

    HourlyTrafficSeries out;
    out.start = hours.begin()->first;
    std::int64_t last = hours.rbegin()->first;
    out.values.reserve(static_cast<std::size_t>((last - out.start) / kSecondsPerHour) + 1);
    for (std::int64_t h = out.start; h <= last; h += kSecondsPerHour) {
        auto it = hours.find(h);
        if (it == hours.end()) {
            out.values.push_back(0.0);
            ++local.zero_filled_hours;
        } else {
            out.values.push_back(it->second);
        }
    }
    if (stats) *stats = local;
    return out;
}

inline HourlyTrafficSeries ingest_tsv_file(const std::string& path, TrafficKind kind,
                                           const std::set<std::int64_t>& grid_ids,
                                           double utc_offset_hours = 1.0,
                                           IngestStats* stats = nullptr) {
    std::ifstream in = detail::open_input(path);
    return ingest_tsv(in, kind, grid_ids, utc_offset_hours, stats);
}

// ---------------------------------------------------------------------------
// Series and calendar CSV
// ---------------------------------------------------------------------------

inline void write_series_csv(const HourlyTrafficSeries& series, std::ostream& out) {
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << format_timestamp(series.hour_epoch(i)) << ',' << format_double(series.values[i])
            << '\n';
}

inline void write_series_csv(const HourlyTrafficSeries& series, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    write_series_csv(series, out);
}

inline HourlyTrafficSeries read_series_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || detail::split(line, ',')[0] != "timestamp")
        throw FormatError("series CSV must start with a timestamp,value header");
    ++line_no;
    HourlyTrafficSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f = detail::split(line, ',');
        if (f.size() != 2) throw FormatError("series row needs timestamp,value", line_no);
        std::int64_t ts = parse_timestamp(f[0]);
        if (!is_hour_aligned(ts)) throw FormatError("sample timestamp not hour-aligned", line_no);
        double v = detail::parse_double(f[1], line_no);
        if (!std::isfinite(v) || v < 0.0)
            throw FormatError("traffic value must be finite and non-negative", line_no);
        if (series.values.empty())
            series.start = ts;
        else if (ts != series.hour_epoch(series.values.size()))
            throw FormatError("series has a gap or is out of order", line_no);
        series.values.push_back(v);
    }
    if (series.values.empty()) throw FormatError("series CSV contains no samples");
    return series;
}

inline HourlyTrafficSeries read_series_csv_file(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    return read_series_csv(in);
}

inline void write_calendar_csv(const EventCalendar& calendar, std::ostream& out) {
    out << "commencement,duration_hours,kind,attendance\n";
    for (const auto& e : calendar.events)
        out << format_timestamp(e.commencement) << ',' << format_double(e.duration_hours) << ','
            << e.kind << ',' << e.attendance << '\n';
}

inline void write_calendar_csv(const EventCalendar& calendar, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    write_calendar_csv(calendar, out);
}

inline EventCalendar read_calendar_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || detail::split(line, ',')[0] != "commencement")
        throw FormatError("calendar CSV must start with a commencement,... header");
    ++line_no;
    std::vector<EventInfo> events;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f = detail::split(line, ',');
        if (f.size() != 4)
            throw FormatError("calendar row needs commencement,duration_hours,kind,attendance",
                              line_no);
        EventInfo e;
        e.commencement = parse_timestamp(f[0]);
        e.duration_hours = detail::parse_double(f[1], line_no);
        e.kind = f[2];
        e.attendance = detail::parse_int(f[3], line_no);
        events.push_back(std::move(e));
    }
    return make_calendar(std::move(events));
}

inline EventCalendar read_calendar_csv_file(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    return read_calendar_csv(in);
}

// ---------------------------------------------------------------------------
// Model document
// ---------------------------------------------------------------------------

constexpr int kModelFormatVersion = 1;

/// One fitted event pulse, anchored to its calendar day.  pulse.center is on
/// that day's frame.
struct PulseRecord {
    std::int64_t event_day = 0;  // midnight epoch seconds
    EventPulse pulse;
    double sse = 0.0;
    bool converged = false;
};

/// Everything the prediction stages need, as one serializable document.
struct ModelDocument {
    int version = kModelFormatVersion;
    WeeklyProfileModel weekly;
    double weekly_objective = 0.0;
    bool weekly_converged = false;
    std::vector<PulseRecord> pulses;
    std::optional<AttendanceRegression> regression;
    std::optional<SigmaPrior> sigma_prior;
    double kickoff_offset = -1.0;
};

inline void save_model(const ModelDocument& doc, std::ostream& out) {
    auto kv = [&](const std::string& key, const std::string& value) {
        out << key << ' ' << value << '\n';
    };
    kv("format", std::to_string(doc.version));
    kv("kickoff_offset", format_double(doc.kickoff_offset));
    for (ComponentLabel l : kAllComponents) {
        const GaussianComponent& c = doc.weekly.at(l);
        std::string name = to_string(l);
        kv(name + ".R", format_double(c.peak));
        kv(name + ".t", format_double(c.center));
        kv(name + ".sigma", format_double(c.width));
    }
    kv("weekly.objective", format_double(doc.weekly_objective));
    kv("weekly.converged", doc.weekly_converged ? "1" : "0");
    kv("pulses", std::to_string(doc.pulses.size()));
    for (std::size_t i = 0; i < doc.pulses.size(); ++i) {
        const PulseRecord& p = doc.pulses[i];
        std::string key = "pulse." + std::to_string(i);
        kv(key + ".day", format_date(p.event_day));
        kv(key + ".volume", format_double(p.pulse.volume));
        kv(key + ".center", format_double(p.pulse.center));
        kv(key + ".width", format_double(p.pulse.width));
        kv(key + ".sse", format_double(p.sse));
        kv(key + ".converged", p.converged ? "1" : "0");
    }
    kv("regression", doc.regression ? "1" : "0");
    if (doc.regression) {
        kv("regression.slope", format_double(doc.regression->slope));
        kv("regression.intercept", format_double(doc.regression->intercept));
        kv("regression.r", format_double(doc.regression->pearson_r));
        kv("regression.n", std::to_string(doc.regression->n_samples));
    }
    kv("sigma_prior", doc.sigma_prior ? "1" : "0");
    if (doc.sigma_prior) {
        kv("sigma_prior.mean", format_double(doc.sigma_prior->mean_sigma));
        kv("sigma_prior.n", std::to_string(doc.sigma_prior->n_samples));
    }
}

inline void save_model(const ModelDocument& doc, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    save_model(doc, out);
}

inline ModelDocument load_model(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t sp = line.find(' ');
        if (sp == std::string::npos || sp == 0 || sp + 1 >= line.size())
            throw FormatError("model document line is not 'key value'", line_no);
        kv[line.substr(0, sp)] = line.substr(sp + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw FormatError("model document is missing key '" + key + "'");
        return it->second;
    };
    auto need_double = [&](const std::string& key) {
        return detail::parse_double(need(key), 0);
    };

    if (kv.find("format") == kv.end())
        throw FormatError("model document has no format version");
    std::int64_t version = detail::parse_int(need("format"), 0);
    if (version != kModelFormatVersion)
        throw VersionError("model document format " + std::to_string(version) +
                           " is not supported (expected " +
                           std::to_string(kModelFormatVersion) + ")");

    ModelDocument doc;
    doc.version = static_cast<int>(version);
    doc.kickoff_offset = need_double("kickoff_offset");
    for (ComponentLabel l : kAllComponents) {
        std::string name = to_string(l);
        GaussianComponent& c = doc.weekly.at(l);
        c.peak = need_double(name + ".R");
        c.center = need_double(name + ".t");
        c.width = need_double(name + ".sigma");
    }
    validate(doc.weekly);
    doc.weekly_objective = need_double("weekly.objective");
    doc.weekly_converged = need("weekly.converged") == "1";
    std::int64_t n_pulses = detail::parse_int(need("pulses"), 0);
    for (std::int64_t i = 0; i < n_pulses; ++i) {
        std::string key = "pulse." + std::to_string(i);
        PulseRecord p;
        p.event_day = parse_timestamp(need(key + ".day"));
        p.pulse.volume = need_double(key + ".volume");
        p.pulse.center = need_double(key + ".center");
        p.pulse.width = need_double(key + ".width");
        p.sse = need_double(key + ".sse");
        p.converged = need(key + ".converged") == "1";
        validate(p.pulse);
        doc.pulses.push_back(p);
    }
    if (need("regression") == "1") {
        AttendanceRegression reg;
        reg.slope = need_double("regression.slope");
        reg.intercept = need_double("regression.intercept");
        reg.pearson_r = need_double("regression.r");
        reg.n_samples = static_cast<int>(detail::parse_int(need("regression.n"), 0));
        doc.regression = reg;
    }
    if (need("sigma_prior") == "1") {
        SigmaPrior prior;
        prior.mean_sigma = need_double("sigma_prior.mean");
        prior.n_samples = static_cast<int>(detail::parse_int(need("sigma_prior.n"), 0));
        doc.sigma_prior = prior;
    }
    return doc;
}

inline ModelDocument load_model_file(const std::string& path) {
    std::ifstream in = detail::open_input(path);
    return load_model(in);
}

// ---------------------------------------------------------------------------
// Forecast and report CSV
// ---------------------------------------------------------------------------

struct ForecastRow {
    std::int64_t hour = 0;  // epoch seconds
    std::optional<double> observed;
    double predicted = 0.0;
    double daily = 0.0;
    double pulse = 0.0;
};

inline void export_forecast_csv(const std::vector<ForecastRow>& rows, std::ostream& out) {
    out << "hour,observed,predicted,daily,pulse\n";
    for (const auto& r : rows) {
        out << format_timestamp(r.hour) << ',';
        if (r.observed) out << format_double(*r.observed);
        out << ',' << format_double(r.predicted) << ',' << format_double(r.daily) << ','
            << format_double(r.pulse) << '\n';
    }
}

inline void export_forecast_csv(const std::vector<ForecastRow>& rows, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    export_forecast_csv(rows, out);
}

inline std::string report_csv_header() { return "model,mode,n,mse,rmse,mae,r2,train_ms,predict_ms"; }

inline std::string report_csv_row(const std::string& model, const std::string& mode,
                                  const EvaluationReport& r) {
    std::ostringstream out;
    out << model << ',' << mode << ',' << r.n << ',' << format_double(r.mse) << ','
        << format_double(r.rmse) << ',' << format_double(r.mae) << ',' << format_double(r.r2)
        << ',' << format_double(r.elapsed_train_ms) << ',' << format_double(r.elapsed_predict_ms);
    return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

/// One synthetic event: the advance information the predictor will see and
/// the true pulse the generator composes into the series.  pulse.center is
/// on the frame of the event's day.
struct SyntheticEvent {
    EventInfo info;
    EventPulse pulse;
};

struct SyntheticSpec {
    WeeklyProfileModel weekly;
    std::vector<SyntheticEvent> events;
    double noise_fraction = 0.0;  // noise std as a fraction of the weekly peak
    std::uint64_t seed = 0;
    int weeks = 1;
    std::int64_t start = 1384732800;  // 2013-11-18T00:00Z, a Monday
};

struct SyntheticData {
    HourlyTrafficSeries series;
    EventCalendar calendar;
    ModelDocument ground_truth;
};

namespace detail {

/// Deterministic standard normals: Box-Muller over mt19937_64, identical on
/// every platform for a given seed.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = unit();
        double u2 = unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double unit() {  // strictly inside (0, 1)
        return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace detail

/// Sample the weekly model plus every event pulse at integer hours, add
/// seeded Gaussian noise (std = noise_fraction x weekly peak) and clamp at
/// zero.  The same seed reproduces the series bit for bit.
inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.weeks < 1) throw std::invalid_argument("generate_synthetic: weeks must be >= 1");
    if (spec.noise_fraction < 0.0)
        throw std::invalid_argument("generate_synthetic: noise_fraction must be >= 0");
    if (!is_day_aligned(spec.start))
        throw std::invalid_argument("generate_synthetic: start must be a midnight");
    validate(spec.weekly);

    SyntheticData data;
    data.series.start = spec.start;
    std::size_t n = static_cast<std::size_t>(spec.weeks) * kHoursPerWeek;
    data.series.values.resize(n);

    double noise_std = spec.noise_fraction * weekly_peak(spec.weekly);
    detail::GaussianSampler noise(spec.seed);

    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t h = data.series.hour_epoch(i);
        CalendarIndex ci = calendar_index(h);
        double v = eval_week(spec.weekly, ci.day_of_week, ci.hour);
        for (const auto& ev : spec.events) {
            double t = static_cast<double>(h - day_start(ev.info.commencement)) / kSecondsPerHour;
            v += eval_pulse(ev.pulse, t);
        }
        if (noise_std > 0.0) v += noise_std * noise();
        data.series.values[i] = std::max(0.0, v);
    }

    std::vector<EventInfo> infos;
    for (const auto& ev : spec.events) infos.push_back(ev.info);
    data.calendar = make_calendar(std::move(infos));

    data.ground_truth.weekly = spec.weekly;
    data.ground_truth.weekly_converged = true;
    for (const auto& ev : spec.events)
        data.ground_truth.pulses.push_back(
            PulseRecord{day_start(ev.info.commencement), ev.pulse, 0.0, true});
    return data;
}

/// A plausible random weekly profile: three bumps per day class with
/// morning/afternoon/evening anchors, amplitudes in a realistic band.
inline WeeklyProfileModel sample_weekly_model(std::mt19937_64& rng) {
    auto uniform = [&](double lo, double hi) {
        double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };
    WeeklyProfileModel m;
    for (ComponentLabel l : kAllComponents) {
        GaussianComponent& c = m.at(l);
        switch (time_of_day_slot(l)) {
            case 0: c.center = uniform(8.5, 10.0); break;
            case 1: c.center = uniform(14.5, 16.0); break;
            default: c.center = uniform(20.0, 21.5); break;
        }
        c.width = uniform(2.0, 3.0);
        c.peak = uniform(380.0, 700.0);
    }
    return m;
}

/// Builder for the synthetic soccer-season corpus used by the demos and the
/// end-to-end tests: `train_events` games spread over the first weeks-1
/// weeks, `test_events` games in the final week.  True pulse volumes follow
/// a linear attendance law with a per-event deviation, so online refits have
/// something real to correct.
struct CorpusParams {
    std::uint64_t seed = 1;
    int weeks = 3;
    int train_events = 4;
    int test_events = 2;
    double noise_fraction = 0.05;
    double volume_slope = 0.033;       // traffic volume per attendee
    double volume_intercept = -250.0;  // traffic volume
    double deviation = 0.08;           // relative spread of true volumes around the law
    double kickoff_offset = -1.0;      // pulse center relative to kickoff
};

inline SyntheticSpec make_corpus_spec(const CorpusParams& params) {
    if (params.weeks < 2) throw std::invalid_argument("corpus needs at least 2 weeks");
    int train_days = (params.weeks - 1) * 7;
    if (params.train_events > train_days / 3 || params.test_events > 2)
        throw std::invalid_argument("corpus event counts out of range");

    std::mt19937_64 rng(params.seed);
    auto uniform = [&](double lo, double hi) {
        double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };

    SyntheticSpec spec;
    spec.weekly = sample_weekly_model(rng);
    spec.noise_fraction = params.noise_fraction;
    spec.seed = params.seed ^ 0xD1B54A32D192ED03ull;
    spec.weeks = params.weeks;

    // Kickoff hours follow common fixture slots; event days are spread so
    // every weekday keeps at least one non-event instance in the train span.
    const double kickoff_slots[4] = {16.0, 18.5, 20.75, 21.75};
    auto add_event = [&](int day_index, int slot, double deviation_sign) {
        SyntheticEvent ev;
        std::int64_t day0 = spec.start + static_cast<std::int64_t>(day_index) * kSecondsPerDay;
        double kickoff_hour = kickoff_slots[slot % 4];
        ev.info.commencement = day0 + static_cast<std::int64_t>(kickoff_hour * kSecondsPerHour);
        ev.info.duration_hours = 2.0;
        ev.info.kind = "soccer";
        ev.info.attendance = static_cast<std::int64_t>(uniform(24000.0, 68000.0));
        double law = params.volume_slope * static_cast<double>(ev.info.attendance) +
                     params.volume_intercept;
        double dev = deviation_sign == 0.0 ? uniform(-params.deviation, params.deviation)
                                           : deviation_sign * params.deviation;
        ev.pulse.volume = std::max(50.0, law * (1.0 + dev));
        ev.pulse.width = uniform(1.0, 1.35);
        ev.pulse.center = kickoff_hour + params.kickoff_offset;
        spec.events.push_back(ev);
    };

    const int train_day_slots[4] = {2, 5, 9, 12};
    for (int e = 0; e < params.train_events; ++e)
        add_event(train_day_slots[e % 4] + 14 * (e / 4), e, 0.0);
    int test_base = (params.weeks - 1) * 7;
    for (int e = 0; e < params.test_events; ++e)
        add_event(test_base + 2 + 3 * e, e + 1, e % 2 == 0 ? 1.0 : -1.0);

    return spec;
}

}  // namespace eventcast
