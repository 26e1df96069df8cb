// Command-line front end: synthesize data, fit the traffic model, predict in
// both modes, and evaluate against the statistical baselines.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eventcast/eventcast.hpp"

namespace {

using namespace eventcast;

struct GlobalFlags {
    std::uint64_t seed = 1;
    bool verbose = false;
};

struct FitFlags {
    FitConfig config;
    double kickoff_offset = -1.0;
};

void add_fit_flags(CLI::App* cmd, FitFlags& flags) {
    cmd->add_option("--max-iter", flags.config.max_iterations, "Gradient descent iteration cap");
    cmd->add_option("--lr", flags.config.learning_rate, "Gradient descent learning rate");
    cmd->add_option("--tol", flags.config.convergence_tol, "Relative objective improvement to stop");
    cmd->add_option("--restarts", flags.config.restarts, "Jittered restarts, best objective kept");
    cmd->add_option("--offset", flags.kickoff_offset,
                    "Pulse center offset from kickoff, hours (default -1)");
}

EventCalendar events_between(const EventCalendar& calendar, std::int64_t from, std::int64_t to) {
    std::vector<EventInfo> picked;
    for (const auto& e : calendar.events)
        if (e.commencement >= from && e.commencement < to) picked.push_back(e);
    return make_calendar(std::move(picked));
}

std::vector<ForecastRow> forecast_rows(const HourlyTrafficSeries& predicted,
                                       const ForecastComponents& parts,
                                       const HourlyTrafficSeries* observed) {
    std::vector<ForecastRow> rows(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        rows[i].hour = predicted.hour_epoch(i);
        rows[i].predicted = predicted.values[i];
        rows[i].daily = parts.daily[i];
        rows[i].pulse = parts.pulse[i];
        if (observed && rows[i].hour >= observed->start && rows[i].hour < observed->end_epoch())
            rows[i].observed =
                observed->values[static_cast<std::size_t>((rows[i].hour - observed->start) /
                                                          kSecondsPerHour)];
    }
    return rows;
}

int cmd_synth(const GlobalFlags& global, const CorpusParams& params_in,
              const std::string& out_series, const std::string& out_calendar,
              const std::string& out_model) {
    CorpusParams params = params_in;
    params.seed = global.seed;
    SyntheticSpec spec = make_corpus_spec(params);
    SyntheticData data = generate_synthetic(spec);
    write_series_csv(data.series, out_series);
    write_calendar_csv(data.calendar, out_calendar);
    save_model(data.ground_truth, out_model);
    if (global.verbose)
        std::cout << "synthesized " << data.series.size() << " hours, "
                  << data.calendar.size() << " events\n";
    return 0;
}

int cmd_fit(const GlobalFlags& global, const FitFlags& flags, const std::string& series_path,
            const std::string& calendar_path, const std::string& out_model) {
    HourlyTrafficSeries series =
        detail::run_stage("series", [&] { return read_series_csv_file(series_path); });
    EventCalendar calendar =
        detail::run_stage("calendar", [&] { return read_calendar_csv_file(calendar_path); });

    ModelDocument doc =
        fit_pipeline(series, calendar, flags.config, flags.kickoff_offset, &std::cout);
    detail::run_stage("model-write", [&] {
        save_model(doc, out_model);
        return 0;
    });

    std::cout << "weekly objective " << format_double(doc.weekly_objective)
              << (doc.weekly_converged ? " (converged)" : " (iteration cap)") << '\n';
    for (const auto& p : doc.pulses)
        std::cout << "pulse " << format_date(p.event_day) << ": volume "
                  << format_double(p.pulse.volume) << ", center " << format_double(p.pulse.center)
                  << ", width " << format_double(p.pulse.width) << ", sse "
                  << format_double(p.sse) << '\n';
    if (doc.regression)
        std::cout << "attendance regression: slope " << format_double(doc.regression->slope)
                  << ", intercept " << format_double(doc.regression->intercept) << ", r "
                  << format_double(doc.regression->pearson_r) << '\n';
    if (doc.sigma_prior)
        std::cout << "sigma prior: " << format_double(doc.sigma_prior->mean_sigma) << " h over "
                  << doc.sigma_prior->n_samples << " events\n";
    if (global.verbose) std::cout << "model written to " << out_model << '\n';
    return 0;
}

int cmd_predict(const GlobalFlags& global, const FitFlags& flags, const std::string& model_path,
                const std::string& calendar_path, const std::string& mode,
                const std::string& start_text, int horizon, const std::string& observed_path,
                const std::string& out_path) {
    ModelDocument doc = detail::run_stage("model", [&] { return load_model_file(model_path); });
    EventCalendar calendar;
    if (!calendar_path.empty())
        calendar =
            detail::run_stage("calendar", [&] { return read_calendar_csv_file(calendar_path); });

    if (mode == "multi") {
        std::int64_t start = detail::run_stage("predict", [&] {
            std::int64_t s = parse_timestamp(start_text);
            if (!is_hour_aligned(s)) throw FormatError("start must be on an hour boundary");
            return s;
        });
        auto [reg, prior] = calendar.empty()
                                ? std::pair<AttendanceRegression, SigmaPrior>{{}, {}}
                                : detail::run_stage("predict", [&] { return advance_estimators(doc); });
        ForecastRequest request{horizon, start, calendar, ForecastMode::multi_step};
        ForecastComponents parts;
        HourlyTrafficSeries predicted = detail::run_stage("predict", [&] {
            return predict_multistep(doc.weekly, request, reg, prior, doc.kickoff_offset, &parts);
        });
        detail::run_stage("forecast-write", [&] {
            export_forecast_csv(forecast_rows(predicted, parts, nullptr), out_path);
            return 0;
        });
    } else if (mode == "single") {
        if (observed_path.empty())
            throw StageError("predict", "single-step mode needs --observed");
        HourlyTrafficSeries observed =
            detail::run_stage("series", [&] { return read_series_csv_file(observed_path); });
        auto [reg, prior] = calendar.empty()
                                ? std::pair<AttendanceRegression, SigmaPrior>{{}, {}}
                                : detail::run_stage("predict", [&] { return advance_estimators(doc); });
        RollingForecast rolled = detail::run_stage("predict", [&] {
            return predict_singlestep_rolling(doc.weekly, observed, calendar, reg, prior,
                                              doc.kickoff_offset, flags.config);
        });
        detail::run_stage("forecast-write", [&] {
            export_forecast_csv(forecast_rows(rolled.predicted, rolled.components, &observed),
                                out_path);
            return 0;
        });
    } else {
        throw StageError("predict", "mode must be 'multi' or 'single'");
    }
    if (global.verbose) std::cout << "forecast written to " << out_path << '\n';
    return 0;
}

struct BaselineChoice {
    bool arma = false;
    bool arima = false;
    bool snaive = false;
};

int cmd_evaluate(const GlobalFlags& global, const FitFlags& flags, const std::string& series_path,
                 const std::string& calendar_path, const std::string& train_end_text,
                 const std::string& test_end_text, const std::vector<std::string>& baselines,
                 const std::string& arma_order_text, const std::string& arima_order_text,
                 const std::string& out_path, const std::string& forecast_multi_path,
                 const std::string& forecast_single_path) {
    HourlyTrafficSeries series =
        detail::run_stage("series", [&] { return read_series_csv_file(series_path); });
    EventCalendar calendar =
        detail::run_stage("calendar", [&] { return read_calendar_csv_file(calendar_path); });

    std::int64_t train_end = detail::run_stage("evaluate", [&] {
        std::int64_t t = parse_timestamp(train_end_text);
        if (!is_hour_aligned(t)) throw FormatError("train-end must be on an hour boundary");
        return t;
    });
    std::int64_t test_end = series.end_epoch();
    if (!test_end_text.empty())
        test_end = detail::run_stage("evaluate", [&] { return parse_timestamp(test_end_text); });

    HourlyTrafficSeries train = slice_series(series, series.start, train_end);
    HourlyTrafficSeries test = slice_series(series, train_end, test_end);
    EventCalendar train_events = events_between(calendar, series.start, train_end);
    EventCalendar test_events = events_between(calendar, train_end, test_end);
    int steps = static_cast<int>(test.size());

    std::vector<std::string> report;
    report.push_back(report_csv_header());

    // The proposed model, both prediction modes.
    ModelDocument doc;
    Timing fit_time = time_run([&] {
        doc = fit_pipeline(train, train_events, flags.config, flags.kickoff_offset,
                           global.verbose ? &std::cout : nullptr);
    });
    auto [reg, prior] = detail::run_stage("evaluate", [&] { return advance_estimators(doc); });

    ForecastRequest request{steps, train_end, test_events, ForecastMode::multi_step};
    ForecastComponents multi_parts;
    HourlyTrafficSeries multi;
    Timing multi_time = time_run([&] {
        multi = predict_multistep(doc.weekly, request, reg, prior, doc.kickoff_offset, &multi_parts);
    });
    report.push_back(report_csv_row(
        "sg-nntp", "multi_step",
        evaluate(test.values, multi.values, fit_time.wall_ms, multi_time.wall_ms)));

    RollingForecast rolled;
    Timing single_time = time_run([&] {
        rolled = predict_singlestep_rolling(doc.weekly, test, test_events, reg, prior,
                                            doc.kickoff_offset, flags.config);
    });
    report.push_back(report_csv_row(
        "sg-nntp", "single_step",
        evaluate(test.values, rolled.predicted.values, fit_time.wall_ms, single_time.wall_ms)));

    if (!forecast_multi_path.empty())
        export_forecast_csv(forecast_rows(multi, multi_parts, &test), forecast_multi_path);
    if (!forecast_single_path.empty())
        export_forecast_csv(forecast_rows(rolled.predicted, rolled.components, &test),
                            forecast_single_path);

    BaselineChoice chosen;
    for (const auto& b : baselines) {
        if (b == "arma") chosen.arma = true;
        else if (b == "arima") chosen.arima = true;
        else if (b == "snaive") chosen.snaive = true;
        else throw StageError("evaluate", "unknown baseline '" + b + "'");
    }

    auto run_arma_baseline = [&](const std::string& name, int d, const std::string& order_text) {
        ArmaOrder order{0, d, 0};
        ArmaModel model;
        Timing train_time = time_run([&] {
            order = detail::run_stage("baseline", [&] {
                if (order_text.empty()) return select_order_bic(train, 3, 3, d);
                int p = 0, q = 0;
                if (std::sscanf(order_text.c_str(), "%d,%d", &p, &q) != 2)
                    throw FormatError("order must be 'p,q'");
                return ArmaOrder{p, d, q};
            });
            model = detail::run_stage("baseline", [&] { return fit_arma(train, order); });
        });
        if (global.verbose)
            std::cout << name << " order (" << order.p << "," << order.d << "," << order.q
                      << ")\n";

        HourlyTrafficSeries ahead;
        Timing multi_t = time_run([&] { ahead = forecast(model, train, steps); });
        report.push_back(report_csv_row(
            name, "multi_step",
            evaluate(test.values, ahead.values, train_time.wall_ms, multi_t.wall_ms)));

        std::vector<double> single(test.size());
        Timing single_t = time_run([&] {
            std::vector<double> all = one_step_predictions(model, series);
            std::size_t off = train.size();
            for (std::size_t i = 0; i < test.size(); ++i) single[i] = all[off + i];
        });
        report.push_back(report_csv_row(
            name, "single_step",
            evaluate(test.values, single, train_time.wall_ms, single_t.wall_ms)));
    };

    if (chosen.arma) run_arma_baseline("arma", 0, arma_order_text);
    if (chosen.arima) run_arma_baseline("arima", 1, arima_order_text);
    if (chosen.snaive) {
        HourlyTrafficSeries ahead;
        Timing multi_t =
            time_run([&] { ahead = detail::run_stage("baseline", [&] {
                               return seasonal_naive(train, steps, kHoursPerWeek);
                           }); });
        report.push_back(report_csv_row("snaive", "multi_step",
                                        evaluate(test.values, ahead.values, 0.0, multi_t.wall_ms)));
        detail::run_stage("baseline", [&] {
            if (train.size() < static_cast<std::size_t>(kHoursPerWeek))
                throw InsufficientDataError("snaive: training span shorter than one week");
            return 0;
        });
        std::vector<double> single(test.size());
        Timing single_t = time_run([&] {
            for (std::size_t i = 0; i < test.size(); ++i) {
                std::size_t idx = train.size() + i - static_cast<std::size_t>(kHoursPerWeek);
                single[i] = series.values[idx];
            }
        });
        report.push_back(report_csv_row("snaive", "single_step",
                                        evaluate(test.values, single, 0.0, single_t.wall_ms)));
    }

    detail::run_stage("report-write", [&] {
        if (out_path.empty()) {
            for (const auto& row : report) std::cout << row << '\n';
        } else {
            std::ofstream out = detail::open_output(out_path);
            for (const auto& row : report) out << row << '\n';
        }
        return 0;
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-aware cellular traffic forecasting"};
    app.require_subcommand(1);
    app.set_config("--config");

    GlobalFlags global;
    app.add_option("--seed", global.seed, "Seed for every random choice");
    app.add_flag("--verbose", global.verbose, "Chatty progress output");

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic series, calendar and ground truth");
    CorpusParams corpus;
    std::string out_series = "series.csv", out_calendar = "calendar.csv",
                out_model = "ground_truth.model";
    synth->add_option("--weeks", corpus.weeks, "Total weeks, the last one reserved for testing");
    synth->add_option("--noise", corpus.noise_fraction, "Noise std as a fraction of the weekly peak");
    synth->add_option("--train-events", corpus.train_events, "Events in the training span");
    synth->add_option("--test-events", corpus.test_events, "Events in the final week");
    synth->add_option("--out-series", out_series, "Series CSV path");
    synth->add_option("--out-calendar", out_calendar, "Calendar CSV path");
    synth->add_option("--out-model", out_model, "Ground-truth model document path");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit the weekly profile, event pulses and regression");
    FitFlags fit_flags;
    std::string fit_series, fit_calendar, fit_out = "fitted.model";
    fit->add_option("--series", fit_series, "Observed hourly series CSV")->required();
    fit->add_option("--calendar", fit_calendar, "Event calendar CSV")->required();
    fit->add_option("--out-model", fit_out, "Fitted model document path");
    add_fit_flags(fit, fit_flags);

    // predict
    auto* predict = app.add_subcommand("predict", "Forecast from a fitted model document");
    FitFlags predict_flags;
    std::string model_path, predict_calendar, mode = "multi", start_text, observed_path,
                predict_out = "forecast.csv";
    int horizon = kHoursPerWeek;
    predict->add_option("--model", model_path, "Fitted model document")->required();
    predict->add_option("--calendar", predict_calendar, "Advance information for upcoming events");
    predict->add_option("--mode", mode, "multi (advance info only) or single (rolling one-step)");
    predict->add_option("--start", start_text, "First forecast hour (multi mode)");
    predict->add_option("--horizon", horizon, "Hours to forecast (multi mode)");
    predict->add_option("--observed", observed_path, "Observed series to roll over (single mode)");
    predict->add_option("--out", predict_out, "Forecast CSV path");
    add_fit_flags(predict, predict_flags);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score the model and baselines on a test span");
    FitFlags eval_flags;
    std::string eval_series, eval_calendar, train_end_text, test_end_text, report_out,
                forecast_multi_path, forecast_single_path, arma_order_text, arima_order_text;
    std::vector<std::string> baselines;
    evaluate->add_option("--series", eval_series, "Full observed series CSV")->required();
    evaluate->add_option("--calendar", eval_calendar, "Event calendar CSV")->required();
    evaluate->add_option("--train-end", train_end_text, "Training window end (exclusive)")
        ->required();
    evaluate->add_option("--test-end", test_end_text, "Test window end (default: series end)");
    evaluate->add_option("--baseline", baselines, "arma, arima or snaive; repeatable");
    evaluate->add_option("--arma-order", arma_order_text, "Pin the ARMA order as 'p,q'");
    evaluate->add_option("--arima-order", arima_order_text, "Pin the ARIMA order as 'p,q' (d=1)");
    evaluate->add_option("--out", report_out, "Report CSV path (default: stdout)");
    evaluate->add_option("--forecast-multi", forecast_multi_path, "Multi-step forecast CSV path");
    evaluate->add_option("--forecast-single", forecast_single_path,
                         "Single-step forecast CSV path");
    add_fit_flags(evaluate, eval_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return cmd_synth(global, corpus, out_series, out_calendar, out_model);
        if (*fit) return cmd_fit(global, fit_flags, fit_series, fit_calendar, fit_out);
        if (*predict)
            return cmd_predict(global, predict_flags, model_path, predict_calendar, mode,
                               start_text, horizon, observed_path, predict_out);
        if (*evaluate)
            return cmd_evaluate(global, eval_flags, eval_series, eval_calendar, train_end_text,
                                test_end_text, baselines, arma_order_text, arima_order_text,
                                report_out, forecast_multi_path, forecast_single_path);
    } catch (const eventcast::StageError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "[cli] " << e.what() << '\n';
        return 1;
    }
    return 0;
}
