#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <ctime>
#include <span>
#include <string>
#include <utility>

#include "eventcast/errors.hpp"

namespace eventcast {

namespace detail {
inline void check_pair(std::span<const double> actual, std::span<const double> predicted,
                       const char* who) {
    if (actual.size() != predicted.size())
        throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (actual.empty()) throw std::invalid_argument(std::string(who) + ": empty input");
}
}  // namespace detail

inline double mse(std::span<const double> actual, std::span<const double> predicted) {
    detail::check_pair(actual, predicted, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double d = actual[i] - predicted[i];
        sum += d * d;
    }
    return sum / static_cast<double>(actual.size());
}

inline double rmse(std::span<const double> actual, std::span<const double> predicted) {
    return std::sqrt(mse(actual, predicted));
}

inline double mae(std::span<const double> actual, std::span<const double> predicted) {
    detail::check_pair(actual, predicted, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - predicted[i]);
    return sum / static_cast<double>(actual.size());
}

/// 1 - SSE/SST.  At most 1; negative when the prediction is worse than the
/// mean.  A constant actual series has no variance to explain and is an error.
inline double r2(std::span<const double> actual, std::span<const double> predicted) {
    detail::check_pair(actual, predicted, "r2");
    double mean = 0.0;
    for (double y : actual) mean += y;
    mean /= static_cast<double>(actual.size());
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double e = actual[i] - predicted[i];
        double d = actual[i] - mean;
        sse += e * e;
        sst += d * d;
    }
    if (sst == 0.0) throw DegenerateDataError("r2: actual series is constant");
    return 1.0 - sse / sst;
}

/// Wall-clock and CPU durations of one task invocation.
struct Timing {
    double wall_ms = 0.0;
    double cpu_ms = 0.0;
};

template <class Task>
Timing time_run(Task&& task) {
    auto wall0 = std::chrono::steady_clock::now();
    std::clock_t cpu0 = std::clock();
    std::forward<Task>(task)();
    std::clock_t cpu1 = std::clock();
    auto wall1 = std::chrono::steady_clock::now();
    Timing t;
    t.wall_ms = std::chrono::duration<double, std::milli>(wall1 - wall0).count();
    t.cpu_ms = 1000.0 * static_cast<double>(cpu1 - cpu0) / CLOCKS_PER_SEC;
    return t;
}

/// Accuracy and elapsed-time summary for one model in one prediction mode.
struct EvaluationReport {
    std::size_t n = 0;
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
    double elapsed_train_ms = 0.0;
    double elapsed_predict_ms = 0.0;
};

inline EvaluationReport evaluate(std::span<const double> actual, std::span<const double> predicted,
                                 double train_ms = 0.0, double predict_ms = 0.0) {
    EvaluationReport r;
    r.n = actual.size();
    r.mse = mse(actual, predicted);
    r.rmse = std::sqrt(r.mse);
    r.mae = mae(actual, predicted);
    r.r2 = r2(actual, predicted);
    r.elapsed_train_ms = train_ms;
    r.elapsed_predict_ms = predict_ms;
    return r;
}

}  // namespace eventcast
