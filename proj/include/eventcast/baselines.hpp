#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "eventcast/errors.hpp"
#include "eventcast/time_series.hpp"

namespace eventcast {

struct ArmaOrder {
    int p = 0;  // autoregressive order
    int d = 0;  // differencing order, 0 or 1
    int q = 0;  // moving-average order
};

inline void validate(const ArmaOrder& o) {
    if (o.p < 0 || o.q < 0) throw std::invalid_argument("ARMA orders must be non-negative");
    if (o.d != 0 && o.d != 1) throw std::invalid_argument("differencing order must be 0 or 1");
    if (o.d == 0 && o.p + o.q < 1)
        throw std::invalid_argument("ARMA(0,0) with no differencing is not a model");
}

struct ArmaModel {
    ArmaOrder order;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double intercept = 0.0;
    double noise_variance = 1.0;
    bool stationary = true;  // false when the AR polynomial has explosive roots
};

inline HourlyTrafficSeries difference(const HourlyTrafficSeries& series) {
    if (series.size() < 2) throw InsufficientDataError("difference: need at least 2 samples");
    HourlyTrafficSeries out;
    out.start = series.hour_epoch(1);
    out.values.resize(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i)
        out.values[i - 1] = series.values[i] - series.values[i - 1];
    return out;
}

namespace detail {

/// Solve the least-squares system min ||X b - y|| through the normal
/// equations with partial pivoting; throws on a singular regressor matrix.
inline std::vector<double> solve_least_squares(const std::vector<std::vector<double>>& rows,
                                               const std::vector<double>& y) {
    std::size_t n = rows.size();
    std::size_t k = rows.empty() ? 0 : rows[0].size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) a[i][j] += rows[t][i] * rows[t][j];
            a[i][k] += rows[t][i] * y[t];
        }
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(a[i][i]));
    if (max_diag == 0.0) max_diag = 1.0;

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-10 * max_diag)
            throw DegenerateDataError("least squares: singular regressor matrix");
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> beta(k);
    for (std::size_t i = 0; i < k; ++i) beta[i] = a[i][k] / a[i][i];
    return beta;
}

/// One-step in-sample residuals of the ARMA recursion on z, with pre-sample
/// shocks taken as zero.  residuals[t] = 0 for t < p.
inline std::vector<double> arma_residuals(const ArmaModel& model, const std::vector<double>& z) {
    int p = model.order.p, q = model.order.q;
    std::vector<double> e(z.size(), 0.0);
    for (std::size_t t = static_cast<std::size_t>(p); t < z.size(); ++t) {
        double pred = model.intercept;
        for (int i = 0; i < p; ++i)
            pred += model.ar_coeffs[static_cast<std::size_t>(i)] * z[t - 1 - static_cast<std::size_t>(i)];
        for (int j = 0; j < q; ++j) {
            std::size_t lag = static_cast<std::size_t>(j) + 1;
            if (t >= lag + static_cast<std::size_t>(p)) pred += model.ma_coeffs[static_cast<std::size_t>(j)] * e[t - lag];
        }
        e[t] = z[t] - pred;
    }
    return e;
}

/// Spectral radius of the AR companion matrix by power iteration; a radius
/// above one marks an explosive fit.
inline bool ar_polynomial_stationary(const std::vector<double>& ar) {
    std::size_t p = ar.size();
    if (p == 0) return true;
    std::vector<double> v(p, 0.0), w(p, 0.0);
    v[0] = 1.0;
    double radius = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        w[0] = 0.0;
        for (std::size_t i = 0; i < p; ++i) w[0] += ar[i] * v[i];
        for (std::size_t i = 1; i < p; ++i) w[i] = v[i - 1];
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return true;
        for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / norm;
        radius = norm;
    }
    return radius <= 1.0 + 1e-6;
}

}  // namespace detail

/// Two-stage ARMA estimation on the d-times-differenced series: a long
/// autoregression proxies the unobserved shocks, then AR and MA terms are
/// fitted jointly by least squares.
inline ArmaModel fit_arma(const HourlyTrafficSeries& series, ArmaOrder order) {
    validate(order);
    int p = order.p, q = order.q;
    std::size_t min_len = 10 * static_cast<std::size_t>(p + q + 1);
    if (series.size() < min_len + static_cast<std::size_t>(order.d))
        throw InsufficientDataError("fit_arma: series shorter than 10*(p+q+1) samples");

    std::vector<double> z =
        order.d == 1 ? difference(series).values : series.values;
    std::size_t m = z.size();
    if (m < min_len) throw InsufficientDataError("fit_arma: differenced series too short");

    std::vector<double> shocks;
    std::size_t t0 = static_cast<std::size_t>(p);
    if (q > 0) {
        // Stage 1: long AR to recover shock estimates.
        std::size_t L = std::max<std::size_t>({10, static_cast<std::size_t>(2 * (p + q)),
                                               static_cast<std::size_t>(p),
                                               static_cast<std::size_t>(q)});
        L = std::min(L, m / 4);
        if (L < static_cast<std::size_t>(std::max(p, q)))
            throw InsufficientDataError("fit_arma: too short for the shock proxy stage");
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (std::size_t t = L; t < m; ++t) {
            std::vector<double> row(L + 1, 1.0);
            for (std::size_t i = 0; i < L; ++i) row[i + 1] = z[t - 1 - i];
            rows.push_back(std::move(row));
            y.push_back(z[t]);
        }
        std::vector<double> beta = detail::solve_least_squares(rows, y);
        shocks.assign(m, 0.0);
        for (std::size_t t = L; t < m; ++t) {
            double pred = beta[0];
            for (std::size_t i = 0; i < L; ++i) pred += beta[i + 1] * z[t - 1 - i];
            shocks[t] = z[t] - pred;
        }
        t0 = L + static_cast<std::size_t>(q);
    }

    // Stage 2: joint regression on AR lags and lagged shock estimates.
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t t = std::max(t0, static_cast<std::size_t>(p)); t < m; ++t) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(p + q) + 1);
        row.push_back(1.0);
        for (int i = 0; i < p; ++i) row.push_back(z[t - 1 - static_cast<std::size_t>(i)]);
        for (int j = 0; j < q; ++j) row.push_back(shocks[t - 1 - static_cast<std::size_t>(j)]);
        rows.push_back(std::move(row));
        y.push_back(z[t]);
    }
    std::size_t k = static_cast<std::size_t>(p + q) + 1;
    if (rows.size() <= k) throw InsufficientDataError("fit_arma: not enough regression rows");
    std::vector<double> beta = detail::solve_least_squares(rows, y);

    ArmaModel model;
    model.order = order;
    model.intercept = beta[0];
    model.ar_coeffs.assign(beta.begin() + 1, beta.begin() + 1 + p);
    model.ma_coeffs.assign(beta.begin() + 1 + p, beta.end());

    std::vector<double> resid = detail::arma_residuals(model, z);
    double sse = 0.0;
    std::size_t n_used = 0;
    for (std::size_t t = static_cast<std::size_t>(p); t < m; ++t) {
        sse += resid[t] * resid[t];
        ++n_used;
    }
    model.noise_variance = n_used > k ? sse / static_cast<double>(n_used - k)
                                      : std::numeric_limits<double>::quiet_NaN();
    model.stationary = detail::ar_polynomial_stationary(model.ar_coeffs);
    return model;
}

/// Exhaustive (p, q) grid under the Gaussian BIC n*ln(sse/n) + k*ln(n) with
/// k = p + q + 1.  Cells whose fit fails are skipped.
inline ArmaOrder select_order_bic(const HourlyTrafficSeries& series, int p_max, int q_max, int d) {
    if (p_max < 0 || q_max < 0 || p_max > 5 || q_max > 5)
        throw std::invalid_argument("select_order_bic: grid bounds must lie in 0..5");
    std::vector<double> z = d == 1 ? difference(series).values : series.values;
    std::size_t m = z.size();
    std::size_t t_eval = static_cast<std::size_t>(std::max(p_max, q_max));

    bool found = false;
    ArmaOrder best;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            ArmaOrder order{p, d, q};
            if (d == 0 && p + q == 0) continue;
            try {
                ArmaModel model = fit_arma(series, order);
                std::vector<double> resid = detail::arma_residuals(model, z);
                double sse = 0.0;
                std::size_t n_eval = 0;
                for (std::size_t t = t_eval; t < m; ++t) {
                    sse += resid[t] * resid[t];
                    ++n_eval;
                }
                if (n_eval == 0) continue;
                double n = static_cast<double>(n_eval);
                double bic = n * std::log(std::max(sse, 1e-300) / n) +
                             static_cast<double>(p + q + 1) * std::log(n);
                if (bic < best_bic) {
                    best_bic = bic;
                    best = order;
                    found = true;
                }
            } catch (const std::exception&) {
                // fit failure disqualifies the cell
            }
        }
    }
    if (!found) throw SelectionError("select_order_bic: every grid cell failed to fit");
    return best;
}

/// Iterated one-step recursion with future shocks set to zero; an order-1
/// difference is re-integrated from the last observed level.
inline HourlyTrafficSeries forecast(const ArmaModel& model, const HourlyTrafficSeries& history,
                                    int steps) {
    if (steps < 1) throw std::invalid_argument("forecast: steps must be positive");
    if (history.size() < static_cast<std::size_t>(model.order.p + model.order.d))
        throw InsufficientDataError("forecast: history shorter than p + d");

    std::vector<double> z =
        model.order.d == 1 ? difference(history).values : history.values;
    std::vector<double> e = detail::arma_residuals(model, z);
    std::size_t m = z.size();
    int p = model.order.p, q = model.order.q;

    for (int h = 0; h < steps; ++h) {
        std::size_t t = m + static_cast<std::size_t>(h);
        double pred = model.intercept;
        for (int i = 0; i < p; ++i) {
            std::size_t lag = static_cast<std::size_t>(i) + 1;
            pred += model.ar_coeffs[static_cast<std::size_t>(i)] * (t >= lag ? z[t - lag] : 0.0);
        }
        for (int j = 0; j < q; ++j) {
            std::size_t lag = static_cast<std::size_t>(j) + 1;
            pred += model.ma_coeffs[static_cast<std::size_t>(j)] * (t >= lag ? e[t - lag] : 0.0);
        }
        z.push_back(pred);
        e.push_back(0.0);
    }

    HourlyTrafficSeries out;
    out.start = history.end_epoch();
    out.values.resize(static_cast<std::size_t>(steps));
    if (model.order.d == 1) {
        double level = history.values.back();
        for (int h = 0; h < steps; ++h) {
            level += z[m + static_cast<std::size_t>(h)];
            out.values[static_cast<std::size_t>(h)] = level;
        }
    } else {
        for (int h = 0; h < steps; ++h)
            out.values[static_cast<std::size_t>(h)] = z[m + static_cast<std::size_t>(h)];
    }
    return out;
}

/// Rolling one-step-ahead predictions over an observed span: prediction[i]
/// is the model's forecast of full[i] given everything before it, with the
/// parameters held fixed.  The first p + d entries have no complete lag
/// window and repeat the observation.
inline std::vector<double> one_step_predictions(const ArmaModel& model,
                                                const HourlyTrafficSeries& full) {
    std::vector<double> z = model.order.d == 1 ? difference(full).values : full.values;
    std::vector<double> e = detail::arma_residuals(model, z);
    std::vector<double> pred(full.size());
    std::size_t warmup = static_cast<std::size_t>(model.order.p + model.order.d);
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (i < warmup) {
            pred[i] = full.values[i];
            continue;
        }
        std::size_t t = i - static_cast<std::size_t>(model.order.d);
        double z_hat = z[t] - e[t];
        pred[i] = model.order.d == 1 ? full.values[i - 1] + z_hat : z_hat;
    }
    return pred;
}

/// Repeat the most recent full cycle of the history.
inline HourlyTrafficSeries seasonal_naive(const HourlyTrafficSeries& history, int steps,
                                          int period) {
    if (steps < 1 || period < 1)
        throw std::invalid_argument("seasonal_naive: steps and period must be positive");
    if (history.size() < static_cast<std::size_t>(period))
        throw InsufficientDataError("seasonal_naive: history shorter than one period");
    HourlyTrafficSeries out;
    out.start = history.end_epoch();
    out.values.resize(static_cast<std::size_t>(steps));
    std::size_t base = history.size() - static_cast<std::size_t>(period);
    for (int h = 0; h < steps; ++h)
        out.values[static_cast<std::size_t>(h)] =
            history.values[base + static_cast<std::size_t>(h % period)];
    return out;
}

}  // namespace eventcast
