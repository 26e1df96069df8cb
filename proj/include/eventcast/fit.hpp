#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace eventcast {

/// Hyperparameters shared by the gradient-descent fits.
struct FitConfig {
    int max_iterations = 50000;
    double learning_rate = 0.05;    // base step size on the normalized objective
    double convergence_tol = 1e-8;  // relative objective improvement per check window
    int restarts = 2;
    bool record_trace = false;  // capture the accepted-objective sequence
};

inline void validate(const FitConfig& c) {
    if (c.max_iterations <= 0 || c.learning_rate <= 0.0 || c.convergence_tol <= 0.0 ||
        c.restarts <= 0)
        throw std::invalid_argument("fit config fields must all be positive");
}

struct DescentResult {
    std::vector<double> params;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;  // accepted objectives, when recorded
};

/// Projected gradient descent with step rejection: a step that would raise
/// the objective is discarded and the working step halved; accepted steps
/// grow it back.  The accepted-objective sequence is therefore
/// non-increasing.  Convergence is declared when a window of accepted steps
/// improves the objective by less than convergence_tol relative, or the
/// gradient vanishes, or the step size collapses to the numeric floor.
///
/// objective: double(params); gradient: gradient(params, out_grad);
/// project: clamps params into their feasible box in place; refine: an
/// optional exact improvement applied after projection (e.g. the closed-form
/// optimum of a parameter the model is linear in).
template <class Objective, class Gradient, class Project, class Refine>
DescentResult gradient_descent(std::vector<double> init, Objective&& objective,
                               Gradient&& gradient, Project&& project, Refine&& refine,
                               const FitConfig& config) {
    validate(config);
    constexpr int kCheckWindow = 100;  // accepted steps between convergence checks

    std::vector<double> params = std::move(init);
    project(params);
    refine(params);

    const std::size_t n = params.size();
    std::vector<double> grad(n, 0.0);
    std::vector<double> trial(n, 0.0);

    DescentResult result;
    double f = objective(params);
    if (config.record_trace) result.trace.push_back(f);

    double step = config.learning_rate;
    double window_anchor = f;
    int accepted = 0;
    int it = 0;
    for (; it < config.max_iterations; ++it) {
        gradient(params, grad);
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (gnorm2 == 0.0) {
            result.converged = true;
            break;
        }

        for (std::size_t i = 0; i < n; ++i) trial[i] = params[i] - step * grad[i];
        project(trial);
        refine(trial);
        double f_trial = objective(trial);

        if (std::isfinite(f_trial) && f_trial <= f) {
            params.swap(trial);
            f = f_trial;
            if (config.record_trace) result.trace.push_back(f);
            step *= 1.25;
            if (++accepted % kCheckWindow == 0) {
                if (window_anchor - f <= config.convergence_tol * std::max(window_anchor, 1e-300)) {
                    result.converged = true;
                    ++it;
                    break;
                }
                window_anchor = f;
            }
        } else {
            step *= 0.5;
            if (step < config.learning_rate * 1e-16) {
                // No descending step at working precision: numeric floor.
                result.converged = true;
                ++it;
                break;
            }
        }
    }

    result.params = std::move(params);
    result.objective = f;
    result.iterations = it;
    return result;
}

template <class Objective, class Gradient, class Project>
DescentResult gradient_descent(std::vector<double> init, Objective&& objective,
                               Gradient&& gradient, Project&& project, const FitConfig& config) {
    return gradient_descent(std::move(init), std::forward<Objective>(objective),
                            std::forward<Gradient>(gradient), std::forward<Project>(project),
                            [](std::span<double>) {}, config);
}

}  // namespace eventcast
