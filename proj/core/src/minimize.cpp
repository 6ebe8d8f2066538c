#include "gpeoct/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace gpeoct {

std::string to_string(ExitReason r) {
    switch (r) {
        case ExitReason::gradient_tolerance: return "gradient_tolerance";
        case ExitReason::cost_target: return "cost_target";
        case ExitReason::max_iterations: return "max_iterations";
        case ExitReason::line_search_stagnation: return "line_search_stagnation";
    }
    return "unknown";
}

namespace {

double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct LbfgsMemory {
    std::deque<std::vector<double>> s, y;
    std::deque<double> rho;
    int capacity;

    explicit LbfgsMemory(int cap) : capacity(cap) {}

    void push(std::vector<double> si, std::vector<double> yi) {
        const double sy = dot(si, yi);
        const double sn = std::sqrt(dot(si, si)), yn = std::sqrt(dot(yi, yi));
        if (!(sy > 1e-12 * sn * yn)) {
            // curvature condition failed; restart the approximation
            s.clear();
            y.clear();
            rho.clear();
            return;
        }
        s.push_back(std::move(si));
        y.push_back(std::move(yi));
        rho.push_back(1.0 / sy);
        if (static_cast<int>(s.size()) > capacity) {
            s.pop_front();
            y.pop_front();
            rho.pop_front();
        }
    }

    // Two-loop recursion: d = -H grad.
    std::vector<double> direction(const std::vector<double>& grad) const {
        std::vector<double> q = grad;
        const int m = static_cast<int>(s.size());
        std::vector<double> alpha(static_cast<size_t>(m));
        for (int i = m - 1; i >= 0; --i) {
            alpha[static_cast<size_t>(i)] = rho[static_cast<size_t>(i)] * dot(s[static_cast<size_t>(i)], q);
            for (size_t j = 0; j < q.size(); ++j) q[j] -= alpha[static_cast<size_t>(i)] * y[static_cast<size_t>(i)][j];
        }
        if (m > 0) {
            const double gamma = dot(s.back(), y.back()) / dot(y.back(), y.back());
            for (double& v : q) v *= gamma;
        }
        for (int i = 0; i < m; ++i) {
            const double beta = rho[static_cast<size_t>(i)] * dot(y[static_cast<size_t>(i)], q);
            for (size_t j = 0; j < q.size(); ++j)
                q[j] += (alpha[static_cast<size_t>(i)] - beta) * s[static_cast<size_t>(i)][j];
        }
        for (double& v : q) v = -v;
        return q;
    }
};

} // namespace

MinimizeResult minimize(const CostFn& cost, const GradientFn& gradient,
                        std::vector<double> x0, const MinimizeOptions& opts) {
    MinimizeResult res;
    std::vector<double> x = std::move(x0);

    CostParts parts = cost(x);
    std::vector<double> grad = gradient(x);
    double grad_report = max_norm(grad) * opts.report_scale;
    res.history.push_back({0, parts.total, parts.infidelity, parts.penalty, grad_report});

    LbfgsMemory memory(opts.lbfgs_memory);
    ExitReason reason = ExitReason::max_iterations;
    int iter = 0;

    while (true) {
        if (grad_report < opts.gradient_tolerance) {
            reason = ExitReason::gradient_tolerance;
            break;
        }
        if (parts.total < opts.cost_target) {
            reason = ExitReason::cost_target;
            break;
        }
        if (iter >= opts.max_iterations) {
            reason = ExitReason::max_iterations;
            break;
        }

        std::vector<double> dir = opts.method == Optimizer::bfgs
                                      ? memory.direction(grad)
                                      : [&] {
                                            std::vector<double> d = grad;
                                            for (double& v : d) v = -v;
                                            return d;
                                        }();
        double slope = dot(grad, dir);
        if (!(slope < 0.0)) {
            // not a descent direction; fall back to steepest descent
            dir = grad;
            for (double& v : dir) v = -v;
            slope = dot(grad, dir);
        }

        double step = opts.initial_step;
        bool accepted = false;
        bool first_trial_ok = false;
        std::vector<double> x_trial(x.size());
        CostParts trial;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            for (size_t i = 0; i < x.size(); ++i) x_trial[i] = x[i] + step * dir[i];
            trial = cost(x_trial);
            if (trial.total <= parts.total + opts.armijo_c1 * step * slope) {
                accepted = true;
                first_trial_ok = bt == 0;
                break;
            }
            step *= opts.backtrack_factor;
        }
        if (!accepted) {
            reason = ExitReason::line_search_stagnation;
            break;
        }
        if (first_trial_ok) {
            // The unit step is far inside the sufficient-decrease region when
            // gradients are small; expand while the Armijo bound keeps holding
            // and the cost keeps dropping, so progress is not capped by the
            // initial step.
            std::vector<double> x_wide(x.size());
            for (int ex = 0; ex < opts.max_expansions; ++ex) {
                const double wide = 2.0 * step;
                for (size_t i = 0; i < x.size(); ++i) x_wide[i] = x[i] + wide * dir[i];
                const CostParts probe = cost(x_wide);
                if (probe.total <= parts.total + opts.armijo_c1 * wide * slope &&
                    probe.total < trial.total) {
                    step = wide;
                    trial = probe;
                    x_trial.swap(x_wide);
                } else {
                    break;
                }
            }
        }

        std::vector<double> grad_new = gradient(x_trial);
        if (opts.method == Optimizer::bfgs) {
            std::vector<double> s(x.size()), yv(x.size());
            for (size_t i = 0; i < x.size(); ++i) {
                s[i] = x_trial[i] - x[i];
                yv[i] = grad_new[i] - grad[i];
            }
            memory.push(std::move(s), std::move(yv));
        }

        x = x_trial;
        parts = trial;
        grad = std::move(grad_new);
        grad_report = max_norm(grad) * opts.report_scale;
        ++iter;
        res.history.push_back({iter, parts.total, parts.infidelity, parts.penalty, grad_report});
    }

    res.x = std::move(x);
    res.final_cost = parts.total;
    res.final_infidelity = parts.infidelity;
    res.final_penalty = parts.penalty;
    res.gradient_max_norm = grad_report;
    res.iterations = iter;
    res.exit_reason = reason;
    return res;
}

} // namespace gpeoct
