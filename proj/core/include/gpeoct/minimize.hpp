#pragma once

#include <functional>
#include <string>
#include <vector>

namespace gpeoct {

enum class Optimizer { gradient_descent, bfgs };

enum class ExitReason {
    gradient_tolerance,
    cost_target,
    max_iterations,
    line_search_stagnation,
};

std::string to_string(ExitReason r);

struct IterationRecord {
    int iteration = 0;
    double cost = 0.0;
    double infidelity = 0.0;
    double penalty = 0.0;
    double gradient_max_norm = 0.0; // in reported (density) scaling
};

struct MinimizeOptions {
    Optimizer method = Optimizer::bfgs;
    int max_iterations = 500;
    double gradient_tolerance = 1e-6; // on the reported gradient max-norm
    double cost_target = 1e-4;
    int lbfgs_memory = 20;
    double armijo_c1 = 1e-4;
    double backtrack_factor = 0.5;
    int max_backtracks = 40;
    int max_expansions = 50;
    double initial_step = 1.0;
    /// Multiplies the raw gradient for reporting and stopping (the OCT
    /// modules report the continuous gradient density, the optimizer works
    /// with nodal derivatives).
    double report_scale = 1.0;
};

struct MinimizeResult {
    std::vector<double> x;
    std::vector<IterationRecord> history;
    double final_cost = 0.0;
    double final_infidelity = 0.0;
    double final_penalty = 0.0;
    double gradient_max_norm = 0.0;
    int iterations = 0;
    ExitReason exit_reason = ExitReason::max_iterations;
};

struct CostParts {
    double total = 0.0;
    double infidelity = 0.0;
    double penalty = 0.0;
};

using CostFn = std::function<CostParts(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Gradient descent or limited-memory BFGS over a free vector, with Armijo
/// backtracking (descent is monotone by construction). BFGS pairs failing
/// the curvature condition are dropped, resetting the memory.
MinimizeResult minimize(const CostFn& cost, const GradientFn& gradient,
                        std::vector<double> x0, const MinimizeOptions& opts);

} // namespace gpeoct
