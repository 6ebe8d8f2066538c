#pragma once

#include <vector>

#include "gpeoct/minimize.hpp"
#include "gpeoct/propagation.hpp"

namespace gpeoct {

/// Scalar control lambda(t) discretized at the n_t + 1 time nodes, pinned to
/// lambda(0) = 0 and lambda(T) = 1. Interior values are unconstrained; runs
/// whose optimized control leaves [0, 1] are flagged in the report.
struct ControlTrajectory {
    std::vector<double> values;

    ControlTrajectory() = default;
    explicit ControlTrajectory(std::vector<double> v) : values(std::move(v)) {
        pin_endpoints();
    }

    static ControlTrajectory linear(int n_nodes);
    static ControlTrajectory square_root(int n_nodes);

    void pin_endpoints() {
        if (values.size() < 2)
            throw DimensionError("control trajectory needs at least 2 nodes");
        values.front() = 0.0;
        values.back() = 1.0;
    }

    int n_nodes() const { return static_cast<int>(values.size()); }

    bool leaves_unit_interval(double slack = 1e-12) const {
        for (double v : values)
            if (v < -slack || v > 1.0 + slack) return true;
        return false;
    }
};

struct OctProblem {
    Grid1D grid;
    const Potential1D* potential = nullptr;
    double g = 0.0;
    Scheme scheme = Scheme::crank_nicolson_1d;
    bool offset_splitting = false;

    Wave1D initial_state;
    Wave1D desired_state;

    double gamma = 1e-3;
    Optimizer optimizer = Optimizer::bfgs;
    int max_iterations = 500;
    double gradient_tolerance = 1e-6;
    double cost_target = 1e-4;

    PropagationSpec propagation_spec(const ControlTrajectory& control) const;
};

struct CostBreakdown {
    double total = 0.0;
    double infidelity = 0.0;
    double penalty = 0.0;
};

/// J = 1/2 (1 - |<psi_d|psi(T)>|^2) + (gamma/2) integral lambda_dot^2 dt,
/// with lambda_dot by forward differences and the midpoint rule over the
/// n_t intervals.
CostBreakdown evaluate_cost(const OctProblem& problem, const ControlTrajectory& control);

/// Adjoint-based gradient density over the time nodes: for interior m,
///   g_m = -gamma lambda_ddot_m - Re <psi | dV/dlambda | p> |_m,
/// with the second difference stencil for lambda_ddot and the overlap term
/// sampled through the propagation stages adjacent to node m, so the result
/// is the exact derivative of the discrete cost. Endpoints are pinned and
/// return 0. The nodal derivative is g_m * dt.
std::vector<double> compute_gradient(const OctProblem& problem,
                                     const ControlTrajectory& control);

struct OctReport {
    std::vector<double> control; // optimized control values
    std::vector<IterationRecord> history;
    double final_cost = 0.0;
    double final_infidelity = 0.0;
    double final_penalty = 0.0;
    double gradient_max_norm = 0.0;
    int iterations = 0;
    ExitReason exit_reason = ExitReason::max_iterations;
    bool control_left_unit_interval = false;
};

/// Iterates compute_gradient with an Armijo line search (plain gradient
/// descent or limited-memory BFGS over the interior nodes) until the
/// gradient max-norm, the cost target or the iteration cap is reached.
OctReport optimize(const OctProblem& problem, const ControlTrajectory& initial);

/// Same loop on a 2D grid with the split-operator propagator.
struct OctProblem2D {
    Grid2D grid;
    const Potential2D* potential = nullptr;
    double g = 0.0;
    bool offset_splitting = false;

    Wave2D initial_state;
    Wave2D desired_state;

    double gamma = 1e-3;
    Optimizer optimizer = Optimizer::bfgs;
    int max_iterations = 500;
    double gradient_tolerance = 1e-6;
    double cost_target = 1e-4;

    PropagationSpec2D propagation_spec(const ControlTrajectory& control) const;
};

CostBreakdown evaluate_cost_2d(const OctProblem2D& problem,
                               const ControlTrajectory& control);
std::vector<double> compute_gradient_2d(const OctProblem2D& problem,
                                        const ControlTrajectory& control);
OctReport optimize_2d(const OctProblem2D& problem, const ControlTrajectory& initial);

} // namespace gpeoct
