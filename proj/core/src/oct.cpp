#include "gpeoct/oct.hpp"

#include <cmath>
#include <optional>

namespace gpeoct {

ControlTrajectory ControlTrajectory::linear(int n_nodes) {
    std::vector<double> v(static_cast<size_t>(n_nodes));
    for (int m = 0; m < n_nodes; ++m) v[static_cast<size_t>(m)] = double(m) / (n_nodes - 1);
    return ControlTrajectory(std::move(v));
}

ControlTrajectory ControlTrajectory::square_root(int n_nodes) {
    std::vector<double> v(static_cast<size_t>(n_nodes));
    for (int m = 0; m < n_nodes; ++m)
        v[static_cast<size_t>(m)] = std::sqrt(double(m) / (n_nodes - 1));
    return ControlTrajectory(std::move(v));
}

PropagationSpec OctProblem::propagation_spec(const ControlTrajectory& control) const {
    PropagationSpec spec;
    spec.grid = grid;
    spec.potential = potential;
    spec.control = control.values;
    spec.g = g;
    spec.scheme = scheme;
    spec.offset_splitting = offset_splitting;
    return spec;
}

namespace {

void check_control(const OctProblem& problem, const ControlTrajectory& control) {
    if (control.n_nodes() != problem.grid.n_nodes())
        throw DimensionError("control trajectory length must be n_t + 1");
    if (control.values.front() != 0.0 || control.values.back() != 1.0)
        throw ContractViolation("control endpoints must be pinned to 0 and 1");
}

double penalty_term(const Grid1D& grid, const std::vector<double>& lam, double gamma) {
    const double dt = grid.dt();
    double acc = 0.0;
    for (int m = 0; m < grid.n_t; ++m) {
        const double rate = (lam[static_cast<size_t>(m + 1)] - lam[static_cast<size_t>(m)]) / dt;
        acc += rate * rate * dt;
    }
    return 0.5 * gamma * acc;
}

CostBreakdown cost_with_trajectory(const OctProblem& problem,
                                   const ControlTrajectory& control,
                                   TrajectoryStore* traj_out) {
    check_control(problem, control);
    const PropagationSpec spec = problem.propagation_spec(control);
    TrajectoryStore traj = propagate(spec, problem.initial_state);
    Wave1D final_state(problem.grid, traj.at(problem.grid.n_t), problem.grid.n_t);
    CostBreakdown parts;
    parts.infidelity = infidelity(final_state, problem.desired_state);
    parts.penalty = penalty_term(problem.grid, control.values, problem.gamma);
    // further cost terms (an energy penalty, intermediate-state targets, a
    // time-dependent weight) would sum in here, with their adjoint sources
    // added in gradient_from_trajectory
    parts.total = parts.infidelity + parts.penalty;
    if (traj_out) *traj_out = std::move(traj);
    return parts;
}

std::vector<double> gradient_from_trajectory(const OctProblem& problem,
                                             const ControlTrajectory& control,
                                             const TrajectoryStore& forward) {
    const Grid1D& grid = problem.grid;
    const int n_t = grid.n_t;
    const double dt = grid.dt();
    const PropagationSpec spec = problem.propagation_spec(control);

    Wave1D final_state(grid, forward.at(n_t), n_t);
    const Wave1D p_terminal = adjoint_terminal(final_state, problem.desired_state);

    std::vector<double> g = adjoint_fidelity_gradient(spec, forward, p_terminal);
    for (int m = 1; m < n_t; ++m) {
        const double lam_dd = (control.values[static_cast<size_t>(m + 1)] - 2.0 * control.values[static_cast<size_t>(m)] +
                               control.values[static_cast<size_t>(m - 1)]) /
                              (dt * dt);
        g[static_cast<size_t>(m)] -= problem.gamma * lam_dd;
    }
    g.front() = 0.0;
    g.back() = 0.0;
    return g;
}

} // namespace

CostBreakdown evaluate_cost(const OctProblem& problem, const ControlTrajectory& control) {
    return cost_with_trajectory(problem, control, nullptr);
}

std::vector<double> compute_gradient(const OctProblem& problem,
                                     const ControlTrajectory& control) {
    check_control(problem, control);
    const PropagationSpec spec = problem.propagation_spec(control);
    const TrajectoryStore forward = propagate(spec, problem.initial_state);
    return gradient_from_trajectory(problem, control, forward);
}

OctReport optimize(const OctProblem& problem, const ControlTrajectory& initial) {
    check_control(problem, initial);
    const Grid1D& grid = problem.grid;
    const int n_nodes = grid.n_nodes();
    const double dt = grid.dt();

    // The optimizer works on the interior nodes; endpoints stay pinned.
    auto assemble = [&](const std::vector<double>& x) {
        ControlTrajectory c;
        c.values.resize(static_cast<size_t>(n_nodes));
        c.values.front() = 0.0;
        c.values.back() = 1.0;
        for (int m = 1; m < n_nodes - 1; ++m) c.values[static_cast<size_t>(m)] = x[static_cast<size_t>(m - 1)];
        return c;
    };

    // Cache the forward trajectory of the most recent cost evaluation so the
    // gradient of an accepted iterate does not re-run the forward solve.
    std::optional<std::vector<double>> cached_x;
    TrajectoryStore cached_traj;

    CostFn cost = [&](const std::vector<double>& x) {
        const ControlTrajectory c = assemble(x);
        TrajectoryStore traj;
        const CostBreakdown parts = cost_with_trajectory(problem, c, &traj);
        cached_x = x;
        cached_traj = std::move(traj);
        return CostParts{parts.total, parts.infidelity, parts.penalty};
    };

    GradientFn gradient = [&](const std::vector<double>& x) {
        const ControlTrajectory c = assemble(x);
        std::vector<double> density;
        if (cached_x && *cached_x == x) {
            density = gradient_from_trajectory(problem, c, cached_traj);
        } else {
            const PropagationSpec spec = problem.propagation_spec(c);
            const TrajectoryStore forward = propagate(spec, problem.initial_state);
            density = gradient_from_trajectory(problem, c, forward);
        }
        // nodal derivative of the discrete cost
        std::vector<double> nodal(static_cast<size_t>(n_nodes - 2));
        for (int m = 1; m < n_nodes - 1; ++m) nodal[static_cast<size_t>(m - 1)] = density[static_cast<size_t>(m)] * dt;
        return nodal;
    };

    MinimizeOptions opts;
    opts.method = problem.optimizer;
    opts.max_iterations = problem.max_iterations;
    opts.gradient_tolerance = problem.gradient_tolerance;
    opts.cost_target = problem.cost_target;
    opts.report_scale = 1.0 / dt;

    std::vector<double> x0(static_cast<size_t>(n_nodes - 2));
    for (int m = 1; m < n_nodes - 1; ++m) x0[static_cast<size_t>(m - 1)] = initial.values[static_cast<size_t>(m)];

    MinimizeResult res = minimize(cost, gradient, std::move(x0), opts);

    OctReport report;
    const ControlTrajectory final_control = assemble(res.x);
    report.control = final_control.values;
    report.history = std::move(res.history);
    report.final_cost = res.final_cost;
    report.final_infidelity = res.final_infidelity;
    report.final_penalty = res.final_penalty;
    report.gradient_max_norm = res.gradient_max_norm;
    report.iterations = res.iterations;
    report.exit_reason = res.exit_reason;
    report.control_left_unit_interval = final_control.leaves_unit_interval();
    return report;
}

// --- 2D variant -----------------------------------------------------------

PropagationSpec2D OctProblem2D::propagation_spec(const ControlTrajectory& control) const {
    PropagationSpec2D spec;
    spec.grid = grid;
    spec.potential = potential;
    spec.control = control.values;
    spec.g = g;
    spec.offset_splitting = offset_splitting;
    return spec;
}

namespace {

void check_control_2d(const OctProblem2D& problem, const ControlTrajectory& control) {
    if (control.n_nodes() != problem.grid.n_nodes())
        throw DimensionError("control trajectory length must be n_t + 1");
    if (control.values.front() != 0.0 || control.values.back() != 1.0)
        throw ContractViolation("control endpoints must be pinned to 0 and 1");
}

double penalty_term_2d(const Grid2D& grid, const std::vector<double>& lam, double gamma) {
    const double dt = grid.dt();
    double acc = 0.0;
    for (int m = 0; m < grid.n_t; ++m) {
        const double rate = (lam[static_cast<size_t>(m + 1)] - lam[static_cast<size_t>(m)]) / dt;
        acc += rate * rate * dt;
    }
    return 0.5 * gamma * acc;
}

CostBreakdown cost_with_trajectory_2d(const OctProblem2D& problem,
                                      const ControlTrajectory& control,
                                      TrajectoryStore* traj_out) {
    check_control_2d(problem, control);
    const PropagationSpec2D spec = problem.propagation_spec(control);
    TrajectoryStore traj = propagate_split_operator_2d(spec, problem.initial_state);
    Wave2D final_state(problem.grid, traj.at(problem.grid.n_t), problem.grid.n_t);
    CostBreakdown parts;
    parts.infidelity = infidelity(final_state, problem.desired_state);
    parts.penalty = penalty_term_2d(problem.grid, control.values, problem.gamma);
    parts.total = parts.infidelity + parts.penalty;
    if (traj_out) *traj_out = std::move(traj);
    return parts;
}

std::vector<double> gradient_from_trajectory_2d(const OctProblem2D& problem,
                                                const ControlTrajectory& control,
                                                const TrajectoryStore& forward) {
    const Grid2D& grid = problem.grid;
    const double dt = grid.dt();
    const PropagationSpec2D spec = problem.propagation_spec(control);
    Wave2D final_state(grid, forward.at(grid.n_t), grid.n_t);
    const Wave2D p_terminal = adjoint_terminal(final_state, problem.desired_state);
    std::vector<double> g = adjoint_fidelity_gradient_2d(spec, forward, p_terminal);
    for (int m = 1; m < grid.n_t; ++m) {
        const double lam_dd = (control.values[static_cast<size_t>(m + 1)] - 2.0 * control.values[static_cast<size_t>(m)] +
                               control.values[static_cast<size_t>(m - 1)]) /
                              (dt * dt);
        g[static_cast<size_t>(m)] -= problem.gamma * lam_dd;
    }
    g.front() = 0.0;
    g.back() = 0.0;
    return g;
}

} // namespace

CostBreakdown evaluate_cost_2d(const OctProblem2D& problem,
                               const ControlTrajectory& control) {
    return cost_with_trajectory_2d(problem, control, nullptr);
}

std::vector<double> compute_gradient_2d(const OctProblem2D& problem,
                                        const ControlTrajectory& control) {
    check_control_2d(problem, control);
    const PropagationSpec2D spec = problem.propagation_spec(control);
    const TrajectoryStore forward = propagate_split_operator_2d(spec, problem.initial_state);
    return gradient_from_trajectory_2d(problem, control, forward);
}

OctReport optimize_2d(const OctProblem2D& problem, const ControlTrajectory& initial) {
    check_control_2d(problem, initial);
    const int n_nodes = problem.grid.n_nodes();
    const double dt = problem.grid.dt();

    auto assemble = [&](const std::vector<double>& x) {
        ControlTrajectory c;
        c.values.resize(static_cast<size_t>(n_nodes));
        c.values.front() = 0.0;
        c.values.back() = 1.0;
        for (int m = 1; m < n_nodes - 1; ++m) c.values[static_cast<size_t>(m)] = x[static_cast<size_t>(m - 1)];
        return c;
    };

    std::optional<std::vector<double>> cached_x;
    TrajectoryStore cached_traj;

    CostFn cost = [&](const std::vector<double>& x) {
        const ControlTrajectory c = assemble(x);
        TrajectoryStore traj;
        const CostBreakdown parts = cost_with_trajectory_2d(problem, c, &traj);
        cached_x = x;
        cached_traj = std::move(traj);
        return CostParts{parts.total, parts.infidelity, parts.penalty};
    };
    GradientFn gradient = [&](const std::vector<double>& x) {
        const ControlTrajectory c = assemble(x);
        std::vector<double> density;
        if (cached_x && *cached_x == x) {
            density = gradient_from_trajectory_2d(problem, c, cached_traj);
        } else {
            const PropagationSpec2D spec = problem.propagation_spec(c);
            const TrajectoryStore forward =
                propagate_split_operator_2d(spec, problem.initial_state);
            density = gradient_from_trajectory_2d(problem, c, forward);
        }
        std::vector<double> nodal(static_cast<size_t>(n_nodes - 2));
        for (int m = 1; m < n_nodes - 1; ++m) nodal[static_cast<size_t>(m - 1)] = density[static_cast<size_t>(m)] * dt;
        return nodal;
    };

    MinimizeOptions opts;
    opts.method = problem.optimizer;
    opts.max_iterations = problem.max_iterations;
    opts.gradient_tolerance = problem.gradient_tolerance;
    opts.cost_target = problem.cost_target;
    opts.report_scale = 1.0 / dt;

    std::vector<double> x0(static_cast<size_t>(n_nodes - 2));
    for (int m = 1; m < n_nodes - 1; ++m) x0[static_cast<size_t>(m - 1)] = initial.values[static_cast<size_t>(m)];

    MinimizeResult res = minimize(cost, gradient, std::move(x0), opts);

    OctReport report;
    const ControlTrajectory final_control = assemble(res.x);
    report.control = final_control.values;
    report.history = std::move(res.history);
    report.final_cost = res.final_cost;
    report.final_infidelity = res.final_infidelity;
    report.final_penalty = res.final_penalty;
    report.gradient_max_norm = res.gradient_max_norm;
    report.iterations = res.iterations;
    report.exit_reason = res.exit_reason;
    report.control_left_unit_interval = final_control.leaves_unit_interval();
    return report;
}

} // namespace gpeoct
