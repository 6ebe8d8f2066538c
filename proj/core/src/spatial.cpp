#include "gpeoct/spatial.hpp"

#include <cmath>

#include "gpeoct/fft.hpp"

namespace gpeoct {

SpatialControl SpatialControl::linear(int n_columns) {
    std::vector<double> v(static_cast<size_t>(n_columns));
    for (int i = 0; i < n_columns; ++i) v[static_cast<size_t>(i)] = double(i) / (n_columns - 1);
    return SpatialControl(std::move(v));
}

std::vector<int> SpatialOctProblem::region_columns() const {
    std::vector<int> cols;
    for (int i = 0; i < grid.n_x; ++i) {
        const double x = grid.x(i);
        if (x >= region_min && x <= region_max) cols.push_back(i);
    }
    if (cols.size() < 3)
        throw DomainError("scattering region must cover at least 3 grid columns");
    return cols;
}

namespace {

void check_control(const SpatialControl& control, const std::vector<int>& cols) {
    if (control.n_columns() != static_cast<int>(cols.size()))
        throw DimensionError("spatial control length must match the region columns");
    if (control.values.front() != 0.0 || control.values.back() != 1.0)
        throw ContractViolation("spatial control endpoints must be pinned to 0 and 1");
}

/// Per-column lambda over the whole grid: clamped upstream/downstream,
/// control values inside the region.
std::vector<double> column_lambda(const SpatialOctProblem& problem,
                                  const SpatialControl& control,
                                  const std::vector<int>& cols) {
    std::vector<double> lam(static_cast<size_t>(problem.grid.n_x));
    for (int i = 0; i < problem.grid.n_x; ++i)
        lam[static_cast<size_t>(i)] = problem.grid.x(i) < problem.region_min ? 0.0 : 1.0;
    for (size_t k = 0; k < cols.size(); ++k)
        lam[static_cast<size_t>(cols[k])] = control.values[k];
    return lam;
}

struct StaticField2D {
    const Grid2D& grid;
    Fft fft;
    std::vector<cplx> kin_forward;
    std::vector<cplx> half_phase; // exp(-i dt/2 V), static in time

    StaticField2D(const SpatialOctProblem& problem, const std::vector<double>& lam)
        : grid(problem.grid), fft(grid.n_x, grid.n_y) {
        const double dt = grid.dt();
        const auto kx = kinetic_wavenumbers(grid.n_x, grid.length_x());
        const auto ky = kinetic_wavenumbers(grid.n_y, grid.length_y());
        kin_forward.resize(static_cast<size_t>(grid.n_points()));
        for (int i = 0; i < grid.n_x; ++i)
            for (int j = 0; j < grid.n_y; ++j)
                kin_forward[static_cast<size_t>(grid.index(i, j))] = std::exp(
                    cplx(0.0, -0.5 * dt * (kx[i] * kx[i] + ky[j] * ky[j])));
        half_phase.resize(static_cast<size_t>(grid.n_points()));
        for (int i = 0; i < grid.n_x; ++i)
            for (int j = 0; j < grid.n_y; ++j) {
                const double v =
                    problem.transverse->value_extended(grid.y(j), lam[static_cast<size_t>(i)]);
                half_phase[static_cast<size_t>(grid.index(i, j))] = std::exp(cplx(0.0, -0.5 * dt * v));
            }
    }

    void advance(std::vector<cplx>& psi) const {
        for (size_t q = 0; q < psi.size(); ++q) psi[q] *= half_phase[q];
        fft.forward(psi);
        for (size_t q = 0; q < psi.size(); ++q) psi[q] *= kin_forward[q];
        fft.inverse(psi);
        for (size_t q = 0; q < psi.size(); ++q) psi[q] *= half_phase[q];
    }

    void retreat(std::vector<cplx>& p) const {
        for (size_t q = 0; q < p.size(); ++q) p[q] *= std::conj(half_phase[q]);
        fft.forward(p);
        for (size_t q = 0; q < p.size(); ++q) p[q] *= std::conj(kin_forward[q]);
        fft.inverse(p);
        for (size_t q = 0; q < p.size(); ++q) p[q] *= std::conj(half_phase[q]);
    }
};

double penalty_term(const Grid2D& grid, const std::vector<double>& lam, double gamma) {
    const double dx = grid.dx();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < lam.size(); ++i) {
        const double slope = (lam[i + 1] - lam[i]) / dx;
        acc += slope * slope * dx;
    }
    return 0.5 * gamma * acc;
}

CostBreakdown cost_impl(const SpatialOctProblem& problem, const SpatialControl& control,
                        const std::vector<int>& cols,
                        std::vector<std::vector<cplx>>* traj_out) {
    const Grid2D& grid = problem.grid;
    const auto lam = column_lambda(problem, control, cols);
    StaticField2D field(problem, lam);

    std::vector<cplx> psi = problem.initial_state.values;
    if (traj_out) {
        traj_out->assign(static_cast<size_t>(grid.n_nodes()), {});
        (*traj_out)[0] = psi;
    }
    for (int m = 0; m < grid.n_t; ++m) {
        field.advance(psi);
        if (traj_out) (*traj_out)[static_cast<size_t>(m + 1)] = psi;
    }

    Wave2D final_state(grid, std::move(psi), grid.n_t);
    CostBreakdown parts;
    parts.infidelity = infidelity(final_state, problem.desired_state);
    parts.penalty = penalty_term(grid, control.values, problem.gamma);
    parts.total = parts.infidelity + parts.penalty;
    return parts;
}

std::vector<double> gradient_impl(const SpatialOctProblem& problem,
                                  const SpatialControl& control,
                                  const std::vector<int>& cols) {
    const Grid2D& grid = problem.grid;
    const int n_t = grid.n_t;
    const double dt = grid.dt();
    const double dx = grid.dx();
    const double dy = grid.dy();
    const auto lam = column_lambda(problem, control, cols);
    StaticField2D field(problem, lam);

    std::vector<std::vector<cplx>> traj(static_cast<size_t>(grid.n_nodes()));
    traj[0] = problem.initial_state.values;
    {
        std::vector<cplx> psi = traj[0];
        for (int m = 0; m < n_t; ++m) {
            field.advance(psi);
            traj[static_cast<size_t>(m + 1)] = psi;
        }
    }

    Wave2D final_state(grid, traj[static_cast<size_t>(n_t)], n_t);
    Wave2D p = adjoint_terminal(final_state, problem.desired_state);

    // dV/dlambda per point in the region, fixed in time.
    const size_t n_cols = cols.size();
    std::vector<double> dvdl(n_cols * static_cast<size_t>(grid.n_y));
    for (size_t k = 0; k < n_cols; ++k)
        for (int j = 0; j < grid.n_y; ++j)
            dvdl[k * static_cast<size_t>(grid.n_y) + static_cast<size_t>(j)] =
                problem.transverse->lambda_derivative_extended(grid.y(j),
                                                               control.values[k]);

    // lambda(x_i) acts through both half phases of every step; pairing the
    // co-state with dV/dlambda at the node and at the mid-step stage makes
    // the sum the exact derivative of the discrete cost.
    std::vector<double> overlap(n_cols, 0.0);
    auto accumulate = [&](const std::vector<cplx>& state, const std::vector<cplx>& p_now,
                          double weight) {
        for (size_t k = 0; k < n_cols; ++k) {
            const int i = cols[k];
            double acc = 0.0;
            const cplx* s_row = state.data() + grid.index(i, 0);
            const cplx* p_row = p_now.data() + grid.index(i, 0);
            const double* dv_row = dvdl.data() + k * static_cast<size_t>(grid.n_y);
            for (int j = 0; j < grid.n_y; ++j)
                acc += (std::conj(p_row[j]) * dv_row[j] * s_row[j]).real();
            overlap[k] += weight * acc * dy;
        }
    };

    std::vector<cplx> stage(static_cast<size_t>(grid.n_points()));
    accumulate(traj[static_cast<size_t>(n_t)], p.values, 0.5 * dt);
    for (int m = n_t - 1; m >= 0; --m) {
        // undo the trailing half phase, then the kinetic factor
        for (size_t q = 0; q < p.values.size(); ++q)
            p.values[q] *= std::conj(field.half_phase[q]);
        field.fft.forward(p.values);
        for (size_t q = 0; q < p.values.size(); ++q)
            p.values[q] *= std::conj(field.kin_forward[q]);
        field.fft.inverse(p.values);
        // co-state now sits at the mid-step stage; pair it with the stage state
        const std::vector<cplx>& psi_m = traj[static_cast<size_t>(m)];
        for (size_t q = 0; q < stage.size(); ++q)
            stage[q] = field.half_phase[q] * psi_m[q];
        accumulate(stage, p.values, 0.5 * dt);
        // undo the leading half phase
        for (size_t q = 0; q < p.values.size(); ++q)
            p.values[q] *= std::conj(field.half_phase[q]);
        if (m > 0) accumulate(psi_m, p.values, 0.5 * dt);
    }

    std::vector<double> g(n_cols, 0.0);
    for (size_t k = 1; k + 1 < n_cols; ++k) {
        const double lam_dd =
            (control.values[k + 1] - 2.0 * control.values[k] + control.values[k - 1]) /
            (dx * dx);
        g[k] = -problem.gamma * lam_dd - overlap[k];
    }
    return g;
}

} // namespace

CostBreakdown evaluate_cost_spatial(const SpatialOctProblem& problem,
                                    const SpatialControl& control) {
    const auto cols = problem.region_columns();
    check_control(control, cols);
    return cost_impl(problem, control, cols, nullptr);
}

std::vector<double> compute_gradient_spatial(const SpatialOctProblem& problem,
                                             const SpatialControl& control) {
    const auto cols = problem.region_columns();
    check_control(control, cols);
    return gradient_impl(problem, control, cols);
}

OctReport optimize_spatial(const SpatialOctProblem& problem, const SpatialControl& initial) {
    const auto cols = problem.region_columns();
    check_control(initial, cols);
    const int n_cols = static_cast<int>(cols.size());
    const double dx = problem.grid.dx();

    auto assemble = [&](const std::vector<double>& x) {
        SpatialControl c;
        c.values.resize(static_cast<size_t>(n_cols));
        c.values.front() = 0.0;
        c.values.back() = 1.0;
        for (int k = 1; k < n_cols - 1; ++k) c.values[static_cast<size_t>(k)] = x[static_cast<size_t>(k - 1)];
        return c;
    };

    CostFn cost = [&](const std::vector<double>& x) {
        const CostBreakdown parts = cost_impl(problem, assemble(x), cols, nullptr);
        return CostParts{parts.total, parts.infidelity, parts.penalty};
    };
    GradientFn gradient = [&](const std::vector<double>& x) {
        const std::vector<double> density = gradient_impl(problem, assemble(x), cols);
        std::vector<double> nodal(static_cast<size_t>(n_cols - 2));
        for (int k = 1; k < n_cols - 1; ++k) nodal[static_cast<size_t>(k - 1)] = density[static_cast<size_t>(k)] * dx;
        return nodal;
    };

    MinimizeOptions opts;
    opts.method = problem.optimizer;
    opts.max_iterations = problem.max_iterations;
    opts.gradient_tolerance = problem.gradient_tolerance;
    opts.cost_target = problem.cost_target;
    opts.report_scale = 1.0 / dx;

    std::vector<double> x0(static_cast<size_t>(n_cols - 2));
    for (int k = 1; k < n_cols - 1; ++k) x0[static_cast<size_t>(k - 1)] = initial.values[static_cast<size_t>(k)];

    MinimizeResult res = minimize(cost, gradient, std::move(x0), opts);

    OctReport report;
    const SpatialControl final_control = assemble(res.x);
    report.control = final_control.values;
    report.history = std::move(res.history);
    report.final_cost = res.final_cost;
    report.final_infidelity = res.final_infidelity;
    report.final_penalty = res.final_penalty;
    report.gradient_max_norm = res.gradient_max_norm;
    report.iterations = res.iterations;
    report.exit_reason = res.exit_reason;
    for (double v : final_control.values)
        if (v < -1e-12 || v > 1.0 + 1e-12) report.control_left_unit_interval = true;
    return report;
}

} // namespace gpeoct
