#include "gpeoct/experiment.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "gpeoct/fft.hpp"
#include "gpeoct/io.hpp"
#include "gpeoct/observables.hpp"
#include "gpeoct/oct.hpp"
#include "gpeoct/spatial.hpp"
#include "gpeoct/wigner.hpp"

namespace gpeoct {

namespace fs = std::filesystem;

namespace {

struct Session {
    const ExperimentConfig& cfg;
    fs::path dir;
    std::vector<std::string> artifacts;
    std::vector<std::string> warnings;

    std::string path(const std::string& rel) { return (dir / rel).string(); }

    void record(const std::string& rel) { artifacts.push_back(rel); }

    void write_state_1d(const std::string& stem, const Wave1D& psi) {
        const std::string rel = stem + ".gpf";
        io::write_field(path(rel), {static_cast<uint32_t>(psi.grid.n_x)}, psi.values);
        std::vector<double> xs(psi.grid.n_x);
        for (int i = 0; i < psi.grid.n_x; ++i) xs[i] = psi.grid.x(i);
        io::write_axes(io::axes_path_for(path(rel)), {xs});
        record(rel);
        record(stem + "_axes.csv");
    }

    void write_state_2d(const std::string& stem, const Wave2D& psi) {
        const std::string rel = stem + ".gpf";
        io::write_field(path(rel),
                        {static_cast<uint32_t>(psi.grid.n_x), static_cast<uint32_t>(psi.grid.n_y)},
                        psi.values);
        std::vector<double> xs(psi.grid.n_x), ys(psi.grid.n_y);
        for (int i = 0; i < psi.grid.n_x; ++i) xs[i] = psi.grid.x(i);
        for (int j = 0; j < psi.grid.n_y; ++j) ys[j] = psi.grid.y(j);
        io::write_axes(io::axes_path_for(path(rel)), {xs, ys});
        record(rel);
        record(stem + "_axes.csv");
    }

    void write_control_time(const Grid1D& grid, const std::vector<double>& values) {
        io::CsvWriter csv(path("control.csv"), {"t", "lambda"});
        for (int m = 0; m < grid.n_nodes(); ++m) csv.row({grid.t(m), values[m]});
        record("control.csv");
    }

    void write_history(const std::vector<IterationRecord>& history) {
        io::CsvWriter csv(path("cost_history.csv"),
                          {"iteration", "J", "infidelity", "penalty", "gradient_norm"});
        for (const auto& h : history)
            csv.row({double(h.iteration), h.cost, h.infidelity, h.penalty,
                     h.gradient_max_norm});
        record("cost_history.csv");
    }

    void write_summary(const std::vector<std::pair<std::string, std::string>>& kv) {
        io::CsvWriter csv(path("summary.csv"), {"key", "value"});
        for (const auto& [k, v] : kv) csv.row(std::vector<std::string>{k, v});
        record("summary.csv");
    }

    void write_wigner_map(const std::string& stem, const WignerMap& w) {
        const std::string rel = stem + ".gpf";
        io::write_field(path(rel),
                        {static_cast<uint32_t>(w.n_x()), static_cast<uint32_t>(w.n_p())},
                        w.values);
        io::write_axes(io::axes_path_for(path(rel)), {w.x_axis, w.p_axis});
        record(rel);
        record(stem + "_axes.csv");
    }

    void write_trajectory(const Grid1D& grid, const TrajectoryStore& traj) {
        std::vector<int> nodes;
        for (int m = 0; m < traj.n_nodes(); ++m)
            if (traj.stored(m)) nodes.push_back(m);
        std::vector<cplx> payload;
        payload.reserve(nodes.size() * static_cast<size_t>(grid.n_x));
        std::vector<double> times;
        for (int m : nodes) {
            const auto& s = traj.at(m);
            payload.insert(payload.end(), s.begin(), s.end());
            times.push_back(grid.t(m));
        }
        const std::string rel = "trajectory.gpf";
        io::write_field(path(rel),
                        {static_cast<uint32_t>(nodes.size()), static_cast<uint32_t>(grid.n_x)},
                        payload);
        std::vector<double> xs(grid.n_x);
        for (int i = 0; i < grid.n_x; ++i) xs[i] = grid.x(i);
        io::write_axes(io::axes_path_for(path(rel)), {times, xs});
        record(rel);
        record("trajectory_axes.csv");
    }

    void note_edge(const TrajectoryStore& traj) {
        if (traj.edge_warning())
            warnings.push_back("edge density reached " +
                               io::format_double(traj.edge_density_max) +
                               "; enlarge the spatial domain");
    }

    void finish() {
        std::ofstream echo(path("effective_config.cfg"), std::ios::trunc);
        echo << cfg.echo_text();
        echo.close();
        record("effective_config.cfg");
        io::write_manifest(dir.string(), artifacts);
    }
};

ControlTrajectory initial_control(const ExperimentConfig& cfg, int n_nodes) {
    if (cfg.control.initial == "linear") return ControlTrajectory::linear(n_nodes);
    if (cfg.control.initial == "square_root") return ControlTrajectory::square_root(n_nodes);
    const auto rows = io::read_csv(cfg.control.file);
    std::vector<double> v;
    for (size_t rix = 0; rix < rows.size(); ++rix) {
        if (rows[rix].size() < 2) continue;
        try {
            const double lam = std::stod(rows[rix][1]);
            v.push_back(lam);
        } catch (...) {
            if (rix == 0) continue; // header
            throw ConfigError("control file " + cfg.control.file +
                              ": malformed row " + std::to_string(rix + 1));
        }
    }
    if (static_cast<int>(v.size()) != n_nodes)
        throw ConfigError("control file " + cfg.control.file + " holds " +
                          std::to_string(v.size()) + " nodes, grid needs " +
                          std::to_string(n_nodes));
    return ControlTrajectory(std::move(v));
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::crank_nicolson_1d: return "crank_nicolson_1d";
        case Scheme::split_operator: return "split_operator";
        case Scheme::split_operator_nonlinear: return "split_operator_nonlinear";
    }
    return "unknown";
}

// --- per-kind runners --------------------------------------------------------

void run_groundstate(Session& s) {
    const ExperimentConfig& cfg = s.cfg;
    if (cfg.grid.two_dimensional) {
        const Grid2D grid = cfg.grid.grid2d();
        if (!grid.fft_size_warning.empty()) s.warnings.push_back(grid.fft_size_warning);
        const Potential2D pot = cfg.potential.build_2d();
        GroundstateInfo info;
        const Wave2D gs = groundstate_imaginary_time_2d(grid, pot, 0.0, cfg.solver.g, &info);
        s.write_state_2d("groundstate", gs);
        s.write_summary({{"energy", io::format_double(info.energy)},
                         {"chemical_potential", io::format_double(info.chemical_potential)},
                         {"iterations", std::to_string(info.iterations)},
                         {"residual", io::format_double(info.residual)}});
        return;
    }
    const Grid1D grid = cfg.grid.grid1d();
    const Potential1D pot = cfg.potential.build_1d();
    GroundstateInfo info;
    const Wave1D gs = groundstate_imaginary_time(grid, pot, 0.0, cfg.solver.g, &info);
    s.write_state_1d("groundstate", gs);
    const Observables o = observables(gs, pot, 0.0, cfg.solver.g);
    {
        io::CsvWriter csv(s.path("observables.csv"),
                          {"norm", "mean_x", "mean_p", "std_x", "std_p", "energy"});
        csv.row({o.norm, o.mean_x, o.mean_p, o.std_x, o.std_p, o.energy});
        s.record("observables.csv");
    }
    s.write_summary({{"energy", io::format_double(info.energy)},
                     {"chemical_potential", io::format_double(info.chemical_potential)},
                     {"iterations", std::to_string(info.iterations)},
                     {"residual", io::format_double(info.residual)}});
}

void run_propagate(Session& s) {
    const ExperimentConfig& cfg = s.cfg;
    if (cfg.grid.two_dimensional)
        throw ConfigError("propagate experiments are 1D; use optimize for 2D runs");
    const Grid1D grid = cfg.grid.grid1d();
    const Potential1D pot = cfg.potential.build_1d();
    const bool offset = cfg.solver.offset_on(cfg.potential.kind);

    const Wave1D psi0 = groundstate_imaginary_time(grid, pot, 0.0, cfg.solver.g);
    const ControlTrajectory control = initial_control(cfg, grid.n_nodes());

    PropagationSpec spec;
    spec.grid = grid;
    spec.potential = &pot;
    spec.control = control.values;
    spec.g = cfg.solver.g;
    spec.scheme = cfg.solver.scheme;
    spec.offset_splitting = offset;
    if (cfg.solver.stride > 0) {
        spec.policy = TrajectoryPolicy::strided_with_recompute;
        spec.stride = cfg.solver.stride;
    }
    const TrajectoryStore traj = propagate(spec, psi0);
    s.note_edge(traj);

    Wave1D final_state(grid, traj.at(grid.n_t), grid.n_t);
    s.write_state_1d("final_state", final_state);
    s.write_control_time(grid, control.values);

    std::vector<std::pair<std::string, std::string>> kv = {
        {"scheme", scheme_name(spec.scheme)},
        {"final_norm", io::format_double(norm(final_state))},
        {"edge_density_max", io::format_double(traj.edge_density_max)}};

    if (cfg.oct_enabled) {
        const Wave1D psi_d = groundstate_imaginary_time(grid, pot, 1.0, cfg.solver.g);
        OctProblem problem;
        problem.grid = grid;
        problem.potential = &pot;
        problem.g = cfg.solver.g;
        problem.scheme = cfg.solver.scheme;
        problem.offset_splitting = offset;
        problem.initial_state = psi0;
        problem.desired_state = psi_d;
        problem.gamma = cfg.oct.gamma;
        const CostBreakdown parts = evaluate_cost(problem, control);
        io::CsvWriter csv(s.path("cost.csv"), {"J", "infidelity", "penalty"});
        csv.row({parts.total, parts.infidelity, parts.penalty});
        s.record("cost.csv");
        kv.push_back({"J", io::format_double(parts.total)});
    }
    s.write_summary(kv);

    if (cfg.wants("trajectory")) s.write_trajectory(grid, traj);
    if (cfg.wants("wigner")) s.write_wigner_map("wigner", wigner(final_state));
    if (cfg.wants("observables")) {
        io::CsvWriter csv(s.path("observables.csv"),
                          {"t", "norm", "mean_x", "mean_p", "std_x", "std_p", "energy"});
        for (int m = 0; m < traj.n_nodes(); ++m) {
            if (!traj.stored(m)) continue;
            Wave1D slice(grid, traj.at(m), m);
            const Observables o =
                observables(slice, pot, control.values[static_cast<size_t>(m)], cfg.solver.g);
            csv.row({grid.t(m), o.norm, o.mean_x, o.mean_p, o.std_x, o.std_p, o.energy});
        }
        s.record("observables.csv");
    }
}

void run_optimize(Session& s) {
    const ExperimentConfig& cfg = s.cfg;
    const bool offset = cfg.solver.offset_on(cfg.potential.kind);

    OctReport report;
    if (cfg.grid.two_dimensional) {
        const Grid2D grid = cfg.grid.grid2d();
        if (!grid.fft_size_warning.empty()) s.warnings.push_back(grid.fft_size_warning);
        const Potential2D pot = cfg.potential.build_2d();
        OctProblem2D problem;
        problem.grid = grid;
        problem.potential = &pot;
        problem.g = cfg.solver.g;
        problem.offset_splitting = offset;
        problem.initial_state = groundstate_imaginary_time_2d(grid, pot, 0.0, cfg.solver.g);
        problem.desired_state = groundstate_imaginary_time_2d(grid, pot, 1.0, cfg.solver.g);
        problem.gamma = cfg.oct.gamma;
        problem.optimizer = cfg.oct.optimizer;
        problem.max_iterations = cfg.oct.max_iterations;
        problem.gradient_tolerance = cfg.oct.gradient_tolerance;
        problem.cost_target = cfg.oct.cost_target;

        report = optimize_2d(problem, initial_control(cfg, grid.n_nodes()));

        const TrajectoryStore traj = propagate_split_operator_2d(
            problem.propagation_spec(ControlTrajectory(report.control)),
            problem.initial_state);
        s.note_edge(traj);
        Wave2D final_state(grid, traj.at(grid.n_t), grid.n_t);
        s.write_state_2d("final_state", final_state);
        {
            io::CsvWriter csv(s.path("control.csv"), {"t", "lambda"});
            for (int m = 0; m < grid.n_nodes(); ++m) csv.row({grid.t(m), report.control[m]});
            s.record("control.csv");
        }
    } else {
        const Grid1D grid = cfg.grid.grid1d();
        const Potential1D pot = cfg.potential.build_1d();
        OctProblem problem;
        problem.grid = grid;
        problem.potential = &pot;
        problem.g = cfg.solver.g;
        problem.scheme = cfg.solver.scheme;
        problem.offset_splitting = offset;
        problem.initial_state = groundstate_imaginary_time(grid, pot, 0.0, cfg.solver.g);
        problem.desired_state = groundstate_imaginary_time(grid, pot, 1.0, cfg.solver.g);
        problem.gamma = cfg.oct.gamma;
        problem.optimizer = cfg.oct.optimizer;
        problem.max_iterations = cfg.oct.max_iterations;
        problem.gradient_tolerance = cfg.oct.gradient_tolerance;
        problem.cost_target = cfg.oct.cost_target;

        report = optimize(problem, initial_control(cfg, grid.n_nodes()));

        const TrajectoryStore traj =
            propagate(problem.propagation_spec(ControlTrajectory(report.control)),
                      problem.initial_state);
        s.note_edge(traj);
        Wave1D final_state(grid, traj.at(grid.n_t), grid.n_t);
        s.write_state_1d("final_state", final_state);
        s.write_control_time(grid, report.control);
        if (cfg.wants("trajectory")) s.write_trajectory(grid, traj);
        if (cfg.wants("wigner")) s.write_wigner_map("wigner", wigner(final_state));
    }

    if (report.control_left_unit_interval)
        s.warnings.push_back("optimized control leaves [0, 1]");
    s.write_history(report.history);
    s.write_summary({{"final_cost", io::format_double(report.final_cost)},
                     {"final_infidelity", io::format_double(report.final_infidelity)},
                     {"final_penalty", io::format_double(report.final_penalty)},
                     {"gradient_norm", io::format_double(report.gradient_max_norm)},
                     {"iterations", std::to_string(report.iterations)},
                     {"exit_reason", to_string(report.exit_reason)},
                     {"control_left_unit_interval",
                      report.control_left_unit_interval ? "true" : "false"}});
}

void run_optimize_spatial(Session& s) {
    const ExperimentConfig& cfg = s.cfg;
    if (!cfg.grid.two_dimensional)
        throw ConfigError("optimize_spatial requires a 2D grid block");
    const Grid2D grid = cfg.grid.grid2d();
    if (!grid.fft_size_warning.empty()) s.warnings.push_back(grid.fft_size_warning);
    const Potential1D transverse = cfg.potential.build_1d();

    // transverse groundstates of the entry and exit channels from
    // imaginary-time relaxation on the y axis
    const Grid1D ygrid(grid.y_min, grid.y_max, grid.n_y, grid.t_final, grid.n_t);
    const Wave1D chi0 = groundstate_imaginary_time(ygrid, transverse, 0.0, 0.0);
    const Wave1D chi1 = groundstate_imaginary_time(ygrid, transverse, 1.0, 0.0);

    SpatialOctProblem problem;
    problem.grid = grid;
    problem.transverse = &transverse;
    problem.region_min = cfg.spatial.region_min;
    problem.region_max = cfg.spatial.region_max;
    problem.gamma = cfg.oct.gamma;
    problem.optimizer = cfg.oct.optimizer;
    problem.max_iterations = cfg.oct.max_iterations;
    problem.gradient_tolerance = cfg.oct.gradient_tolerance;
    problem.cost_target = cfg.oct.cost_target;

    // incoming packet and free-dispersed outgoing target
    std::vector<cplx> line(grid.n_x);
    for (int i = 0; i < grid.n_x; ++i) {
        const double u = (grid.x(i) - cfg.spatial.packet_center) / cfg.spatial.packet_width;
        line[i] = std::exp(-0.5 * u * u) *
                  std::exp(cplx(0.0, cfg.spatial.packet_momentum * grid.x(i)));
    }
    Wave2D psi0(grid);
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_y; ++j)
            psi0.values[grid.index(i, j)] = line[i] * chi0.values[j];
    normalize(psi0);
    problem.initial_state = psi0;

    {
        Fft fft(grid.n_x);
        fft.forward(line);
        const auto k = kinetic_wavenumbers(grid.n_x, grid.length_x());
        for (int i = 0; i < grid.n_x; ++i)
            line[i] *= std::exp(cplx(0.0, -0.5 * k[i] * k[i] * grid.t_final));
        fft.inverse(line);
    }
    Wave2D psid(grid);
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_y; ++j)
            psid.values[grid.index(i, j)] = line[i] * chi1.values[j];
    normalize(psid);
    problem.desired_state = psid;

    const auto cols = problem.region_columns();
    const OctReport report =
        optimize_spatial(problem, SpatialControl::linear(static_cast<int>(cols.size())));

    {
        io::CsvWriter csv(s.path("control_x.csv"), {"x", "lambda"});
        for (size_t k = 0; k < cols.size(); ++k)
            csv.row({grid.x(cols[k]), report.control[k]});
        s.record("control_x.csv");
    }
    s.write_history(report.history);
    s.write_summary({{"final_cost", io::format_double(report.final_cost)},
                     {"final_infidelity", io::format_double(report.final_infidelity)},
                     {"final_penalty", io::format_double(report.final_penalty)},
                     {"gradient_norm", io::format_double(report.gradient_max_norm)},
                     {"iterations", std::to_string(report.iterations)},
                     {"exit_reason", to_string(report.exit_reason)}});
}

struct SweepRow {
    double t = 0.0;
    double kappa = 0.0;
    double j_linear = 0.0;
    double j_optimized = 0.0;
    int iterations = 0;
};

SweepRow sweep_point(const ExperimentConfig& cfg, double T, double kappa) {
    GridBlock gb = cfg.grid;
    gb.t_final = T;
    const Grid1D grid = gb.grid1d();
    const Potential1D pot = cfg.potential.build_1d();
    const bool offset = cfg.solver.offset_on(cfg.potential.kind);

    OctProblem problem;
    problem.grid = grid;
    problem.potential = &pot;
    problem.g = kappa;
    problem.scheme = kappa != 0.0 && cfg.solver.scheme == Scheme::crank_nicolson_1d
                         ? Scheme::split_operator_nonlinear
                         : cfg.solver.scheme;
    problem.offset_splitting = offset;
    problem.initial_state = groundstate_imaginary_time(grid, pot, 0.0, kappa);
    problem.desired_state = groundstate_imaginary_time(grid, pot, 1.0, kappa);
    problem.gamma = cfg.oct.gamma;
    problem.optimizer = cfg.oct.optimizer;
    problem.max_iterations = cfg.oct.max_iterations;
    problem.gradient_tolerance = cfg.oct.gradient_tolerance;
    problem.cost_target = cfg.oct.cost_target;

    ControlTrajectory guess = cfg.control.initial == "square_root"
                                  ? ControlTrajectory::square_root(grid.n_nodes())
                                  : ControlTrajectory::linear(grid.n_nodes());

    SweepRow row;
    row.t = T;
    row.kappa = kappa;
    row.j_linear = evaluate_cost(problem, guess).total;
    if (cfg.sweep.optimize) {
        const OctReport rep = optimize(problem, guess);
        row.j_optimized = rep.final_cost;
        row.iterations = rep.iterations;
    }
    return row;
}

void run_sweep(Session& s, int threads) {
    const ExperimentConfig& cfg = s.cfg;
    if (cfg.grid.two_dimensional) throw ConfigError("sweep experiments are 1D");
    if (cfg.solver.scheme == Scheme::crank_nicolson_1d)
        for (double k : cfg.sweep.kappa_values)
            if (k != 0.0)
                s.warnings.push_back(
                    "nonzero kappa points use split_operator_nonlinear instead of "
                    "crank_nicolson_1d");

    std::vector<std::pair<double, double>> points;
    for (double T : cfg.sweep.t_values)
        for (double k : cfg.sweep.kappa_values) points.emplace_back(T, k);

    std::vector<SweepRow> rows(points.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                rows[i] = sweep_point(cfg, points[i].first, points[i].second);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::string> header = {"T", "kappa", "J_linear"};
    if (cfg.sweep.optimize) {
        header.push_back("J_optimized");
        header.push_back("iterations");
    }
    io::CsvWriter csv(s.path("sweep.csv"), header);
    for (const auto& r : rows) {
        if (cfg.sweep.optimize)
            csv.row({r.t, r.kappa, r.j_linear, r.j_optimized, double(r.iterations)});
        else
            csv.row({r.t, r.kappa, r.j_linear});
    }
    s.record("sweep.csv");
    s.write_summary({{"points", std::to_string(points.size())},
                     {"optimized", cfg.sweep.optimize ? "true" : "false"}});
}

void run_wigner(Session& s) {
    const ExperimentConfig& cfg = s.cfg;
    const io::FieldData fd = io::read_field(cfg.input.state);
    if (fd.kind != io::ValueKind::complex_f64 || fd.dims.size() != 1)
        throw ConfigError("wigner input must be a rank-1 complex field: " + cfg.input.state);
    const auto axes = io::read_axes(io::axes_path_for(cfg.input.state));
    if (axes.empty() || axes[0].size() != fd.dims[0])
        throw ConfigError("axes CSV does not match the state: " + cfg.input.state);
    const double dx = axes[0][1] - axes[0][0];
    const Grid1D grid(axes[0].front(), axes[0].front() + dx * fd.dims[0],
                      static_cast<int>(fd.dims[0]), 1.0, 2);
    Wave1D psi(grid, fd.complex_values);
    s.write_wigner_map("wigner", wigner(psi));
    s.write_summary({{"state", cfg.input.state},
                     {"norm", io::format_double(norm(psi))}});
}

} // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          int threads) {
    Session s{cfg, fs::path(out_dir), {}, {}};
    fs::create_directories(s.dir);

    switch (cfg.kind) {
        case ExperimentKind::groundstate: run_groundstate(s); break;
        case ExperimentKind::propagate: run_propagate(s); break;
        case ExperimentKind::optimize: run_optimize(s); break;
        case ExperimentKind::optimize_spatial: run_optimize_spatial(s); break;
        case ExperimentKind::sweep: run_sweep(s, threads); break;
        case ExperimentKind::wigner: run_wigner(s); break;
    }
    s.finish();

    RunOutcome outcome;
    outcome.directory = s.dir.string();
    outcome.artifacts = std::move(s.artifacts);
    outcome.warnings = std::move(s.warnings);
    return outcome;
}

} // namespace gpeoct
