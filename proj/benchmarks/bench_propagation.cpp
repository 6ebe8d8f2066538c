#include <benchmark/benchmark.h>

#include "gpeoct/oct.hpp"
#include "gpeoct/propagation.hpp"

using namespace gpeoct;

namespace {

struct Setup1D {
    Grid1D grid{-10.0, 15.0, 500, 9.0, 500};
    Potential1D well{ShiftedHarmonic{5.0}};
    Wave1D psi0;
    std::vector<double> control;

    Setup1D() {
        psi0 = groundstate_imaginary_time(grid, well, 0.0, 0.0);
        control = ControlTrajectory::linear(grid.n_nodes()).values;
    }
};

const Setup1D& setup_1d() {
    static Setup1D s;
    return s;
}

} // namespace

static void BM_CrankNicolson500(benchmark::State& state) {
    const auto& s = setup_1d();
    PropagationSpec spec;
    spec.grid = s.grid;
    spec.potential = &s.well;
    spec.control = s.control;
    spec.scheme = Scheme::crank_nicolson_1d;
    for (auto _ : state) {
        auto traj = propagate(spec, s.psi0);
        benchmark::DoNotOptimize(traj.at(s.grid.n_t).data());
    }
    state.SetItemsProcessed(state.iterations() * s.grid.n_t);
}
BENCHMARK(BM_CrankNicolson500)->Unit(benchmark::kMillisecond);

static void BM_SplitOperator500(benchmark::State& state) {
    const auto& s = setup_1d();
    PropagationSpec spec;
    spec.grid = s.grid;
    spec.potential = &s.well;
    spec.control = s.control;
    spec.scheme = Scheme::split_operator;
    for (auto _ : state) {
        auto traj = propagate(spec, s.psi0);
        benchmark::DoNotOptimize(traj.at(s.grid.n_t).data());
    }
    state.SetItemsProcessed(state.iterations() * s.grid.n_t);
}
BENCHMARK(BM_SplitOperator500)->Unit(benchmark::kMillisecond);

static void BM_NonlinearSplitOperator500(benchmark::State& state) {
    const auto& s = setup_1d();
    PropagationSpec spec;
    spec.grid = s.grid;
    spec.potential = &s.well;
    spec.control = s.control;
    spec.scheme = Scheme::split_operator_nonlinear;
    spec.g = 20.0;
    for (auto _ : state) {
        auto traj = propagate(spec, s.psi0);
        benchmark::DoNotOptimize(traj.at(s.grid.n_t).data());
    }
    state.SetItemsProcessed(state.iterations() * s.grid.n_t);
}
BENCHMARK(BM_NonlinearSplitOperator500)->Unit(benchmark::kMillisecond);

static void BM_SplitOperator2D(benchmark::State& state) {
    static const Grid2D grid(-10.0, 15.0, 256, -6.0, 6.0, 64, 2.0, 100);
    static const Potential2D pot{SeparablePotential2D{
        Potential1D{ShiftedHarmonic{5.0}}, Potential1D{ShiftedHarmonic{0.0}}, 0.0}};
    static const Wave2D psi0 = groundstate_imaginary_time_2d(grid, pot, 0.0, 0.0);
    PropagationSpec2D spec;
    spec.grid = grid;
    spec.potential = &pot;
    spec.control = ControlTrajectory::linear(grid.n_nodes()).values;
    for (auto _ : state) {
        auto traj = propagate_split_operator_2d(spec, psi0);
        benchmark::DoNotOptimize(traj.at(grid.n_t).data());
    }
    state.SetItemsProcessed(state.iterations() * grid.n_t);
}
BENCHMARK(BM_SplitOperator2D)->Unit(benchmark::kMillisecond);

static void BM_GroundstateRelaxation(benchmark::State& state) {
    const Grid1D grid(-8.0, 8.0, 256, 8.0, 400);
    const Potential1D well{ShiftedHarmonic{0.0}};
    for (auto _ : state) {
        auto gs = groundstate_imaginary_time(grid, well, 0.0, state.range(0));
        benchmark::DoNotOptimize(gs.values.data());
    }
}
BENCHMARK(BM_GroundstateRelaxation)->Arg(0)->Arg(20)->Unit(benchmark::kMillisecond);
