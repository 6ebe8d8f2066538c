#include <benchmark/benchmark.h>

#include "gpeoct/oct.hpp"

using namespace gpeoct;

namespace {

OctProblem& gradient_problem() {
    static OctProblem p = [] {
        static const Grid1D grid(-10.0, 15.0, 500, 6.0, 500);
        static const Potential1D well{ShiftedHarmonic{5.0}};
        OctProblem q;
        q.grid = grid;
        q.potential = &well;
        q.scheme = Scheme::crank_nicolson_1d;
        q.initial_state = groundstate_imaginary_time(grid, well, 0.0, 0.0);
        q.desired_state = groundstate_imaginary_time(grid, well, 1.0, 0.0);
        return q;
    }();
    return p;
}

} // namespace

static void BM_CostEvaluation(benchmark::State& state) {
    const OctProblem& p = gradient_problem();
    const auto lam = ControlTrajectory::linear(p.grid.n_nodes());
    for (auto _ : state) {
        const auto parts = evaluate_cost(p, lam);
        benchmark::DoNotOptimize(parts.total);
    }
}
BENCHMARK(BM_CostEvaluation)->Unit(benchmark::kMillisecond);

static void BM_AdjointGradient(benchmark::State& state) {
    const OctProblem& p = gradient_problem();
    const auto lam = ControlTrajectory::linear(p.grid.n_nodes());
    for (auto _ : state) {
        const auto grad = compute_gradient(p, lam);
        benchmark::DoNotOptimize(grad.data());
    }
}
BENCHMARK(BM_AdjointGradient)->Unit(benchmark::kMillisecond);

static void BM_OptimizeTenIterations(benchmark::State& state) {
    OctProblem p = gradient_problem();
    p.max_iterations = 10;
    p.cost_target = 0.0;
    p.gradient_tolerance = 0.0;
    const auto lam = ControlTrajectory::linear(p.grid.n_nodes());
    for (auto _ : state) {
        const auto report = optimize(p, lam);
        benchmark::DoNotOptimize(report.final_cost);
    }
}
BENCHMARK(BM_OptimizeTenIterations)->Unit(benchmark::kMillisecond);
