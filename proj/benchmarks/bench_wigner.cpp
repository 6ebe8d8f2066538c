#include <benchmark/benchmark.h>

#include <cmath>

#include "gpeoct/wigner.hpp"

using namespace gpeoct;

static void BM_WignerTransform(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid1D grid(-10.0, 10.0, n, 1.0, 10);
    Wave1D psi(grid);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        psi.values[i] = std::exp(-0.5 * (x - 2.0) * (x - 2.0)) +
                        std::exp(-0.5 * (x + 2.0) * (x + 2.0));
    }
    normalize(psi);
    for (auto _ : state) {
        const WignerMap w = wigner(psi);
        benchmark::DoNotOptimize(w.values.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_WignerTransform)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
