#include "gpeoct/wigner.hpp"

#include <algorithm>
#include <cmath>

#include "gpeoct/fft.hpp"

namespace gpeoct {

namespace {

void add_wigner(const Grid1D& grid, const std::vector<cplx>& psi, double weight,
                const Fft& fft, WignerMap& map) {
    const int n = grid.n_x;
    const double dx = grid.dx();
    std::vector<cplx> corr(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // correlation over the separation s = 2 dx j, periodic in j
        for (int j = 0; j < n; ++j) {
            const int ip = (i + j) % n;
            const int im = ((i - j) % n + n) % n;
            corr[static_cast<size_t>(j)] = psi[static_cast<size_t>(ip)] * std::conj(psi[static_cast<size_t>(im)]);
        }
        fft.forward(corr);
        // reorder to ascending momentum p_k = (pi / L) (a - n/2)
        for (int a = 0; a < n; ++a) {
            const int k_signed = a - n / 2;
            const int k_fft = (k_signed + n) % n;
            const cplx w = corr[static_cast<size_t>(k_fft)] * (2.0 * dx);
            map.max_imag_residue = std::max(map.max_imag_residue, std::abs(w.imag()));
            map.values[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(a)] += weight * w.real();
        }
    }
}

WignerMap make_empty_map(const Grid1D& grid) {
    const int n = grid.n_x;
    WignerMap map;
    map.x_axis.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) map.x_axis[static_cast<size_t>(i)] = grid.x(i);
    map.p_axis.resize(static_cast<size_t>(n));
    const double dp = M_PI / grid.length();
    for (int a = 0; a < n; ++a) map.p_axis[static_cast<size_t>(a)] = dp * (a - n / 2);
    map.values.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
    return map;
}

} // namespace

WignerMap wigner(const Wave1D& psi) {
    WignerMap map = make_empty_map(psi.grid);
    Fft fft(psi.grid.n_x);
    add_wigner(psi.grid, psi.values, 1.0, fft, map);
    return map;
}

WignerMap wigner(const Wave2D&) {
    throw DimensionError(
        "wigner supports 1D fields only; compute on a 1D marginal slice instead");
}

WignerMap wigner_time_integrated(const TrajectoryStore& trajectory, const Grid1D& grid,
                                 int stride) {
    if (trajectory.field_size() != grid.n_x)
        throw DimensionError("trajectory does not live on the given grid");
    const int n_t = trajectory.n_nodes() - 1;
    int s = stride > 0 ? stride : std::max(1, n_t / 100);
    // align with what the store actually kept
    const int have = trajectory.stride();
    s = ((s + have - 1) / have) * have;

    std::vector<int> nodes;
    for (int m = 0; m <= n_t; m += s) nodes.push_back(m);
    if (nodes.back() != n_t) nodes.push_back(n_t);

    WignerMap map = make_empty_map(grid);
    map.time_integrated = true;
    map.stride = s;
    Fft fft(grid.n_x);
    const double dt = grid.dt();
    for (size_t k = 0; k < nodes.size(); ++k) {
        double w = 0.0;
        if (k > 0) w += 0.5 * (nodes[k] - nodes[k - 1]) * dt;
        if (k + 1 < nodes.size()) w += 0.5 * (nodes[k + 1] - nodes[k]) * dt;
        add_wigner(grid, trajectory.at(nodes[k]), w, fft, map);
    }
    return map;
}

} // namespace gpeoct
