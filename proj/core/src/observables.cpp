#include "gpeoct/observables.hpp"

#include <cmath>

#include "gpeoct/fft.hpp"

namespace gpeoct {

EnergyBreakdown energy_breakdown(const Wave1D& psi, const Potential1D& potential,
                                 double lambda, double g) {
    const Grid1D& grid = psi.grid;
    const int n = grid.n_x;
    EnergyBreakdown e;

    std::vector<cplx> spec = psi.values;
    Fft fft(n);
    fft.forward(spec);
    const auto k = kinetic_wavenumbers(grid);
    const double spectral_weight = grid.dx() / n;
    for (int j = 0; j < n; ++j)
        e.kinetic += 0.5 * k[j] * k[j] * std::norm(spec[j]) * spectral_weight;

    const double dx = grid.dx();
    for (int i = 0; i < n; ++i) {
        const double dens = std::norm(psi.values[i]);
        e.potential += potential.value_extended(grid.x(i), lambda) * dens * dx;
        e.interaction += 0.5 * g * dens * dens * dx;
    }
    return e;
}

EnergyBreakdown energy_breakdown(const Wave2D& psi, const Potential2D& potential,
                                 double lambda, double g) {
    const Grid2D& grid = psi.grid;
    EnergyBreakdown e;

    std::vector<cplx> spec = psi.values;
    Fft fft(grid.n_x, grid.n_y);
    fft.forward(spec);
    const auto kx = kinetic_wavenumbers(grid.n_x, grid.length_x());
    const auto ky = kinetic_wavenumbers(grid.n_y, grid.length_y());
    const double spectral_weight = grid.dx() * grid.dy() / grid.n_points();
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_y; ++j)
            e.kinetic += 0.5 * (kx[i] * kx[i] + ky[j] * ky[j]) *
                         std::norm(spec[grid.index(i, j)]) * spectral_weight;

    const double dv = grid.dx() * grid.dy();
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_y; ++j) {
            const double dens = std::norm(psi.values[grid.index(i, j)]);
            e.potential += potential.value_extended(grid.x(i), grid.y(j), lambda) * dens * dv;
            e.interaction += 0.5 * g * dens * dens * dv;
        }
    return e;
}

Observables observables(const Wave1D& psi, const Potential1D& potential,
                        double lambda, double g) {
    const Grid1D& grid = psi.grid;
    const int n = grid.n_x;
    const double dx = grid.dx();

    Observables o;
    o.norm = norm(psi);

    double mx = 0.0, mx2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dens = std::norm(psi.values[i]) * dx;
        mx += grid.x(i) * dens;
        mx2 += grid.x(i) * grid.x(i) * dens;
    }
    const double n2 = o.norm * o.norm;
    o.mean_x = mx / n2;
    o.std_x = std::sqrt(std::max(0.0, mx2 / n2 - o.mean_x * o.mean_x));

    std::vector<cplx> spec = psi.values;
    Fft fft(n);
    fft.forward(spec);
    const auto k = kinetic_wavenumbers(grid);
    double mp = 0.0, mp2 = 0.0, wsum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = std::norm(spec[j]);
        wsum += w;
        mp += k[j] * w;
        mp2 += k[j] * k[j] * w;
    }
    o.mean_p = mp / wsum;
    o.std_p = std::sqrt(std::max(0.0, mp2 / wsum - o.mean_p * o.mean_p));

    o.energy = energy_breakdown(psi, potential, lambda, g).total();
    return o;
}

} // namespace gpeoct
