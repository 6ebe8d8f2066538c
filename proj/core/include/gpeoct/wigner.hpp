#pragma once

#include <vector>

#include "gpeoct/propagation.hpp"
#include "gpeoct/wavefield.hpp"

namespace gpeoct {

/// Real-valued phase-space distribution w(x, p) on the spatial grid times a
/// momentum grid of the same size, spacing pi / L (half the wavenumber
/// spacing of the state's own transform, covering half its Nyquist range).
/// Normalization keeps the paper's convention without a 1/(2 pi) prefactor:
/// the marginal over p is 2 pi |psi(x)|^2 and the double integral is
/// 2 pi ||psi||^2.
struct WignerMap {
    std::vector<double> x_axis;
    std::vector<double> p_axis;           // ascending
    std::vector<double> values;           // row-major [x][p]
    bool time_integrated = false;
    int stride = 1;                        // snapshot stride when integrated
    double max_imag_residue = 0.0;         // |Im| discarded by the transform

    int n_x() const { return static_cast<int>(x_axis.size()); }
    int n_p() const { return static_cast<int>(p_axis.size()); }
    double value(int ix, int ip) const {
        return values[static_cast<size_t>(ix) * p_axis.size() + static_cast<size_t>(ip)];
    }
};

/// w(x, p) = integral e^{-i p s} psi(x + s/2) psi*(x - s/2) ds evaluated by
/// the correlation-then-transform construction on the periodic grid.
WignerMap wigner(const Wave1D& psi);

/// 2D fields are not supported; compute on a 1D marginal slice instead.
WignerMap wigner(const Wave2D& psi);

/// Sum of per-snapshot maps weighted by the trapezoid rule over the sampled
/// times. stride = 0 picks max(1, n_t / 100), rounded up to a multiple of
/// the store's own stride.
WignerMap wigner_time_integrated(const TrajectoryStore& trajectory, const Grid1D& grid,
                                 int stride = 0);

} // namespace gpeoct
