#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gpeoct/errors.hpp"
#include "gpeoct/grid.hpp"

namespace gpeoct {

using cplx = std::complex<double>;

/// Complex-valued wavefunction sampled on one time slice of a grid.
/// Immutable by convention after construction: propagation produces new
/// slices instead of mutating old ones. The adjoint field uses the same
/// type without the unit-norm convention.
template <class GridT>
struct WaveField {
    GridT grid;
    std::vector<cplx> values;
    int time_index = 0;

    WaveField() = default;
    explicit WaveField(const GridT& g, int t_index = 0)
        : grid(g), values(static_cast<size_t>(field_size(g))), time_index(t_index) {}
    WaveField(const GridT& g, std::vector<cplx> v, int t_index = 0)
        : grid(g), values(std::move(v)), time_index(t_index) {
        if (static_cast<int>(values.size()) != field_size(g))
            throw DimensionError("field size does not match grid");
    }

    static int field_size(const Grid1D& g) { return g.n_x; }
    static int field_size(const Grid2D& g) { return g.n_points(); }

    int size() const { return static_cast<int>(values.size()); }
};

using Wave1D = WaveField<Grid1D>;
using Wave2D = WaveField<Grid2D>;

inline double cell_volume(const Grid1D& g) { return g.dx(); }
inline double cell_volume(const Grid2D& g) { return g.dx() * g.dy(); }

inline bool same_spatial_grid(const Grid1D& a, const Grid1D& b) {
    return a.x_min == b.x_min && a.x_max == b.x_max && a.n_x == b.n_x;
}
inline bool same_spatial_grid(const Grid2D& a, const Grid2D& b) {
    return a.same_extents(b);
}

/// <a|b> = sum_i a_i* b_i dV. Conjugate-linear in the first argument.
template <class GridT>
cplx inner_product(const WaveField<GridT>& a, const WaveField<GridT>& b) {
    if (!same_spatial_grid(a.grid, b.grid) || a.size() != b.size())
        throw DimensionError("inner_product: fields live on different grids");
    cplx acc = 0.0;
    for (int i = 0; i < a.size(); ++i)
        acc += std::conj(a.values[i]) * b.values[i];
    return acc * cell_volume(a.grid);
}

template <class GridT>
double norm_squared(const WaveField<GridT>& f) {
    double acc = 0.0;
    for (const cplx& v : f.values) acc += std::norm(v);
    return acc * cell_volume(f.grid);
}

template <class GridT>
double norm(const WaveField<GridT>& f) {
    return std::sqrt(norm_squared(f));
}

template <class GridT>
void normalize(WaveField<GridT>& f) {
    const double n = norm(f);
    if (!(n > 0.0)) throw NumericalError("cannot normalize a zero field");
    const double inv = 1.0 / n;
    for (cplx& v : f.values) v *= inv;
}

/// 1/2 (1 - |<desired|final>|^2). Invariant under a global phase of either
/// argument. Both states must be normalized to 1e-6.
template <class GridT>
double infidelity(const WaveField<GridT>& final_state,
                  const WaveField<GridT>& desired_state) {
    if (std::abs(norm(final_state) - 1.0) > 1e-6 ||
        std::abs(norm(desired_state) - 1.0) > 1e-6)
        throw ContractViolation("infidelity requires unit-normalized states");
    const double overlap_sq = std::norm(inner_product(desired_state, final_state));
    double value = 0.5 * (1.0 - overlap_sq);
    if (value < 0.0) value = 0.0;
    if (value > 1.0) value = 1.0;
    return value;
}

} // namespace gpeoct
