#pragma once

#include <string>
#include <vector>

#include "gpeoct/errors.hpp"

namespace gpeoct {

/// Uniform space-time discretization of a periodic 1D domain.
///
/// The n_x grid points are x_i = x_min + i dx with dx = (x_max - x_min)/n_x;
/// index n_x wraps to 0. Time runs over n_t steps of size dt = t_final/n_t,
/// i.e. n_t + 1 nodes t_m = m dt.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_x = 0;
    double t_final = 0.0;
    int n_t = 0;

    Grid1D() = default;
    Grid1D(double x_min_, double x_max_, int n_x_, double t_final_, int n_t_);

    double length() const { return x_max - x_min; }
    double dx() const { return length() / n_x; }
    double dt() const { return t_final / n_t; }
    double x(int i) const { return x_min + i * dx(); }
    int n_nodes() const { return n_t + 1; }
    double t(int m) const { return m * dt(); }

    bool operator==(const Grid1D&) const = default;
};

/// Periodic 2D extension. Values are stored row-major with x slowest:
/// index(i, j) = i * n_y + j.
struct Grid2D {
    double x_min = 0.0, x_max = 0.0;
    int n_x = 0;
    double y_min = 0.0, y_max = 0.0;
    int n_y = 0;
    double t_final = 0.0;
    int n_t = 0;

    /// Non-empty when n_x or n_y does not factor into small primes and the
    /// spectral transforms will run off the fast path.
    std::string fft_size_warning;

    Grid2D() = default;
    Grid2D(double x_min_, double x_max_, int n_x_,
           double y_min_, double y_max_, int n_y_,
           double t_final_, int n_t_);

    double length_x() const { return x_max - x_min; }
    double length_y() const { return y_max - y_min; }
    double dx() const { return length_x() / n_x; }
    double dy() const { return length_y() / n_y; }
    double dt() const { return t_final / n_t; }
    double x(int i) const { return x_min + i * dx(); }
    double y(int j) const { return y_min + j * dy(); }
    int n_points() const { return n_x * n_y; }
    int index(int i, int j) const { return i * n_y + j; }
    int n_nodes() const { return n_t + 1; }
    double t(int m) const { return m * dt(); }

    bool same_extents(const Grid2D& o) const {
        return x_min == o.x_min && x_max == o.x_max && n_x == o.n_x &&
               y_min == o.y_min && y_max == o.y_max && n_y == o.n_y;
    }
};

/// True when n factors into 2, 3, 5 and 7 only.
bool fft_friendly_size(int n);

/// Spectral wavenumbers in discrete-transform ordering, k_j = (2 pi / L) *
/// [0, 1, ..., n/2-1, -n/2, ..., -1]. The kinetic operator acts as k^2/2 in
/// this basis.
std::vector<double> kinetic_wavenumbers(int n, double domain_length);
std::vector<double> kinetic_wavenumbers(const Grid1D& grid);

} // namespace gpeoct
