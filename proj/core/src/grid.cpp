#include "gpeoct/grid.hpp"

#include <cmath>

namespace gpeoct {

namespace {
void validate_axis(double lo, double hi, int n, const char* name) {
    if (!(hi > lo))
        throw DomainError(std::string(name) + "_max must exceed " + name + "_min");
    if (n < 8)
        throw DomainError(std::string("n_") + name + " must be at least 8");
}

void validate_time(double t_final, int n_t) {
    if (!(t_final > 0.0)) throw DomainError("t_final must be positive");
    if (n_t < 2) throw DomainError("n_t must be at least 2");
}
} // namespace

Grid1D::Grid1D(double x_min_, double x_max_, int n_x_, double t_final_, int n_t_)
    : x_min(x_min_), x_max(x_max_), n_x(n_x_), t_final(t_final_), n_t(n_t_) {
    validate_axis(x_min, x_max, n_x, "x");
    validate_time(t_final, n_t);
}

Grid2D::Grid2D(double x_min_, double x_max_, int n_x_,
               double y_min_, double y_max_, int n_y_,
               double t_final_, int n_t_)
    : x_min(x_min_), x_max(x_max_), n_x(n_x_),
      y_min(y_min_), y_max(y_max_), n_y(n_y_),
      t_final(t_final_), n_t(n_t_) {
    validate_axis(x_min, x_max, n_x, "x");
    validate_axis(y_min, y_max, n_y, "y");
    validate_time(t_final, n_t);
    if (!fft_friendly_size(n_x) || !fft_friendly_size(n_y)) {
        fft_size_warning = "grid sizes " + std::to_string(n_x) + "x" +
                           std::to_string(n_y) +
                           " do not factor into small primes; spectral "
                           "transforms will be slower";
    }
}

bool fft_friendly_size(int n) {
    if (n < 1) return false;
    for (int p : {2, 3, 5, 7})
        while (n % p == 0) n /= p;
    return n == 1;
}

std::vector<double> kinetic_wavenumbers(int n, double domain_length) {
    const double dk = 2.0 * M_PI / domain_length;
    std::vector<double> k(n);
    for (int j = 0; j < n; ++j)
        k[j] = dk * (j <= (n - 1) / 2 ? j : j - n);
    return k;
}

std::vector<double> kinetic_wavenumbers(const Grid1D& grid) {
    return kinetic_wavenumbers(grid.n_x, grid.length());
}

} // namespace gpeoct
