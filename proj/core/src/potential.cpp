#include "gpeoct/potential.hpp"

#include <algorithm>
#include <cmath>

namespace gpeoct {

namespace {

constexpr double lambda_slack = 1e-9;

double checked_lambda(double lambda) {
    if (lambda < -lambda_slack || lambda > 1.0 + lambda_slack)
        throw DomainError("lambda outside [0, 1]");
    return std::clamp(lambda, 0.0, 1.0);
}

// Piecewise-linear sample lookup with clamped end extrapolation.
double interp_axis(const std::vector<double>& axis, const std::vector<double>& vals,
                   double x) {
    const auto n = axis.size();
    if (x <= axis.front()) {
        const double s = (vals[1] - vals[0]) / (axis[1] - axis[0]);
        return vals[0] + s * (x - axis[0]);
    }
    if (x >= axis.back()) {
        const double s = (vals[n - 1] - vals[n - 2]) / (axis[n - 1] - axis[n - 2]);
        return vals[n - 1] + s * (x - axis[n - 1]);
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), x);
    const size_t k = static_cast<size_t>(it - axis.begin()) - 1;
    const double w = (x - axis[k]) / (axis[k + 1] - axis[k]);
    return (1.0 - w) * vals[k] + w * vals[k + 1];
}

// Interval index for lambda interpolation; out-of-range lambdas use the end
// intervals, which linearly extrapolates.
size_t lambda_interval(const std::vector<double>& samples, double lambda) {
    if (lambda <= samples.front()) return 0;
    if (lambda >= samples.back()) return samples.size() - 2;
    const auto it = std::upper_bound(samples.begin(), samples.end(), lambda);
    return static_cast<size_t>(it - samples.begin()) - 1;
}

struct WireGeometry {
    double f_ext_x, f_ext_z; // per-mA field of the outer pair, gauss
    double f_c_x, f_c_z;     // per-mA field of the center wire, gauss
};

WireGeometry wire_geometry(const ThreeWireTrapSpec& spec, double height, double x) {
    const double a = spec.wire_spacing;
    const double h = height;
    const double rc2 = x * x + h * h;
    const double rp2 = (x - a) * (x - a) + h * h;
    const double rm2 = (x + a) * (x + a) + h * h;
    if (rc2 < 1e-18 || rp2 < 1e-18 || rm2 < 1e-18)
        throw SingularityError("three-wire potential evaluated on a wire");
    WireGeometry g;
    // Infinite straight wire: B = mu0 I / (2 pi r), azimuthal. In gauss, mA
    // and um the prefactor is 2 (units.hpp). Outer pair carries +y current,
    // the center wire -y.
    g.f_ext_x = 2.0 * h * (1.0 / rp2 + 1.0 / rm2);
    g.f_ext_z = -2.0 * ((x - a) / rp2 + (x + a) / rm2);
    g.f_c_x = -2.0 * h / rc2;
    g.f_c_z = 2.0 * x / rc2;
    return g;
}

double three_wire_value(const ThreeWireTrapSpec& spec, double height, double x,
                        double lambda) {
    const WireGeometry g = wire_geometry(spec, height, x);
    const double ie = spec.exterior_current(lambda);
    const double ic = spec.center_current(lambda);
    const double bx = ie * g.f_ext_x + ic * g.f_c_x;
    const double bz = ie * g.f_ext_z + ic * g.f_c_z;
    const double by = spec.bias_field_y;
    return spec.moment_mu_b * units::mu_b_gauss *
           std::sqrt(bx * bx + bz * bz + by * by);
}

double three_wire_lambda_derivative(const ThreeWireTrapSpec& spec, double height,
                                    double x, double lambda) {
    const WireGeometry g = wire_geometry(spec, height, x);
    const double ie = spec.exterior_current(lambda);
    const double ic = spec.center_current(lambda);
    const double bx = ie * g.f_ext_x + ic * g.f_c_x;
    const double bz = ie * g.f_ext_z + ic * g.f_c_z;
    const double by = spec.bias_field_y;
    const double dbx = spec.current_ext_slope * g.f_ext_x + spec.current_c_slope * g.f_c_x;
    const double dbz = spec.current_ext_slope * g.f_ext_z + spec.current_c_slope * g.f_c_z;
    const double mag = std::sqrt(bx * bx + bz * bz + by * by);
    if (mag < 1e-300) return 0.0;
    return spec.moment_mu_b * units::mu_b_gauss * (bx * dbx + bz * dbz) / mag;
}

} // namespace

ThreeWire::ThreeWire(const ThreeWireTrapSpec& s)
    : spec(s), height(s.height >= 0.0 ? s.height : three_wire_trap_height(s)) {}

double three_wire_trap_height(const ThreeWireTrapSpec& spec) {
    // Transverse field squared on the x = 0 axis at lambda = 0; its minimum
    // locates the trap. B_z vanishes there by symmetry.
    auto bperp2 = [&](double z) {
        const double ie = spec.exterior_current(0.0);
        const double ic = spec.center_current(0.0);
        const double a = spec.wire_spacing;
        const double bx = ie * 2.0 * z * 2.0 / (a * a + z * z) - ic * 2.0 / z;
        return bx * bx;
    };
    const double a = spec.wire_spacing;
    double best_z = 1e-3, best_v = bperp2(best_z);
    const int n_scan = 4000;
    for (int i = 0; i <= n_scan; ++i) {
        const double z = 1e-3 * std::pow(1e5 * a, i / double(n_scan));
        const double v = bperp2(z);
        if (v < best_v) {
            best_v = v;
            best_z = z;
        }
    }
    // Golden-section refinement around the scan minimum.
    double lo = best_z / 1.5, hi = best_z * 1.5;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * best_z; ++it) {
        if (bperp2(c) < bperp2(d)) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - gr * (hi - lo);
        d = lo + gr * (hi - lo);
    }
    return 0.5 * (lo + hi);
}

Tabulated1D::Tabulated1D(std::vector<double> lambdas, std::vector<double> xs,
                         std::vector<std::vector<double>> values)
    : lambda_samples(std::move(lambdas)), x_axis(std::move(xs)), slices(std::move(values)) {
    if (lambda_samples.size() < 2)
        throw DomainError("tabulated potential needs at least 2 lambda samples");
    if (!std::is_sorted(lambda_samples.begin(), lambda_samples.end()) ||
        std::adjacent_find(lambda_samples.begin(), lambda_samples.end()) !=
            lambda_samples.end())
        throw DomainError("tabulated lambda samples must be strictly increasing");
    if (std::abs(lambda_samples.front()) > 1e-12 ||
        std::abs(lambda_samples.back() - 1.0) > 1e-12)
        throw DomainError("tabulated lambda samples must start at 0 and end at 1");
    lambda_samples.front() = 0.0;
    lambda_samples.back() = 1.0;
    if (x_axis.size() < 2 || !std::is_sorted(x_axis.begin(), x_axis.end()))
        throw DomainError("tabulated x axis must be sorted with at least 2 points");
    if (slices.size() != lambda_samples.size())
        throw DimensionError("tabulated potential: one slice per lambda sample required");
    for (const auto& s : slices)
        if (s.size() != x_axis.size())
            throw DimensionError("tabulated slice size does not match x axis");
}

Tabulated2D::Tabulated2D(std::vector<double> lambdas, std::vector<double> xs,
                         std::vector<double> ys, std::vector<std::vector<double>> values)
    : lambda_samples(std::move(lambdas)), x_axis(std::move(xs)), y_axis(std::move(ys)),
      slices(std::move(values)) {
    if (lambda_samples.size() < 2)
        throw DomainError("tabulated potential needs at least 2 lambda samples");
    if (!std::is_sorted(lambda_samples.begin(), lambda_samples.end()))
        throw DomainError("tabulated lambda samples must be strictly increasing");
    if (std::abs(lambda_samples.front()) > 1e-12 ||
        std::abs(lambda_samples.back() - 1.0) > 1e-12)
        throw DomainError("tabulated lambda samples must start at 0 and end at 1");
    if (slices.size() != lambda_samples.size())
        throw DimensionError("tabulated potential: one slice per lambda sample required");
    for (const auto& s : slices)
        if (s.size() != x_axis.size() * y_axis.size())
            throw DimensionError("tabulated slice size does not match axes");
}

namespace {

double tab1d_slice_value(const Tabulated1D& t, size_t k, double x) {
    return interp_axis(t.x_axis, t.slices[k], x);
}

double tab1d_value(const Tabulated1D& t, double x, double lambda) {
    const size_t k = lambda_interval(t.lambda_samples, lambda);
    const double l0 = t.lambda_samples[k], l1 = t.lambda_samples[k + 1];
    const double w = (lambda - l0) / (l1 - l0);
    return (1.0 - w) * tab1d_slice_value(t, k, x) + w * tab1d_slice_value(t, k + 1, x);
}

double tab1d_lambda_derivative(const Tabulated1D& t, double x, double lambda) {
    const size_t k = lambda_interval(t.lambda_samples, lambda);
    const double l0 = t.lambda_samples[k], l1 = t.lambda_samples[k + 1];
    return (tab1d_slice_value(t, k + 1, x) - tab1d_slice_value(t, k, x)) / (l1 - l0);
}

double tab2d_slice_value(const Tabulated2D& t, size_t k, double x, double y) {
    // Bilinear on the stored axes with clamped-end extrapolation, done as two
    // nested 1D interpolations over a temporary column.
    const size_t ny = t.y_axis.size();
    std::vector<double> col(t.x_axis.size());
    // Interpolate in y within each x row first.
    for (size_t i = 0; i < t.x_axis.size(); ++i) {
        const double* row = t.slices[k].data() + i * ny;
        std::vector<double> rv(row, row + ny);
        col[i] = interp_axis(t.y_axis, rv, y);
    }
    return interp_axis(t.x_axis, col, x);
}

double tab2d_value(const Tabulated2D& t, double x, double y, double lambda) {
    const size_t k = lambda_interval(t.lambda_samples, lambda);
    const double l0 = t.lambda_samples[k], l1 = t.lambda_samples[k + 1];
    const double w = (lambda - l0) / (l1 - l0);
    return (1.0 - w) * tab2d_slice_value(t, k, x, y) +
           w * tab2d_slice_value(t, k + 1, x, y);
}

double tab2d_lambda_derivative(const Tabulated2D& t, double x, double y, double lambda) {
    const size_t k = lambda_interval(t.lambda_samples, lambda);
    const double l0 = t.lambda_samples[k], l1 = t.lambda_samples[k + 1];
    return (tab2d_slice_value(t, k + 1, x, y) - tab2d_slice_value(t, k, x, y)) /
           (l1 - l0);
}

} // namespace

double Potential1D::value_extended(double x, double lambda) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ShiftedHarmonic>) {
                const double u = x - lambda * f.x0;
                return 0.5 * u * u;
            } else if constexpr (std::is_same_v<T, ShiftedHarmonicQuartic>) {
                const double u = x - lambda * f.x0;
                return 0.5 * u * u + 0.25 * f.eta * u * u * u * u;
            } else if constexpr (std::is_same_v<T, DoubleWell>) {
                const double ax = std::abs(x);
                if (ax > lambda * f.d / 4.0) {
                    const double u = ax - lambda * f.d / 2.0;
                    return 0.5 * u * u;
                }
                const double ld = lambda * f.d;
                return 0.5 * (ld * ld / 8.0 - x * x);
            } else if constexpr (std::is_same_v<T, ThreeWire>) {
                return three_wire_value(f.spec, f.height, x, lambda);
            } else {
                return tab1d_value(f, x, lambda);
            }
        },
        kind_);
}

double Potential1D::lambda_derivative_extended(double x, double lambda) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ShiftedHarmonic>) {
                return -f.x0 * (x - lambda * f.x0);
            } else if constexpr (std::is_same_v<T, ShiftedHarmonicQuartic>) {
                const double u = x - lambda * f.x0;
                return -f.x0 * (u + f.eta * u * u * u);
            } else if constexpr (std::is_same_v<T, DoubleWell>) {
                const double ax = std::abs(x);
                if (ax > lambda * f.d / 4.0)
                    return -0.5 * f.d * (ax - lambda * f.d / 2.0);
                return lambda * f.d * f.d / 8.0;
            } else if constexpr (std::is_same_v<T, ThreeWire>) {
                return three_wire_lambda_derivative(f.spec, f.height, x, lambda);
            } else {
                return tab1d_lambda_derivative(f, x, lambda);
            }
        },
        kind_);
}

double Potential1D::value(double x, double lambda) const {
    return value_extended(x, checked_lambda(lambda));
}

double Potential1D::lambda_derivative(double x, double lambda) const {
    return lambda_derivative_extended(x, checked_lambda(lambda));
}

std::string Potential1D::kind_name() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ShiftedHarmonic>) return "shifted_harmonic";
            else if constexpr (std::is_same_v<T, ShiftedHarmonicQuartic>)
                return "shifted_harmonic_quartic";
            else if constexpr (std::is_same_v<T, DoubleWell>) return "double_well";
            else if constexpr (std::is_same_v<T, ThreeWire>) return "three_wire_trap";
            else return "tabulated";
        },
        kind_);
}

double potential_minimum(const Potential1D& family, const Grid1D& grid, double lambda) {
    double v0 = family.value_extended(grid.x(0), lambda);
    for (int i = 1; i < grid.n_x; ++i)
        v0 = std::min(v0, family.value_extended(grid.x(i), lambda));
    return v0;
}

OffsetSplit split_offset(const Potential1D& family, const Grid1D& grid, double lambda) {
    return OffsetSplit{potential_minimum(family, grid, lambda), &family, lambda};
}

double three_wire_potential(const ThreeWireTrapSpec& spec, double x, double lambda) {
    const double h = spec.height >= 0.0 ? spec.height : three_wire_trap_height(spec);
    return three_wire_value(spec, h, x, lambda);
}

double Potential2D::value_extended(double x, double y, double lambda) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SeparablePotential2D>) {
                return f.vx.value_extended(x, lambda) +
                       f.uy.value_extended(y, f.uy_lambda);
            } else {
                return tab2d_value(f, x, y, lambda);
            }
        },
        kind_);
}

double Potential2D::lambda_derivative_extended(double x, double y, double lambda) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SeparablePotential2D>) {
                (void)y;
                return f.vx.lambda_derivative_extended(x, lambda);
            } else {
                return tab2d_lambda_derivative(f, x, y, lambda);
            }
        },
        kind_);
}

} // namespace gpeoct
