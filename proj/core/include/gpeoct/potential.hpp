#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gpeoct/errors.hpp"
#include "gpeoct/grid.hpp"
#include "gpeoct/units.hpp"

namespace gpeoct {

// ---------------------------------------------------------------------------
// Lambda-parameterized 1D confinement families. All families are immutable
// after construction and evaluation is pure, so they are safe to share
// between threads.
// ---------------------------------------------------------------------------

/// V(x, lambda) = 1/2 (x - lambda x0)^2, minimum at lambda x0.
struct ShiftedHarmonic {
    double x0 = 5.0;
};

/// Shifted harmonic with a quartic perturbation eta (x - lambda x0)^4 / 4.
struct ShiftedHarmonicQuartic {
    double x0 = 5.0;
    double eta = 0.2;
};

/// Single well at lambda = 0 morphing into a double well with interwell
/// distance d at lambda = 1:
///   V = 1/2 (|x| - lambda d / 2)^2        for |x| > lambda d / 4,
///   V = 1/2 ((lambda d)^2 / 8 - x^2)      otherwise.
/// Continuous with continuous first derivative at the matching points.
struct DoubleWell {
    double d = 4.0;
};

/// Three parallel wires along y on a chip surface, evaluated along x at a
/// fixed height above the surface. The outer pair at +/- wire_spacing
/// carries current_ext (in +y), the center wire carries current_c (in -y).
/// A uniform bias field bias_field_y lies along the wires. The confinement
/// is V = m_F g_F mu_B |B|.
struct ThreeWireTrapSpec {
    double wire_spacing = 20.0;       // um
    double bias_field_y = 30.0;       // gauss
    double current_ext_base = 140.0;  // mA
    double current_ext_slope = 2.91;  // mA
    double current_c_base = 0.25;     // mA
    double current_c_slope = 4.4;     // mA
    double moment_mu_b = 1.0;         // m_F g_F mu_B in units of mu_B (87Rb, m_F = 2)
    double height = -1.0;             // um; negative requests automatic placement

    double exterior_current(double lambda) const {
        return current_ext_base + lambda * current_ext_slope;
    }
    double center_current(double lambda) const {
        return current_c_base + lambda * current_c_slope;
    }
};

struct ThreeWire {
    ThreeWireTrapSpec spec;
    double height = 0.0; // resolved evaluation height, um

    explicit ThreeWire(const ThreeWireTrapSpec& s);
};

/// Height at which |B(x=0)| is minimal for lambda = 0; used when the spec
/// does not fix the evaluation height.
double three_wire_trap_height(const ThreeWireTrapSpec& spec);

/// Potential samples supplied externally, one spatial slice per
/// lambda-sample; linear interpolation in lambda between slices.
struct Tabulated1D {
    std::vector<double> lambda_samples;          // strictly increasing, 0 .. 1
    std::vector<double> x_axis;                  // grid the slices live on
    std::vector<std::vector<double>> slices;     // [sample][point]

    Tabulated1D(std::vector<double> lambdas, std::vector<double> xs,
                std::vector<std::vector<double>> values);
};

class Potential1D {
public:
    using Kind = std::variant<ShiftedHarmonic, ShiftedHarmonicQuartic, DoubleWell,
                              ThreeWire, Tabulated1D>;

    explicit Potential1D(Kind kind) : kind_(std::move(kind)) {}

    /// V(x, lambda) with the contract lambda in [0, 1]; values within 1e-9
    /// outside are clamped, anything further is a domain error.
    double value(double x, double lambda) const;

    /// dV/dlambda under the same contract. Piecewise families use the same
    /// branch selection as value.
    double lambda_derivative(double x, double lambda) const;

    /// Evaluation without the [0, 1] contract. Propagation and optimization
    /// call this: optimized controls are free to leave the unit interval,
    /// and the analytic families extend naturally. Tabulated families
    /// extrapolate with their end-interval slopes.
    double value_extended(double x, double lambda) const;
    double lambda_derivative_extended(double x, double lambda) const;

    const Kind& kind() const { return kind_; }
    std::string kind_name() const;

private:
    Kind kind_;
};

/// Offset decomposition V = V0(lambda) + Vt with min Vt = 0 over the grid.
/// Subtracting V0 changes the propagated state by the global phase
/// Phi(t) = integral of V0(lambda(s)) ds only.
struct OffsetSplit {
    double v0 = 0.0;
    const Potential1D* family = nullptr;
    double lambda = 0.0;

    double shifted_value(double x) const {
        return family->value_extended(x, lambda) - v0;
    }
};

OffsetSplit split_offset(const Potential1D& family, const Grid1D& grid, double lambda);

/// Minimum of V(., lambda) over the grid points.
double potential_minimum(const Potential1D& family, const Grid1D& grid, double lambda);

/// Free-standing three-wire evaluation (same model as the ThreeWire family).
double three_wire_potential(const ThreeWireTrapSpec& spec, double x, double lambda);

// ---------------------------------------------------------------------------
// 2D potentials for the split-operator solver.
// ---------------------------------------------------------------------------

/// V(x, y, lambda) = Vx(x, lambda) + U(y) with the control acting on x only;
/// U is a 1D family frozen at a fixed lambda.
struct SeparablePotential2D {
    Potential1D vx;
    Potential1D uy;
    double uy_lambda = 0.0;
};

struct Tabulated2D {
    std::vector<double> lambda_samples;
    std::vector<double> x_axis, y_axis;
    std::vector<std::vector<double>> slices; // [sample][i * n_y + j]

    Tabulated2D(std::vector<double> lambdas, std::vector<double> xs,
                std::vector<double> ys, std::vector<std::vector<double>> values);
};

class Potential2D {
public:
    using Kind = std::variant<SeparablePotential2D, Tabulated2D>;

    explicit Potential2D(Kind kind) : kind_(std::move(kind)) {}

    double value_extended(double x, double y, double lambda) const;
    double lambda_derivative_extended(double x, double y, double lambda) const;

    const Kind& kind() const { return kind_; }

private:
    Kind kind_;
};

} // namespace gpeoct
