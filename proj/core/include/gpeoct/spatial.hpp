#pragma once

#include <vector>

#include "gpeoct/minimize.hpp"
#include "gpeoct/oct.hpp"
#include "gpeoct/propagation.hpp"

namespace gpeoct {

/// Space-dependent control lambda(x) over the scattering region, pinned to
/// lambda = 0 at the entry edge and 1 at the exit edge.
struct SpatialControl {
    std::vector<double> values; // one per region column

    SpatialControl() = default;
    explicit SpatialControl(std::vector<double> v) : values(std::move(v)) {
        pin_endpoints();
    }

    static SpatialControl linear(int n_columns);

    void pin_endpoints() {
        if (values.size() < 2)
            throw DimensionError("spatial control needs at least 2 columns");
        values.front() = 0.0;
        values.back() = 1.0;
    }

    int n_columns() const { return static_cast<int>(values.size()); }
};

/// Scattering-type setup: a condensate propagates along x through a
/// transverse channel V(y, lambda(x)) that is static in time; the control is
/// the spatial profile lambda(x) on [region_min, region_max]. Upstream
/// columns take lambda = 0, downstream columns lambda = 1.
struct SpatialOctProblem {
    Grid2D grid;
    const Potential1D* transverse = nullptr; // family in y, lambda-parameterized
    double region_min = 0.0;
    double region_max = 1.0;

    Wave2D initial_state;
    Wave2D desired_state;

    double gamma = 1e-3;
    Optimizer optimizer = Optimizer::bfgs;
    int max_iterations = 500;
    double gradient_tolerance = 1e-6;
    double cost_target = 1e-4;

    /// Indices of the grid columns inside [region_min, region_max].
    std::vector<int> region_columns() const;
};

/// J = 1/2 (1 - |<psi_d|psi(T)>|^2) + (gamma/2) integral (dlambda/dx)^2 dx.
CostBreakdown evaluate_cost_spatial(const SpatialOctProblem& problem,
                                    const SpatialControl& control);

/// Gradient density over the region columns: for interior columns,
///   g_i = -gamma lambda''_i - Re integral dt dy psi* (dV/dlambda) p |_{x_i},
/// endpoints pinned. The nodal derivative of the discrete cost is g_i * dx.
std::vector<double> compute_gradient_spatial(const SpatialOctProblem& problem,
                                             const SpatialControl& control);

OctReport optimize_spatial(const SpatialOctProblem& problem,
                           const SpatialControl& initial);

} // namespace gpeoct
