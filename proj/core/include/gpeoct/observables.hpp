#pragma once

#include "gpeoct/potential.hpp"
#include "gpeoct/wavefield.hpp"

namespace gpeoct {

struct EnergyBreakdown {
    double kinetic = 0.0;
    double potential = 0.0;
    double interaction = 0.0; // (g/2) integral |psi|^4

    double total() const { return kinetic + potential + interaction; }
    /// mu = <T> + <V> + g integral |psi|^4
    double chemical_potential() const { return kinetic + potential + 2.0 * interaction; }
};

EnergyBreakdown energy_breakdown(const Wave1D& psi, const Potential1D& potential,
                                 double lambda, double g);
EnergyBreakdown energy_breakdown(const Wave2D& psi, const Potential2D& potential,
                                 double lambda, double g);

/// Diagnostic record of a 1D state: norm, first and second position and
/// momentum moments (momentum through spectral space) and the mean-field
/// energy <T> + <V> + (g/2)|psi|^4.
struct Observables {
    double norm = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double std_x = 0.0;
    double std_p = 0.0;
    double energy = 0.0;
};

Observables observables(const Wave1D& psi, const Potential1D& potential,
                        double lambda, double g);

} // namespace gpeoct
