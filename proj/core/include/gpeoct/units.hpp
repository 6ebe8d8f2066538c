#pragma once

namespace gpeoct::units {

// Dimensionless unit system: hbar = 1, atom mass = 1, lengths in micrometers.
// For 87Rb this makes the time unit 1.37 ms and the energy unit 5.58 nK.

inline constexpr double hbar_si = 1.054571817e-34;        // J s
inline constexpr double atomic_mass_unit_si = 1.66053906660e-27; // kg
inline constexpr double mass_rb87_si = 86.909180531 * atomic_mass_unit_si; // kg
inline constexpr double bohr_magneton_si = 9.2740100783e-24; // J/T
inline constexpr double micrometer_si = 1e-6;             // m

/// Energy unit hbar^2 / (m L^2) for 87Rb and L = 1 um, in joules.
inline constexpr double energy_unit_si =
    hbar_si * hbar_si / (mass_rb87_si * micrometer_si * micrometer_si);

/// One Bohr magneton times one gauss, in dimensionless energy units.
inline constexpr double mu_b_gauss = bohr_magneton_si * 1e-4 / energy_unit_si;

/// Milliseconds per dimensionless time unit for 87Rb. The CLI presets quote
/// transfer times in ms and divide by this.
inline constexpr double ms_per_time_unit = 1.37;

inline constexpr double ms_to_time(double ms) { return ms / ms_per_time_unit; }

/// Field magnitude of an infinite straight wire, in gauss, with the current
/// in mA and the distance in micrometers: mu0 I / (2 pi r).
inline constexpr double wire_field_gauss(double current_ma, double distance_um) {
    return 2.0 * current_ma / distance_um;
}

} // namespace gpeoct::units
