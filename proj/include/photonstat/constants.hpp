#pragma once

#include <numbers>

// Internal unit system (see docs/conventions.md): all rates and inverse times
// are expressed in units of the single-atom coherence decay rate Gamma = 1,
// all lengths in units of the transition wavelength lambda = 1, so the wave
// number is k0 = 2*pi.  The excited-state *population* relaxes at 2*Gamma.
namespace photonstat {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI constants used only at the vapor-model boundary (kelvin -> dimensionless).
inline constexpr double k_boltzmann = 1.380649e-23;       // J/K
inline constexpr double torr_to_pascal = 133.323;         // Pa per torr
inline constexpr double default_wavelength_m = 780.0e-9;  // rubidium D2 line
inline constexpr double gamma_rad_per_s = two_pi * 6.0e6; // natural linewidth
inline constexpr double rb87_mass_kg = 1.443e-25;

// Mean nearest-neighbour spacing prefactor: r_av = (5/9) * N^(-1/3).
inline constexpr double mean_spacing_prefactor = 5.0 / 9.0;
// Mean distance of two uniform points in a unit cube (Robbins constant).
inline constexpr double robbins_constant = 0.6617071822671758;

inline constexpr char version_string[] = "0.1.0";

} // namespace photonstat
