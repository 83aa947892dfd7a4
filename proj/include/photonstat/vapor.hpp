#pragma once

#include "photonstat/constants.hpp"

// Thermal rubidium vapor bulk properties: saturated vapor pressure, number
// density, nearest-neighbor spacing statistics, and the sampling-box side
// length that reproduces the mean pair spacing.  Lengths are in units of the
// optical wavelength unless stated otherwise.
namespace photonstat {

// Saturated vapor pressure over liquid rubidium, log10 p[torr] = 2.881 +
// 4.312 - 4040/T.  Valid for the liquid phase; throws std::domain_error
// outside [313, 961] K (melting/boiling bounds).
double vapor_pressure_torr(double temperature_k);

// Ideal-gas number density in atoms/m^3 from the saturated pressure.
double number_density_m3(double temperature_k);

// Nearest-neighbor distance density 4 pi N r^2 exp(-(4 pi/3) N r^3) for an
// ideal gas; r in wavelength units, N in atoms per cubic wavelength.
double spacing_pdf(double r, double density_per_lambda3);

// Mean spacing approximation (5/9) N^(-1/3), N in atoms per cubic wavelength.
double mean_spacing(double density_per_lambda3);

// Cube side L such that two uniform points in the cube have expected
// distance r_av; L = r_av / 0.6617072 (mean distance in a unit cube).
double box_side(double mean_pair_distance);

// Doppler width of the laser detuning in linewidth units:
// k_L sqrt(k_B T / m) / Gamma for Rb-87.
double doppler_sigma(double temperature_k, double wavelength_m);

struct VaporConditions {
  double temperature_k = 0.0;
  double wavelength_m = 0.0;
  double pressure_torr = 0.0;
  double number_density = 0.0;     // atoms/m^3
  double reduced_density = 0.0;    // atoms per lambda^3
  double mean_spacing_lambda = 0.0;
  double box_side_lambda = 0.0;
  double doppler_sigma_gamma = 0.0;
};

// Bundle of the above for a supported simulation temperature.  Throws
// std::domain_error outside the accepted [320, 500] K range or for a
// non-positive wavelength.
VaporConditions vapor_conditions(double temperature_k,
                                 double wavelength_m = default_wavelength_m);

} // namespace photonstat
