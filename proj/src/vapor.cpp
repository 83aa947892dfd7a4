#include "photonstat/vapor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "photonstat/constants.hpp"

namespace photonstat {

namespace {

void check_liquid_range(double temperature_k) {
  if (!(temperature_k >= 313.0 && temperature_k <= 961.0)) {
    std::ostringstream os;
    os << "temperature " << temperature_k
       << " K is outside the liquid-rubidium validity range [313, 961] K";
    throw std::domain_error(os.str());
  }
}

} // namespace

double vapor_pressure_torr(double temperature_k) {
  check_liquid_range(temperature_k);
  return std::pow(10.0, 2.881 + 4.312 - 4040.0 / temperature_k);
}

double number_density_m3(double temperature_k) {
  const double pressure_pa = torr_to_pascal * vapor_pressure_torr(temperature_k);
  return pressure_pa / (k_boltzmann * temperature_k);
}

double spacing_pdf(double r, double density_per_lambda3) {
  if (r < 0.0) throw std::domain_error("spacing must be non-negative");
  if (!(density_per_lambda3 > 0.0)) {
    throw std::domain_error("density must be positive");
  }
  const double n = density_per_lambda3;
  return 4.0 * pi * n * r * r * std::exp(-(4.0 * pi / 3.0) * n * r * r * r);
}

double mean_spacing(double density_per_lambda3) {
  if (!(density_per_lambda3 > 0.0)) {
    throw std::domain_error("density must be positive");
  }
  return mean_spacing_prefactor * std::pow(density_per_lambda3, -1.0 / 3.0);
}

double box_side(double mean_pair_distance) {
  if (!(mean_pair_distance > 0.0)) {
    throw std::domain_error("mean pair distance must be positive");
  }
  return mean_pair_distance / robbins_constant;
}

double doppler_sigma(double temperature_k, double wavelength_m) {
  if (!(temperature_k > 0.0)) {
    throw std::domain_error("temperature must be positive");
  }
  if (!(wavelength_m > 0.0)) {
    throw std::domain_error("wavelength must be positive");
  }
  const double k_laser = two_pi / wavelength_m;
  const double thermal_speed =
      std::sqrt(k_boltzmann * temperature_k / rb87_mass_kg);
  return k_laser * thermal_speed / gamma_rad_per_s;
}

VaporConditions vapor_conditions(double temperature_k, double wavelength_m) {
  if (!(temperature_k >= 320.0 && temperature_k <= 500.0)) {
    std::ostringstream os;
    os << "temperature " << temperature_k
       << " K is outside the supported [320, 500] K range";
    throw std::domain_error(os.str());
  }
  if (!(wavelength_m > 0.0)) {
    throw std::domain_error("wavelength must be positive");
  }
  VaporConditions v;
  v.temperature_k = temperature_k;
  v.wavelength_m = wavelength_m;
  v.pressure_torr = vapor_pressure_torr(temperature_k);
  v.number_density = number_density_m3(temperature_k);
  const double lambda3 = wavelength_m * wavelength_m * wavelength_m;
  v.reduced_density = v.number_density * lambda3;
  v.mean_spacing_lambda = mean_spacing(v.reduced_density);
  v.box_side_lambda = box_side(v.mean_spacing_lambda);
  v.doppler_sigma_gamma = doppler_sigma(temperature_k, wavelength_m);
  return v;
}

} // namespace photonstat
