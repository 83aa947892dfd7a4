#pragma once

#include <Eigen/Dense>

// Collective damping gamma12 and coherent dipole-dipole coupling g12 for a
// pair of identical two-level dipoles, as functions of the scaled separation
// x = k0*r12 and the angle between the common dipole axis and the separation.
// Units: Gamma = 1, lambda = 1 (so x = 2*pi*|r12| with |r12| in lambda).
namespace photonstat {

struct DipoleGeometry {
  Eigen::Vector3d r12;         // separation of atom 1 from atom 2, lambda units
  Eigen::Vector3d dipole_axis; // common transition-dipole orientation, |e_d| = 1
};

struct CollectiveParams {
  double gamma12;   // collective damping, Gamma units
  double g12;       // dipole-dipole coupling, Gamma units
  double x;         // k0 * r12
  double cos_theta; // e_d . e_r12
};

// (3/2) * [ (1-c^2) sin(x)/x + (1-3c^2) (cos(x)/x^2 - sin(x)/x^3) ].
// The bracketed near-field difference cancels catastrophically for small x;
// a Taylor expansion takes over below x = 0.1 so the x->0 limit (-> 1) is
// accurate to full precision.  Throws std::domain_error for x <= 0.
double damping_gamma12(double x, double cos_theta);

// (3/2) * [ -(1-c^2) cos(x)/x + (1-3c^2) (sin(x)/x^2 + cos(x)/x^3) ].
// Throws std::domain_error for x <= 0.
double coupling_g12(double x, double cos_theta);

// Independent oracle for damping_gamma12: evaluates the solid-angle integral
// (3/2) * Integral dOmega_k/(4*pi) * (1 - (e_d.e_k)^2) * exp(i k.r)
// by adaptive quadrature, verifying convergence by tolerance halving and that
// the imaginary part vanishes below 1e-10.  Throws std::runtime_error if the
// requested absolute tolerance cannot be certified.
double f_quadrature(double x, double cos_theta, double abs_tol = 1e-10);

// Composes the closed forms from an explicit geometry.  Throws
// std::domain_error for zero separation or a non-unit dipole axis.
CollectiveParams collective_params(const DipoleGeometry& geom);

} // namespace photonstat
