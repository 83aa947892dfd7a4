#pragma once

#include <complex>

#include <Eigen/Dense>

// The closed pair of driven, dipole-coupled two-level atoms reduces to a
// linear system S'(t) = M S(t) + b for the fifteen operator expectation
// values listed below (slow rotating-frame variables).  This module builds
// M, b for a configured pair and solves for steady states and propagation.
namespace photonstat {

using Cplx = std::complex<double>;
using Matrix15c = Eigen::Matrix<Cplx, 15, 15>;
using Vector15c = Eigen::Vector<Cplx, 15>;

// Component ordering of the state vector (0-based index, operator meaning):
//   0  <s1+>            1  <s1->            2  <s2+>            3  <s2->
//   4  <s1+ s1->        5  <s2+ s2->        6  <s1+ s2->        7  <s2+ s1->
//   8  <s1+ s2+>        9  <s1- s2->       10  <s1+ s1- s2->   11  <s1+ s2+ s1->
//  12  <s2+ s1- s2->   13  <s1+ s2+ s2->   14  <s1+ s2+ s1- s2->
// where si+/si- raise/lower atom i.  Conventional 1-based names S1..S15 are
// used in comments and diagnostics.
namespace sidx {
inline constexpr int s1 = 0, s2 = 1, s3 = 2, s4 = 3, s5 = 4, s6 = 5, s7 = 6,
                     s8 = 7, s9 = 8, s10 = 9, s11 = 10, s12 = 11, s13 = 12,
                     s14 = 13, s15 = 14;
}

using StateVector = Vector15c;

struct PairConfig {
  double delta1 = 0.0; // laser detuning seen by atom 1, Gamma units
  double delta2 = 0.0;
  Cplx omega1{0.0, 0.0}; // complex Rabi drive of atom 1, Gamma units
  Cplx omega2{0.0, 0.0};
  double gamma12 = 0.0; // collective damping, |gamma12| <= 1
  double g12 = 0.0;     // dipole-dipole coupling, Gamma units
};

struct CoefficientSystem {
  Matrix15c m;
  Vector15c b;
};

// Throws std::invalid_argument on non-finite fields or |gamma12| > 1 + 1e-9.
void validate_config(const PairConfig& cfg);

// Transcribes the fifteen equations of motion.  The drive enters only the
// first four components of b.  Validates cfg first.
CoefficientSystem build_system(const PairConfig& cfg);

// S_ss = -M^{-1} b with residual |M S_ss + b|_inf checked below 1e-10.
// Throws std::runtime_error if M is numerically singular or the residual
// check fails.
StateVector steady_state(const CoefficientSystem& sys);

// S(t) = S_ss + exp(M t) (s0 - S_ss).  Throws std::invalid_argument for
// t < 0 and std::runtime_error if the exponential cannot be certified.
StateVector propagate(const CoefficientSystem& sys, const StateVector& s0, double t);

// max Re(eigenvalue of M); < 0 for every damped (physical) configuration.
double spectral_abscissa(const CoefficientSystem& sys);

// Reusable action of exp(M t): eigendecomposition fast path when the
// decomposition reconstructs M accurately, otherwise scaling-and-squaring
// per call.  Immutable after construction; safe to share across threads.
class Propagator {
public:
  explicit Propagator(const CoefficientSystem& sys);

  Vector15c apply(const Vector15c& v, double t) const;
  bool using_eigenbasis() const { return eigen_ok_; }

  // Coefficients for fast repeated evaluation of one output component:
  // component(out, v, t) = sum_m coeff[m] * exp(lambda[m] * t) with
  // coeff = V(out, :) .* (V^{-1} v).  Only valid on the eigen path.
  Vector15c component_coefficients(int out_index, const Vector15c& v) const;
  const Vector15c& eigenvalues() const { return eigvals_; }

private:
  Matrix15c m_;
  Matrix15c v_, vinv_;
  Vector15c eigvals_;
  bool eigen_ok_ = false;
};

} // namespace photonstat
