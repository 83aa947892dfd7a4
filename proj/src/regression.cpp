#include "photonstat/regression.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace photonstat {

namespace {

struct RegressionCase {
  // initial vector: components[k] of the collapsed state copy steady-state
  // components source[k]; everything else is zero
  std::array<int, 3> components;
  std::array<int, 3> source;
  int weight;  // steady-state component multiplying the drive term
  int readout; // component read after evolving for tau
};

// Emission side (i), readout side (j) for the four retained terms of
// <E-(0) E-(tau) E+(tau) E+(0)>; indices are 0-based into the state vector.
constexpr std::array<RegressionCase, 4> kCases = {{
    // i=1, j=2: read <s2+ s1->(tau)
    {{1, 2, 7}, {10, 13, 14}, 6, 7},
    // i=2, j=1: read <s1+ s2->(tau)
    {{0, 3, 6}, {11, 12, 14}, 7, 6},
    // i=1, j=1: read <s2+ s2->(tau)
    {{2, 3, 5}, {11, 10, 14}, 4, 5},
    // i=2, j=2: read <s1+ s1->(tau)
    {{0, 1, 4}, {13, 12, 14}, 5, 4},
}};

} // namespace

PairCorrelator::PairCorrelator(const PairConfig& cfg) {
  const CoefficientSystem sys = build_system(cfg);
  ss_ = steady_state(sys);

  den_ = 2.0 * std::real(ss_(sidx::s5) * ss_(sidx::s6) +
                         ss_(sidx::s7) * std::conj(ss_(sidx::s7)));

  Propagator prop(sys);
  fast_ = prop.using_eigenbasis();

  const_term_ = Cplx{0.0, 0.0};
  if (fast_) merged_coeffs_.setZero();

  for (std::size_t c = 0; c < kCases.size(); ++c) {
    const RegressionCase& rc = kCases[c];
    Vector15c v0 = Vector15c::Zero();
    for (int k = 0; k < 3; ++k) v0(rc.components[k]) = ss_(rc.source[k]);
    const Cplx weight = ss_(rc.weight);
    const Vector15c delta = v0 - weight * ss_;
    const_term_ += weight * ss_(rc.readout);
    if (fast_) {
      merged_coeffs_ += prop.component_coefficients(rc.readout, delta);
    } else {
      case_delta_[c] = delta;
      case_const_[c] = weight * ss_(rc.readout);
      case_read_[c] = rc.readout;
    }
  }
  if (fast_) {
    eigvals_ = prop.eigenvalues();
  } else {
    prop_.emplace(std::move(prop));
  }
}

double PairCorrelator::numerator(double tau) const {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("correlation delay must be non-negative");
  }
  if (fast_) {
    Cplx acc = const_term_;
    for (int k = 0; k < 15; ++k) {
      acc += merged_coeffs_(k) * std::exp(eigvals_(k) * tau);
    }
    return acc.real();
  }
  Cplx acc{0.0, 0.0};
  for (std::size_t c = 0; c < kCases.size(); ++c) {
    const Vector15c evolved = prop_->apply(case_delta_[c], tau);
    acc += case_const_[c] + evolved(case_read_[c]);
  }
  return acc.real();
}

double PairCorrelator::g2(double tau) const {
  if (den_ < min_denominator) {
    std::ostringstream os;
    os << "stationary emission intensity " << den_
       << " is below " << min_denominator
       << "; the normalized correlation is undefined (pair effectively undriven)";
    throw std::domain_error(os.str());
  }
  return numerator(tau) / den_;
}

G2Series pair_g2(const PairConfig& cfg, const std::vector<double>& taus) {
  const PairCorrelator corr(cfg);
  G2Series out;
  out.tau = taus;
  out.denominator = corr.denominator();
  out.numerator.reserve(taus.size());
  out.g2.reserve(taus.size());
  for (double t : taus) {
    out.numerator.push_back(corr.numerator(t));
    out.g2.push_back(corr.g2(t));
  }
  return out;
}

std::vector<double> uniform_delays(double tau_max, int n_points) {
  if (!(tau_max > 0.0) || n_points < 2) {
    throw std::invalid_argument("delay grid requires tau_max > 0 and at least "
                                "two points");
  }
  std::vector<double> taus(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    taus[static_cast<std::size_t>(k)] =
        tau_max * static_cast<double>(k) / static_cast<double>(n_points - 1);
  }
  return taus;
}

} // namespace photonstat
