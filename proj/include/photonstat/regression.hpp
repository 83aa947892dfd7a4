#pragma once

#include <array>
#include <optional>
#include <vector>

#include "photonstat/pair_system.hpp"

// Second-order correlation of the total field scattered by one atom pair.
// The two-time average <E-(0) E-(tau) E+(tau) E+(0)> obeys the same linear
// system as the one-time expectation values (quantum regression); only the
// initial conditions differ.  For each emission side the collapsed initial
// vector has exactly three non-zero operator components plus a constant
// weight multiplying the drive term; every other component vanishes
// identically because the collapse operators square to zero.
namespace photonstat {

// Stationary intensity denominators below this are treated as "no emission":
// the correlation is undefined and the numerics unreliable (absolute solver
// accuracy ~1e-10 would dominate).  Pairs this weakly driven are rejected.
inline constexpr double min_denominator = 1e-9;

class PairCorrelator {
public:
  explicit PairCorrelator(const PairConfig& cfg);

  // Unnormalized correlation numerator at delay tau >= 0.  At tau = 0 this
  // equals 4 <s1+ s2+ s1- s2->, bounded by 4, so ensemble sums stay tame.
  double numerator(double tau) const;

  // Stationary denominator 2 (<n1><n2> + |<s1+ s2->|^2), independent of tau.
  double denominator() const { return den_; }

  // numerator(tau) / denominator(); throws std::domain_error when the
  // denominator is below min_denominator.
  double g2(double tau) const;

  const StateVector& steady() const { return ss_; }

private:
  StateVector ss_;
  double den_ = 0.0;

  // Fast path: numerator(tau) = Re[c0 + sum_m coeff_m exp(lambda_m tau)],
  // merging the four emission/readout cases over the shared eigenbasis.
  bool fast_ = false;
  Cplx const_term_{0.0, 0.0};
  Vector15c merged_coeffs_;
  Vector15c eigvals_;

  // Fallback when the drift matrix resists diagonalization.
  std::optional<Propagator> prop_;
  std::array<Vector15c, 4> case_delta_;
  std::array<Cplx, 4> case_const_;
  std::array<int, 4> case_read_;
};

struct G2Series {
  std::vector<double> tau;
  std::vector<double> numerator;
  std::vector<double> g2;
  double denominator = 0.0;
};

// Convenience wrapper: correlator evaluated on a delay grid.
G2Series pair_g2(const PairConfig& cfg, const std::vector<double>& taus);

// n_points delays uniformly spanning [0, tau_max]; n_points >= 2.
std::vector<double> uniform_delays(double tau_max, int n_points);

} // namespace photonstat
