#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "photonstat/regression.hpp"

// Scalar observables of a sampled g2 curve: zero-delay value, first-peak
// width, and the spacing of the correlation revivals.  Pure functions; the
// curve is never modified or smoothed.
namespace photonstat {

struct NoPeakError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnresolvedPeakError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PeakMetrics {
  double g2_zero = 0.0;
  double peak_tau = 0.0;
  double peak_height = 0.0;
  double fwhm = 0.0;
  std::optional<double> peak_spacing; // mean gap between maxima, if >= 2
};

// g2 at tau = 0; requires the grid to start at zero.
double g2_at_zero(const G2Series& series);

// Full width of the first correlation peak at half height above the
// asymptote: the first local maximum (tau = 0 counts when the curve starts
// by decreasing) with height above 1 + 1e-3 defines h = 1 + (peak - 1)/2;
// the width is the distance between linearly interpolated crossings of h on
// both flanks, or twice the right half-width when no left flank exists.
// Throws NoPeakError when no qualifying maximum exists, UnresolvedPeakError
// when the grid places fewer than 8 samples across the half-height interval
// (4 for a one-sided peak) or never descends through h, and
// std::invalid_argument for grids with fewer than 100 samples.
double first_peak_fwhm(const G2Series& series);

// Delays of all local maxima above 1 + 1e-3, strictly increasing.  The
// boundary point tau[0] qualifies when the curve starts by decreasing; the
// final sample never qualifies (its right side is unobserved).
std::vector<double> peak_positions(const G2Series& series);

// Convenience bundle of the above.
PeakMetrics peak_metrics(const G2Series& series);

} // namespace photonstat
