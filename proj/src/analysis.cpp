#include "photonstat/analysis.hpp"

#include <cmath>
#include <sstream>

namespace photonstat {

namespace {

constexpr double kBaselineEps = 1e-3;

void check_grid(const G2Series& series, std::size_t min_samples) {
  if (series.tau.size() != series.g2.size()) {
    throw std::invalid_argument("delay and g2 arrays differ in length");
  }
  if (series.tau.size() < min_samples) {
    std::ostringstream os;
    os << "curve has " << series.tau.size() << " samples; at least "
       << min_samples << " required";
    throw std::invalid_argument(os.str());
  }
  for (std::size_t k = 1; k < series.tau.size(); ++k) {
    if (!(series.tau[k] > series.tau[k - 1])) {
      throw std::invalid_argument("delays must be strictly increasing");
    }
  }
}

// first local maximum above the ripple threshold, or -1 if none
long first_peak_index(const G2Series& series) {
  const std::vector<double>& y = series.g2;
  const long n = static_cast<long>(y.size());
  if (n >= 2 && y[0] > y[1] && y[0] > 1.0 + kBaselineEps) return 0;
  for (long i = 1; i + 1 < n; ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 1.0 + kBaselineEps) {
      return i;
    }
  }
  return -1;
}

} // namespace

double g2_at_zero(const G2Series& series) {
  check_grid(series, 1);
  if (std::abs(series.tau.front()) > 1e-12) {
    throw std::invalid_argument("curve does not include the tau = 0 sample");
  }
  return series.g2.front();
}

double first_peak_fwhm(const G2Series& series) {
  check_grid(series, 100);
  const std::vector<double>& y = series.g2;
  const std::vector<double>& t = series.tau;
  const long n = static_cast<long>(y.size());

  const long p = first_peak_index(series);
  if (p < 0) {
    throw NoPeakError("curve never rises above the baseline by more than 1e-3; "
                      "no correlation peak to measure");
  }
  const double half = 1.0 + (y[p] - 1.0) / 2.0;

  // right flank: first descent through the half height
  double right = -1.0;
  for (long i = p; i + 1 < n; ++i) {
    if (y[i] >= half && y[i + 1] < half) {
      right = t[i] + (half - y[i]) * (t[i + 1] - t[i]) / (y[i + 1] - y[i]);
      break;
    }
  }
  if (right < 0.0) {
    throw UnresolvedPeakError("curve does not descend through the half height "
                              "within the sampled delays");
  }

  // left flank: last ascent through the half height before the peak
  double left = -1.0;
  for (long i = p - 1; i >= 0; --i) {
    if (y[i] < half && y[i + 1] >= half) {
      left = t[i] + (half - y[i]) * (t[i + 1] - t[i]) / (y[i + 1] - y[i]);
      break;
    }
    if (y[i] < half) break; // should be unreachable; guards float ties
  }

  const bool one_sided = left < 0.0;
  const double lo = one_sided ? t[p] : left;
  long inside = 0;
  for (long i = 0; i < n; ++i) {
    if (t[i] >= lo && t[i] <= right) ++inside;
  }
  const long needed = one_sided ? 4 : 8;
  if (inside < needed) {
    std::ostringstream os;
    os << "only " << inside << " samples across the half-height interval; "
       << "grid too coarse to resolve the peak";
    throw UnresolvedPeakError(os.str());
  }
  return one_sided ? 2.0 * (right - t[p]) : right - left;
}

std::vector<double> peak_positions(const G2Series& series) {
  check_grid(series, 1);
  const std::vector<double>& y = series.g2;
  const std::vector<double>& t = series.tau;
  const long n = static_cast<long>(y.size());
  std::vector<double> peaks;
  if (n >= 2 && y[0] > y[1] && y[0] > 1.0 + kBaselineEps) {
    peaks.push_back(t[0]);
  }
  for (long i = 1; i + 1 < n; ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1] && y[i] > 1.0 + kBaselineEps) {
      peaks.push_back(t[i]);
    }
  }
  return peaks;
}

PeakMetrics peak_metrics(const G2Series& series) {
  PeakMetrics m;
  m.g2_zero = g2_at_zero(series);
  const long p = first_peak_index(series);
  if (p >= 0) {
    m.peak_tau = series.tau[static_cast<std::size_t>(p)];
    m.peak_height = series.g2[static_cast<std::size_t>(p)];
  }
  m.fwhm = first_peak_fwhm(series);
  const std::vector<double> peaks = peak_positions(series);
  if (peaks.size() >= 2) {
    m.peak_spacing = (peaks.back() - peaks.front()) /
                     static_cast<double>(peaks.size() - 1);
  }
  return m;
}

} // namespace photonstat
