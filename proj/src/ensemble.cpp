#include "photonstat/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "photonstat/collective.hpp"
#include "photonstat/constants.hpp"
#include "photonstat/regression.hpp"

namespace photonstat {

namespace {

constexpr double kMaxFailureFraction = 0.01;

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

DistributionSummary summarize(std::vector<double> values) {
  DistributionSummary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.min = values.front();
  s.max = values.back();
  s.q05 = quantile_sorted(values, 0.05);
  s.q25 = quantile_sorted(values, 0.25);
  s.q50 = quantile_sorted(values, 0.50);
  s.q75 = quantile_sorted(values, 0.75);
  s.q95 = quantile_sorted(values, 0.95);
  return s;
}

struct PairOutcome {
  bool ok = false;
  std::string error;
  std::vector<double> numerator;
  double denominator = 0.0;
  double separation = 0.0;
  double delta1 = 0.0, delta2 = 0.0;
};

} // namespace

void validate_spec(const EnsembleSpec& spec) {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("ensemble spec invalid: " + msg);
  };
  if (!std::isfinite(spec.temperature_k)) fail("temperature is not finite");
  if (!std::isfinite(spec.delta_av)) fail("delta_av is not finite");
  if (!(spec.omega_r >= 0.0) || !std::isfinite(spec.omega_r)) {
    fail("omega_r must be a finite non-negative real");
  }
  if (spec.n_pairs < 1) fail("n_pairs must be at least 1");
  if (!(spec.min_separation > 0.0)) fail("min_separation must be positive");
  if (!(spec.detuning_halfwidth > 0.0)) fail("detuning_halfwidth must be positive");
  if (spec.doppler_sigma_override &&
      (!(*spec.doppler_sigma_override >= 0.0) ||
       !std::isfinite(*spec.doppler_sigma_override))) {
    fail("doppler_sigma override must be a finite non-negative real");
  }
  if (!(spec.tau_max > 0.0)) fail("tau_max must be positive");
  if (spec.tau_points < 2) fail("tau_points must be at least 2");
}

namespace {

// The rejection sampler below can only terminate if some pair of points in
// the box is at least min_separation apart.
void require_feasible_floor(const EnsembleSpec& spec,
                            const VaporConditions& vapor) {
  const double diagonal = vapor.box_side_lambda * std::sqrt(3.0);
  if (spec.min_separation >= diagonal) {
    std::ostringstream os;
    os << "min_separation " << spec.min_separation
       << " is not smaller than the box diagonal " << diagonal
       << "; placement rejection cannot terminate";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

PairSample sample_pair(RngStream& rng, const EnsembleSpec& spec,
                       const VaporConditions& vapor) {
  const double side = vapor.box_side_lambda;
  require_feasible_floor(spec, vapor);

  PairSample s;
  const int max_tries = 1000000;
  int tries = 0;
  do {
    if (++tries > max_tries) {
      throw std::runtime_error("pair placement rejection did not terminate");
    }
    // laser propagates along +x; transverse coordinates are centered
    s.r1 = {rng.uniform(0.0, side), rng.uniform(-side / 2.0, side / 2.0),
            rng.uniform(-side / 2.0, side / 2.0)};
    s.r2 = {rng.uniform(0.0, side), rng.uniform(-side / 2.0, side / 2.0),
            rng.uniform(-side / 2.0, side / 2.0)};
    s.separation = (s.r1 - s.r2).norm();
  } while (s.separation < spec.min_separation);

  const double sigma = spec.doppler_sigma_override
                           ? *spec.doppler_sigma_override
                           : vapor.doppler_sigma_gamma;
  const double lo = spec.delta_av - spec.detuning_halfwidth;
  const double hi = spec.delta_av + spec.detuning_halfwidth;
  s.delta1 = rng.truncated_normal(spec.delta_av, sigma, lo, hi);
  s.delta2 = rng.truncated_normal(spec.delta_av, sigma, lo, hi);

  s.dipole_axis = (spec.dipole_policy == DipolePolicy::fixed_z)
                      ? Eigen::Vector3d(0.0, 0.0, 1.0)
                      : rng.isotropic_unit();

  const CollectiveParams cp =
      collective_params(DipoleGeometry{s.r2 - s.r1, s.dipole_axis});

  s.cfg.delta1 = s.delta1;
  s.cfg.delta2 = s.delta2;
  // drive phase accumulated along the propagation axis, k_L = 2 pi / lambda
  s.cfg.omega1 = spec.omega_r * std::exp(Cplx{0.0, -two_pi * s.r1.x()});
  s.cfg.omega2 = spec.omega_r * std::exp(Cplx{0.0, -two_pi * s.r2.x()});
  s.cfg.gamma12 = cp.gamma12;
  s.cfg.g12 = cp.g12;
  return s;
}

EnsembleResult ensemble_g2(const EnsembleSpec& spec) {
  validate_spec(spec);
  const VaporConditions vapor =
      vapor_conditions(spec.temperature_k, spec.wavelength_m);
  require_feasible_floor(spec, vapor);
  const std::vector<double> taus = uniform_delays(spec.tau_max, spec.tau_points);
  const int n = spec.n_pairs;
  const std::size_t n_tau = taus.size();

  std::vector<PairOutcome> outcomes(static_cast<std::size_t>(n));
  std::atomic<int> next{0};

  auto work = [&]() {
    for (;;) {
      const int k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= n) break;
      PairOutcome& out = outcomes[static_cast<std::size_t>(k)];
      try {
        RngStream rng(spec.seed, static_cast<std::uint64_t>(k));
        const PairSample sample = sample_pair(rng, spec, vapor);
        out.separation = sample.separation;
        out.delta1 = sample.delta1;
        out.delta2 = sample.delta2;
        const PairCorrelator corr(sample.cfg);
        out.denominator = corr.denominator();
        if (spec.averaging_mode == AveragingMode::per_pair_g2 &&
            out.denominator < min_denominator) {
          std::ostringstream os;
          os << "stationary emission intensity " << out.denominator
             << " too weak for per-pair normalization";
          throw std::domain_error(os.str());
        }
        out.numerator.resize(n_tau);
        for (std::size_t t = 0; t < n_tau; ++t) {
          out.numerator[t] = corr.numerator(taus[t]);
        }
        if (out.numerator[0] < -1e-9) {
          throw std::runtime_error("negative zero-delay correlation; "
                                   "pair solve is unreliable");
        }
        out.ok = true;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };

  int workers = spec.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min(workers, n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  // reduction in pair-index order: bitwise identical at any worker count
  EnsembleResult res;
  res.tau = taus;
  res.n_pairs_requested = n;
  res.spec = spec;
  res.vapor = vapor;
  res.rng_algorithm = RngStream::algorithm_id();

  for (int k = 0; k < n; ++k) {
    if (!outcomes[static_cast<std::size_t>(k)].ok) {
      res.failures.push_back({k, outcomes[static_cast<std::size_t>(k)].error});
    }
  }
  if (static_cast<double>(res.failures.size()) >
      kMaxFailureFraction * static_cast<double>(n)) {
    std::ostringstream os;
    os << res.failures.size() << " of " << n
       << " pairs failed (limit 1%); first failure (pair "
       << res.failures.front().pair_index
       << "): " << res.failures.front().message;
    throw std::runtime_error(os.str());
  }
  res.n_pairs_used = n - static_cast<int>(res.failures.size());
  const double m = static_cast<double>(res.n_pairs_used);

  res.g2_mean.assign(n_tau, 0.0);
  res.g2_stderr.assign(n_tau, 0.0);

  if (spec.averaging_mode == AveragingMode::per_pair_g2) {
    for (std::size_t t = 0; t < n_tau; ++t) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const PairOutcome& o = outcomes[static_cast<std::size_t>(k)];
        if (o.ok) sum += o.numerator[t] / o.denominator;
      }
      const double mean = sum / m;
      double sq = 0.0;
      for (int k = 0; k < n; ++k) {
        const PairOutcome& o = outcomes[static_cast<std::size_t>(k)];
        if (!o.ok) continue;
        const double d = o.numerator[t] / o.denominator - mean;
        sq += d * d;
      }
      res.g2_mean[t] = mean;
      res.g2_stderr[t] = m > 1.5 ? std::sqrt(sq / (m - 1.0) / m) : 0.0;
    }
  } else {
    double den_sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const PairOutcome& o = outcomes[static_cast<std::size_t>(k)];
      if (o.ok) den_sum += o.denominator;
    }
    const double den_mean = den_sum / m;
    if (den_mean < min_denominator) {
      throw std::runtime_error("ensemble-average emission intensity is "
                               "negligible; correlation undefined");
    }
    for (std::size_t t = 0; t < n_tau; ++t) {
      double num_sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const PairOutcome& o = outcomes[static_cast<std::size_t>(k)];
        if (o.ok) num_sum += o.numerator[t];
      }
      const double num_mean = num_sum / m;
      const double ratio = num_mean / den_mean;
      // delta-method spread of the ratio estimator
      double sq = 0.0;
      for (int k = 0; k < n; ++k) {
        const PairOutcome& o = outcomes[static_cast<std::size_t>(k)];
        if (!o.ok) continue;
        const double r = (o.numerator[t] - ratio * o.denominator) / den_mean;
        sq += r * r;
      }
      res.g2_mean[t] = ratio;
      res.g2_stderr[t] = m > 1.5 ? std::sqrt(sq / (m - 1.0) / m) : 0.0;
    }
  }

  std::vector<double> g2_zero;
  g2_zero.reserve(static_cast<std::size_t>(res.n_pairs_used));
  res.pairs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const PairOutcome& o = outcomes[static_cast<std::size_t>(k)];
    PairRecord rec;
    rec.index = k;
    rec.ok = o.ok;
    rec.separation = o.separation;
    rec.delta1 = o.delta1;
    rec.delta2 = o.delta2;
    rec.g2_zero = std::numeric_limits<double>::quiet_NaN();
    if (o.ok && o.denominator >= min_denominator) {
      rec.g2_zero = o.numerator[0] / o.denominator;
      g2_zero.push_back(rec.g2_zero);
    }
    res.pairs.push_back(rec);
  }
  res.g2_zero = summarize(std::move(g2_zero));
  return res;
}

} // namespace photonstat
