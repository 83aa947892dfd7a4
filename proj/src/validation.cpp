#include "photonstat/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include "odeint_eigen_support.hpp"
#include "photonstat/collective.hpp"
#include "photonstat/constants.hpp"
#include "photonstat/oracle.hpp"
#include "photonstat/regression.hpp"
#include "photonstat/rng.hpp"

namespace photonstat {

namespace {

PairConfig random_config(RngStream& rng, double omega_min) {
  PairConfig cfg;
  cfg.delta1 = rng.uniform(-15.0, 15.0);
  cfg.delta2 = rng.uniform(-15.0, 15.0);
  const double mag = rng.uniform(omega_min, 50.0);
  cfg.omega1 = mag * std::exp(Cplx{0.0, -rng.uniform(0.0, two_pi)});
  cfg.omega2 = mag * std::exp(Cplx{0.0, -rng.uniform(0.0, two_pi)});
  cfg.gamma12 = rng.uniform(-1.0, 1.0);
  cfg.g12 = rng.uniform(-30.0, 30.0);
  return cfg;
}

std::string coefficient_name(int row0, int col0) {
  std::ostringstream os;
  if (col0 == 15) {
    os << "b(" << row0 + 1 << ")";
  } else {
    os << "M(" << row0 + 1 << "," << col0 + 1 << ")";
  }
  return os.str();
}

ValidationCheck check_generator_expansion(
    int n_configs, std::uint64_t seed,
    const std::optional<GeneratorPerturbation>& perturb) {
  ValidationCheck c;
  c.name = "generator-expansion";
  c.tolerance = 1e-12;
  c.cases = n_configs;
  int worst_row = 0, worst_col = 0;
  for (int k = 0; k < n_configs; ++k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k));
    const PairConfig cfg = random_config(rng, 0.0);
    CoefficientSystem transcribed = build_system(cfg);
    if (perturb && perturb->amount != 0.0) {
      const int r = perturb->row - 1, col = perturb->col - 1;
      if (r < 0 || r >= 15 || col < 0 || col >= 16) {
        throw std::invalid_argument("perturbation indices must be in 1..15 x 1..16");
      }
      if (col == 15) {
        transcribed.b(r) += perturb->amount;
      } else {
        transcribed.m(r, col) += perturb->amount;
      }
    }
    const CoefficientSystem derived = derived_generator(cfg);
    for (int r = 0; r < 15; ++r) {
      for (int col = 0; col < 15; ++col) {
        const double d = std::abs(transcribed.m(r, col) - derived.m(r, col));
        if (d > c.worst) {
          c.worst = d;
          worst_row = r;
          worst_col = col;
        }
      }
      const double d = std::abs(transcribed.b(r) - derived.b(r));
      if (d > c.worst) {
        c.worst = d;
        worst_row = r;
        worst_col = 15;
      }
    }
  }
  c.passed = c.worst <= c.tolerance;
  if (!c.passed) {
    c.detail = "worst mismatch at " + coefficient_name(worst_row, worst_col);
  }
  return c;
}

ValidationCheck check_steady_state(int n_configs, std::uint64_t seed) {
  ValidationCheck c;
  c.name = "steady-state-equivalence";
  c.tolerance = 1e-10;
  c.cases = n_configs;
  const TwoAtomOperators& op = two_atom_operators();
  for (int k = 0; k < n_configs; ++k) {
    RngStream rng(seed + 1000, static_cast<std::uint64_t>(k));
    const PairConfig cfg = random_config(rng, 1.0);
    const StateVector s = steady_state(build_system(cfg));
    const Matrix4c rho = dm_steady_state(cfg);
    for (int j = 0; j < 15; ++j) {
      const Cplx expect = (op.s_basis[static_cast<std::size_t>(j)] * rho).trace();
      c.worst = std::max(c.worst, std::abs(s(j) - expect));
    }
  }
  c.passed = c.worst <= c.tolerance;
  return c;
}

ValidationCheck check_g2_curves(int n_configs, std::uint64_t seed) {
  ValidationCheck c;
  c.name = "correlation-curve-equivalence";
  c.tolerance = 1e-8;
  c.cases = n_configs;
  const std::vector<double> taus = uniform_delays(5.0, 21);
  for (int k = 0; k < n_configs; ++k) {
    RngStream rng(seed + 2000, static_cast<std::uint64_t>(k));
    const PairConfig cfg = random_config(rng, 5.0); // keep emission healthy
    const PairCorrelator corr(cfg);
    const DmG2Series ref = dm_g2_series(cfg, taus, DmMethod::ode_integration);
    for (std::size_t t = 0; t < taus.size(); ++t) {
      const double mine = corr.g2(taus[t]);
      const double theirs = ref.numerator[t] / ref.denominator;
      c.worst = std::max(c.worst, std::abs(mine - theirs));
    }
  }
  c.passed = c.worst <= c.tolerance;
  return c;
}

ValidationCheck check_quadrature(int n_samples, std::uint64_t seed) {
  ValidationCheck c;
  c.name = "coupling-quadrature";
  c.tolerance = 1e-8;
  c.cases = n_samples;
  for (int k = 0; k < n_samples; ++k) {
    RngStream rng(seed + 3000, static_cast<std::uint64_t>(k));
    const double x = std::exp(rng.uniform(std::log(0.05), std::log(30.0)));
    const double cos_theta = rng.uniform(-1.0, 1.0);
    const double closed = damping_gamma12(x, cos_theta);
    const double quad = f_quadrature(x, cos_theta);
    c.worst = std::max(c.worst, std::abs(closed - quad));
  }
  c.passed = c.worst <= c.tolerance;
  return c;
}

ValidationCheck check_propagator(int n_configs, std::uint64_t seed) {
  ValidationCheck c;
  c.name = "propagator-integration";
  c.tolerance = 1e-9;
  c.cases = n_configs;
  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_dopri5<Vector15c, double, Vector15c, double,
                                          ode::vector_space_algebra>;
  for (int k = 0; k < n_configs; ++k) {
    RngStream rng(seed + 4000, static_cast<std::uint64_t>(k));
    const PairConfig cfg = random_config(rng, 0.0);
    const CoefficientSystem sys = build_system(cfg);
    auto rhs = [&sys](const Vector15c& v, Vector15c& dvdt, double /*t*/) {
      dvdt = sys.m * v + sys.b;
    };
    for (double t_end : {0.5, 5.0}) {
      // relaxation from the ground state (all expectations zero)
      const StateVector direct =
          propagate(sys, StateVector::Zero(), t_end);
      Vector15c v_tight = Vector15c::Zero();
      Vector15c v_loose = Vector15c::Zero();
      // per-step control underestimates global error by the interval's
      // amplification factor (~10x here), so certify the reference with two
      // runs whose expected global errors sit well below the check tolerance
      auto tight = ode::make_controlled<Stepper>(1e-13, 1e-13);
      auto loose = ode::make_controlled<Stepper>(1e-12, 1e-12);
      ode::integrate_adaptive(tight, rhs, v_tight, 0.0, t_end, 1e-4);
      ode::integrate_adaptive(loose, rhs, v_loose, 0.0, t_end, 1e-4);
      const double self = (v_tight - v_loose).cwiseAbs().maxCoeff();
      if (self > 0.5 * c.tolerance) {
        c.detail = "reference integrator failed its own convergence check";
        c.worst = std::max(c.worst, self);
        continue;
      }
      c.worst = std::max(c.worst,
                         (direct - v_tight).cwiseAbs().maxCoeff());
    }
  }
  c.passed = c.worst <= c.tolerance && c.detail.empty();
  return c;
}

} // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::render() const {
  std::ostringstream os;
  for (const ValidationCheck& c : checks) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.cases
       << " cases, worst deviation " << c.worst << " (tolerance " << c.tolerance
       << ")";
    if (!c.detail.empty()) os << " — " << c.detail;
    os << "\n";
  }
  const long failed =
      std::count_if(checks.begin(), checks.end(),
                    [](const ValidationCheck& c) { return !c.passed; });
  os << (failed == 0 ? "all checks passed" : "VALIDATION FAILED") << " ("
     << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size()
     << " checks)\n";
  return os.str();
}

ValidationReport run_validation(
    int n_random_configs, std::uint64_t seed,
    const std::optional<GeneratorPerturbation>& perturb) {
  if (n_random_configs < 1) {
    throw std::invalid_argument("validation needs at least one configuration");
  }
  ValidationReport report;
  report.checks.push_back(
      check_generator_expansion(n_random_configs, seed, perturb));
  report.checks.push_back(check_steady_state(n_random_configs, seed));
  report.checks.push_back(
      check_g2_curves(std::min(n_random_configs, 5), seed));
  report.checks.push_back(check_quadrature(10 * n_random_configs, seed));
  report.checks.push_back(check_propagator(std::min(n_random_configs, 5), seed));
  return report;
}

} // namespace photonstat
