#include "photonstat/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "odeint_eigen_support.hpp"

namespace photonstat {

namespace {

constexpr Cplx kI{0.0, 1.0};

using Matrix2c = Eigen::Matrix2cd;

Matrix4c kron22(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix16c kron44(const Matrix4c& a, const Matrix4c& b) {
  Matrix16c out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

TwoAtomOperators make_operators() {
  // single-atom basis {g, e}; product basis {gg, ge, eg, ee}
  Matrix2c lower = Matrix2c::Zero(); // |g><e|
  lower(0, 1) = 1.0;
  const Matrix2c raise = lower.adjoint();
  const Matrix2c id2 = Matrix2c::Identity();

  TwoAtomOperators ops;
  ops.s1p = kron22(raise, id2);
  ops.s1m = kron22(lower, id2);
  ops.s2p = kron22(id2, raise);
  ops.s2m = kron22(id2, lower);
  ops.n1 = ops.s1p * ops.s1m;
  ops.n2 = ops.s2p * ops.s2m;
  ops.s_basis = {ops.s1p,
                 ops.s1m,
                 ops.s2p,
                 ops.s2m,
                 ops.n1,
                 ops.n2,
                 ops.s1p * ops.s2m,
                 ops.s2p * ops.s1m,
                 ops.s1p * ops.s2p,
                 ops.s1m * ops.s2m,
                 ops.s1p * ops.s1m * ops.s2m,
                 ops.s1p * ops.s2p * ops.s1m,
                 ops.s2p * ops.s1m * ops.s2m,
                 ops.s1p * ops.s2p * ops.s2m,
                 ops.s1p * ops.s2p * ops.s1m * ops.s2m};
  return ops;
}

Cplx expectation(const Matrix4c& op, const Matrix4c& rho) {
  return (op * rho).trace();
}

} // namespace

const TwoAtomOperators& two_atom_operators() {
  static const TwoAtomOperators ops = make_operators();
  return ops;
}

Vector16c vectorize(const Matrix4c& a) {
  return Eigen::Map<const Vector16c>(a.data()); // Eigen stores column-major
}

Matrix4c unvectorize(const Vector16c& v) {
  return Eigen::Map<const Matrix4c>(v.data());
}

Matrix16c superop_left(const Matrix4c& a) {
  return kron44(Matrix4c::Identity(), a);
}

Matrix16c superop_right(const Matrix4c& b) {
  return kron44(b.transpose(), Matrix4c::Identity());
}

Matrix16c superop_both(const Matrix4c& a, const Matrix4c& b) {
  return kron44(b.transpose(), a);
}

Matrix16c build_liouvillian(const PairConfig& cfg) {
  validate_config(cfg);
  const TwoAtomOperators& op = two_atom_operators();

  const Matrix4c h = -cfg.delta1 * op.n1 - cfg.delta2 * op.n2 +
                     cfg.g12 * (op.s1p * op.s2m + op.s2p * op.s1m) -
                     0.5 * (cfg.omega1 * op.s1p + std::conj(cfg.omega1) * op.s1m +
                            cfg.omega2 * op.s2p + std::conj(cfg.omega2) * op.s2m);

  Matrix16c l = -kI * (superop_left(h) - superop_right(h));
  const struct {
    const Matrix4c& up;
    const Matrix4c& down;
    double rate;
  } channels[] = {{op.s1p, op.s1m, 1.0},
                  {op.s2p, op.s2m, 1.0},
                  {op.s1p, op.s2m, cfg.gamma12},
                  {op.s2p, op.s1m, cfg.gamma12}};
  for (const auto& ch : channels) {
    const Matrix4c a = ch.up * ch.down;
    l -= ch.rate * (superop_left(a) + superop_right(a) -
                    2.0 * superop_both(ch.down, ch.up));
  }
  return l;
}

Matrix4c dm_steady_state(const PairConfig& cfg) {
  const Matrix16c l = build_liouvillian(cfg);
  Eigen::ComplexEigenSolver<Matrix16c> es(l, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue computation on the master-equation "
                             "generator failed");
  }
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  int kernel_index = -1;
  int kernel_count = 0;
  for (int k = 0; k < 16; ++k) {
    if (std::abs(es.eigenvalues()(k)) < 1e-8 * scale) {
      ++kernel_count;
      kernel_index = k;
    }
  }
  if (kernel_count == 0) {
    throw std::runtime_error("no stationary state found for the given pair "
                             "configuration");
  }
  if (kernel_count > 1) {
    std::ostringstream os;
    os << "stationary state is not unique (" << kernel_count
       << " kernel directions); configuration supports dark states";
    throw std::runtime_error(os.str());
  }

  Matrix4c rho = unvectorize(es.eigenvectors().col(kernel_index));
  const Cplx tr = rho.trace();
  if (std::abs(tr) < 1e-10) {
    throw std::runtime_error("stationary kernel vector is traceless; cannot "
                             "normalize to a density matrix");
  }
  rho /= tr;
  const double herm_err = (rho - Matrix4c(rho.adjoint())).cwiseAbs().maxCoeff();
  if (herm_err > 1e-9) {
    throw std::runtime_error("stationary state failed the Hermiticity check");
  }
  rho = 0.5 * (rho + Matrix4c(rho.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix4c> pos(rho);
  if (pos.eigenvalues().minCoeff() < -1e-9) {
    throw std::runtime_error("stationary state failed the positivity check");
  }
  const double residual = (l * vectorize(rho)).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * scale) {
    throw std::runtime_error("stationary state residual exceeds tolerance");
  }
  return rho;
}

DmG2Series dm_g2_series(const PairConfig& cfg, const std::vector<double>& taus,
                        DmMethod method) {
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] >= 0.0)) {
      throw std::invalid_argument("correlation delays must be non-negative");
    }
    if (k > 0 && taus[k] < taus[k - 1]) {
      throw std::invalid_argument("correlation delays must be non-decreasing");
    }
  }

  const TwoAtomOperators& op = two_atom_operators();
  const Matrix16c l = build_liouvillian(cfg);
  const Matrix4c rho = dm_steady_state(cfg);

  DmG2Series out;
  const Cplx cross = expectation(op.s1p * op.s2m, rho);
  out.denominator = 2.0 * std::real(expectation(op.n1, rho) * expectation(op.n2, rho) +
                                    cross * std::conj(cross));

  // side operator pairs (si+, sj-) with their readout operators
  const struct {
    const Matrix4c& sip;
    const Matrix4c& sjm;
    Matrix4c readout;
  } cases[] = {{op.s1p, op.s2m, op.s2p * op.s1m},
               {op.s2p, op.s1m, op.s1p * op.s2m},
               {op.s1p, op.s1m, op.s2p * op.s2m},
               {op.s2p, op.s2m, op.s1p * op.s1m}};

  std::vector<Cplx> acc(taus.size(), Cplx{0.0, 0.0});

  if (method == DmMethod::matrix_exponential) {
    for (const auto& c : cases) {
      Vector16c chi = vectorize(Matrix4c(c.sjm * rho * c.sip));
      double t_prev = 0.0;
      double cached_dt = -1.0;
      Matrix16c step = Matrix16c::Identity();
      for (std::size_t k = 0; k < taus.size(); ++k) {
        const double dt = taus[k] - t_prev;
        if (dt > 0.0) {
          if (dt != cached_dt) {
            step = Matrix16c(l * dt).exp();
            cached_dt = dt;
          }
          chi = step * chi;
          t_prev = taus[k];
        }
        acc[k] += expectation(c.readout, unvectorize(chi));
      }
    }
  } else {
    namespace ode = boost::numeric::odeint;
    using Stepper = ode::runge_kutta_dopri5<Vector16c, double, Vector16c, double,
                                            ode::vector_space_algebra>;
    auto rhs = [&l](const Vector16c& x, Vector16c& dxdt, double /*t*/) {
      dxdt = l * x;
    };
    for (const auto& c : cases) {
      Vector16c chi = vectorize(Matrix4c(c.sjm * rho * c.sip));
      auto stepper = ode::make_controlled<Stepper>(1e-12, 1e-12);
      double t_prev = 0.0;
      for (std::size_t k = 0; k < taus.size(); ++k) {
        if (taus[k] > t_prev) {
          ode::integrate_adaptive(stepper, rhs, chi, t_prev, taus[k], 1e-4);
          t_prev = taus[k];
        }
        acc[k] += expectation(c.readout, unvectorize(chi));
      }
    }
  }

  out.numerator.resize(taus.size());
  double worst_imag = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    out.numerator[k] = acc[k].real();
    worst_imag = std::max(worst_imag, std::abs(acc[k].imag()));
  }
  if (worst_imag > 1e-6) {
    std::ostringstream os;
    os << "correlation numerator acquired imaginary part " << worst_imag
       << "; evolution is inconsistent";
    throw std::runtime_error(os.str());
  }
  return out;
}

CoefficientSystem derived_generator(const PairConfig& cfg) {
  const Matrix16c l = build_liouvillian(cfg);
  const TwoAtomOperators& op = two_atom_operators();

  // Coordinates y = (Tr rho, <S_1>, ..., <S_15>): row k of B is vec(S_k^T)^T
  // so that (B vec(rho))_k = Tr[S_k rho].
  Matrix16c basis;
  basis.row(0) = vectorize(Matrix4c::Identity()).transpose();
  for (int k = 0; k < 15; ++k) {
    basis.row(k + 1) = vectorize(Matrix4c(op.s_basis[k].transpose())).transpose();
  }
  Eigen::PartialPivLU<Matrix16c> lu(basis);
  const Matrix16c basis_inv = lu.solve(Matrix16c::Identity());
  const Matrix16c g = basis * l * basis_inv;

  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if (g.row(0).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::runtime_error("trace row of the transformed generator does not "
                             "vanish; operator basis is inconsistent");
  }

  CoefficientSystem sys;
  sys.m = g.bottomRightCorner<15, 15>();
  sys.b = g.block<15, 1>(1, 0);
  return sys;
}

} // namespace photonstat
