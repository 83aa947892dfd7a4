#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "photonstat/pair_system.hpp"

// Reference implementation on the full two-atom density-matrix space.
// Everything here is built from first principles (Hamiltonian + dissipator
// acting on 4x4 density matrices, column-stacked to dimension 16) and shares
// no code with the fifteen-component expectation-value system, so the two
// routes can certify each other.
namespace photonstat {

using Matrix4c = Eigen::Matrix4cd;
using Matrix16c = Eigen::Matrix<Cplx, 16, 16>;
using Vector16c = Eigen::Vector<Cplx, 16>;

struct TwoAtomOperators {
  Matrix4c s1p, s1m, s2p, s2m; // raising/lowering, atom 1 = first tensor factor
  Matrix4c n1, n2;             // excited-state projectors
  std::array<Matrix4c, 15> s_basis; // operators matching the state-vector order
};

const TwoAtomOperators& two_atom_operators();

// Column-stacking helpers: vec(A X B) = (B^T kron A) vec(X).
Vector16c vectorize(const Matrix4c& a);
Matrix4c unvectorize(const Vector16c& v);
Matrix16c superop_left(const Matrix4c& a);            // X -> A X
Matrix16c superop_right(const Matrix4c& b);           // X -> X B
Matrix16c superop_both(const Matrix4c& a, const Matrix4c& b); // X -> A X B

// Master-equation generator acting on vec(rho).  Same parameterization and
// validation as build_system.
Matrix16c build_liouvillian(const PairConfig& cfg);

// Unique trace-one steady state.  Throws std::runtime_error if the kernel of
// the generator is empty or degenerate within tolerance, or if the state
// fails Hermiticity/positivity checks.
Matrix4c dm_steady_state(const PairConfig& cfg);

enum class DmMethod {
  ode_integration,    // adaptive Runge–Kutta on the master equation
  matrix_exponential, // Pade scaling-and-squaring of the generator
};

struct DmG2Series {
  std::vector<double> numerator; // two-time intensity correlation, unnormalized
  double denominator = 0.0;      // stationary intensity product (both arms)
};

// Two-time correlation from density-matrix evolution: for each emission side
// the collapsed state s_i^- rho_ss s_i^+ is evolved for time tau and the
// remaining intensity is read out; the four retained side/readout pairings
// are summed.  taus must be non-negative and non-decreasing.
DmG2Series dm_g2_series(const PairConfig& cfg, const std::vector<double>& taus,
                        DmMethod method = DmMethod::ode_integration);

// Closed-system check value: drift matrix and drive vector for the fifteen
// expectation values obtained by conjugating the Liouvillian into the
// (1, <S_1>, ..., <S_15>) coordinates.  The trace row must vanish; throws if
// it does not.
CoefficientSystem derived_generator(const PairConfig& cfg);

} // namespace photonstat
