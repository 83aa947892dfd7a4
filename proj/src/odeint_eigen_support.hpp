#pragma once

#include <complex>

#include <Eigen/Dense>
#include <boost/numeric/odeint/algebra/vector_space_algebra.hpp>

// The stock Eigen adapter types its infinity norm as the matrix scalar, which
// for complex states cannot feed the step-size controller; pin the norm of
// our fixed-size complex state vectors to a real value.
namespace boost::numeric::odeint {

template <>
struct vector_space_norm_inf<Eigen::Matrix<std::complex<double>, 15, 1>> {
  using result_type = double;
  double operator()(const Eigen::Matrix<std::complex<double>, 15, 1>& v) const {
    return v.cwiseAbs().maxCoeff();
  }
};

template <>
struct vector_space_norm_inf<Eigen::Matrix<std::complex<double>, 16, 1>> {
  using result_type = double;
  double operator()(const Eigen::Matrix<std::complex<double>, 16, 1>& v) const {
    return v.cwiseAbs().maxCoeff();
  }
};

} // namespace boost::numeric::odeint
