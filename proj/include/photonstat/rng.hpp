#pragma once

#include <cstdint>

#include <Eigen/Dense>

// Counter-keyed random streams: stream k of a run is fully determined by
// (seed, k) and never by execution order, so parallel ensembles replay
// bit-identically at any worker count.  Core generator is xoshiro256++;
// stream states are derived by hashing (seed, stream) through splitmix64.
namespace photonstat {

class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // uniform in [0, 1), 53-bit resolution
  double uniform01();
  // uniform in [a, b)
  double uniform(double a, double b);
  // standard normal (Box–Muller; consumes two words per call)
  double normal();
  // normal(mu, sigma) conditioned on [lo, hi]; sigma = 0 degenerates to mu.
  // Wide sigma uses a uniform proposal, narrow sigma resamples the normal.
  double truncated_normal(double mu, double sigma, double lo, double hi);
  // isotropic unit vector (Marsaglia polar method)
  Eigen::Vector3d isotropic_unit();

  // recorded in result provenance so runs can be reproduced elsewhere
  static const char* algorithm_id();

private:
  std::uint64_t s_[4];
};

} // namespace photonstat
