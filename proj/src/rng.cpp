#include "photonstat/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "photonstat/constants.hpp"

namespace photonstat {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// 64-bit avalanche (MurmurHash3 finalizer)
inline std::uint64_t fmix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t key = fmix64(seed) ^ fmix64(stream * 0x9e3779b97f4a7c15ULL + 1);
  s_[0] = splitmix64(key);
  s_[1] = splitmix64(key);
  s_[2] = splitmix64(key);
  s_[3] = splitmix64(key);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1; // all-zero state is absorbing
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
  return a + (b - a) * uniform01();
}

double RngStream::normal() {
  // u1 in (0, 1] keeps the log finite
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

double RngStream::truncated_normal(double mu, double sigma, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("truncation window must satisfy lo < hi");
  if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  if (sigma == 0.0) return std::min(std::max(mu, lo), hi);

  const int max_tries = 100000;
  if (sigma >= 0.5 * (hi - lo)) {
    // wide normal over a narrow window: uniform proposal, density ratio accept
    const double peak = std::min(std::max(mu, lo), hi); // density max inside window
    for (int k = 0; k < max_tries; ++k) {
      const double u = uniform(lo, hi);
      const double logr = (-(u - mu) * (u - mu) + (peak - mu) * (peak - mu)) /
                          (2.0 * sigma * sigma);
      if (uniform01() <= std::exp(logr)) return u;
    }
  } else {
    for (int k = 0; k < max_tries; ++k) {
      const double z = mu + sigma * normal();
      if (z >= lo && z <= hi) return z;
    }
  }
  throw std::runtime_error("truncated normal sampling failed to accept; window "
                           "is too far in the distribution tail");
}

Eigen::Vector3d RngStream::isotropic_unit() {
  for (;;) {
    const double u = uniform(-1.0, 1.0);
    const double v = uniform(-1.0, 1.0);
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = 2.0 * std::sqrt(1.0 - s);
    return {u * f, v * f, 1.0 - 2.0 * s};
  }
}

const char* RngStream::algorithm_id() {
  return "xoshiro256++/splitmix64-keyed-streams-v1";
}

} // namespace photonstat
