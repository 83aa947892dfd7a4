#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "photonstat/rng.hpp"

using namespace photonstat;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are reproducible and independent") {
  RngStream a(1234, 7);
  RngStream b(1234, 7);
  RngStream c(1234, 8);
  RngStream d(1235, 7);
  bool c_differs = false, d_differs = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    c_differs = c_differs || (va != c.next_u64());
    d_differs = d_differs || (va != d.next_u64());
  }
  CHECK(c_differs);
  CHECK(d_differs);
}

TEST_CASE("the generator identifier is stable") {
  CHECK(std::strcmp(RngStream::algorithm_id(),
                    "xoshiro256++/splitmix64-keyed-streams-v1") == 0);
}

TEST_CASE("uniform doubles live in the half-open unit interval") {
  RngStream rng(42, 0);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("uniform range transformation") {
  RngStream rng(9, 3);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-3.0, 5.0);
    CHECK(u >= -3.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("normal deviates have the right first moments") {
  RngStream rng(77, 1);
  const int n = 200000;
  double sum = 0.0, sq = 0.0, quartic = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
    quartic += x * x * x * x;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1.0).scale(0.01));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(quartic / n == doctest::Approx(3.0).epsilon(0.05)); // Gaussian kurtosis
}

TEST_CASE("truncated normal respects its window") {
  RngStream rng(5, 2);
  for (int i = 0; i < 5000; ++i) {
    const double x = rng.truncated_normal(2.0, 1.5, -1.0, 4.0);
    CHECK(x >= -1.0);
    CHECK(x <= 4.0);
  }
}

TEST_CASE("zero-width truncated normal collapses to the clamped mean") {
  RngStream rng(5, 2);
  CHECK(rng.truncated_normal(2.0, 0.0, -1.0, 4.0) == 2.0);
  CHECK(rng.truncated_normal(9.0, 0.0, -1.0, 4.0) == 4.0);
  CHECK(rng.truncated_normal(-9.0, 0.0, -1.0, 4.0) == -1.0);
}

TEST_CASE("wide truncated normal is nearly uniform over the window") {
  // sigma much larger than the window: density is flat to first order
  RngStream rng(31, 4);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.truncated_normal(0.0, 40.0, -5.0, 5.0);
    sum += x;
    sq += x * x;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1.0).scale(0.05));
  CHECK(sq / n == doctest::Approx(25.0 / 3.0).epsilon(0.02));
}

TEST_CASE("isotropic directions are unit length and unbiased") {
  RngStream rng(123, 0);
  const int n = 100000;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  double zz = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d u = rng.isotropic_unit();
    CHECK(std::abs(u.norm() - 1.0) < 1e-12);
    mean += u;
    zz += u.z() * u.z();
  }
  mean /= n;
  CHECK(mean.norm() < 0.01);
  CHECK(zz / n == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("truncated normal rejects inverted or non-finite windows") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS((void)rng.truncated_normal(0.0, 1.0, 2.0, -2.0),
                  std::invalid_argument);
}

TEST_SUITE_END();
