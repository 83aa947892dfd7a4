#include <doctest.h>

#include <cmath>

#include "photonstat/collective.hpp"
#include "photonstat/constants.hpp"

using namespace photonstat;

TEST_SUITE_BEGIN("collective");

// Reference values computed with 50-digit arithmetic from the closed forms.
TEST_CASE("closed forms match extended-precision references") {
  CHECK(damping_gamma12(5.0, 0.8) ==
        doctest::Approx(-0.1298084982934700931356).epsilon(1e-14));
  CHECK(coupling_g12(5.0, 0.8) ==
        doctest::Approx(0.01916547340386278896079).epsilon(1e-14));
  CHECK(damping_gamma12(2.0, 0.5) ==
        doctest::Approx(0.4298427197806975254076).epsilon(1e-14));
  CHECK(coupling_g12(2.0, 0.5) ==
        doctest::Approx(0.299822346359527952239).epsilon(1e-14));
  CHECK(damping_gamma12(0.05, 0.3) ==
        doctest::Approx(0.9995225629425741276198).epsilon(1e-14));
  // the double closest to 1/sqrt(3) leaves a ~1e-16 residue of the 1/x^3
  // term, visible at the 1e-10 level for x = 0.01
  CHECK(coupling_g12(0.01, 1.0 / std::sqrt(3.0)) ==
        doctest::Approx(-99.99500004166652777803).epsilon(1e-9));
}

TEST_CASE("small-separation limit of the damping is the single-atom rate") {
  CHECK(damping_gamma12(1e-4, 0.9) ==
        doctest::Approx(0.9999999988100000004929).epsilon(1e-14));
  for (double c : {0.0, 0.25, 1.0 / std::sqrt(3.0), 0.99}) {
    CHECK(std::abs(damping_gamma12(1e-4, c) - 1.0) < 1e-6);
    CHECK(std::abs(damping_gamma12(1e-7, c) - 1.0) < 1e-12);
  }
}

TEST_CASE("perpendicular dipole damping at x = pi") {
  // (3/2) [ sin x / x + cos x / x^2 - sin x / x^3 ] at x = pi, cos_theta = 0
  CHECK(damping_gamma12(pi, 0.0) ==
        doctest::Approx(-3.0 / (2.0 * pi * pi)).epsilon(1e-14));
}

TEST_CASE("magic angle removes the near-field coupling divergence") {
  const double c = 1.0 / std::sqrt(3.0);
  // at cos^2 theta = 1/3 the 1/x^2 and 1/x^3 terms cancel: g12 = -cos x / x
  // (to the extent the double approximation of 1/sqrt(3) allows)
  for (double x : {0.01, 0.3, 2.0, 9.0}) {
    CHECK(coupling_g12(x, c) == doctest::Approx(-std::cos(x) / x).epsilon(1e-9));
  }
  // slightly off the magic angle the near field reappears
  CHECK(std::abs(coupling_g12(0.01, 0.6)) > 100.0);
}

TEST_CASE("near-field coupling grows as one over x cubed") {
  const double g1 = coupling_g12(0.1, 0.0);
  const double g2 = coupling_g12(0.05, 0.0);
  CHECK(g1 > 1e3);
  CHECK(g2 / g1 == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("damping never exceeds the single-atom rate") {
  for (int i = 0; i <= 400; ++i) {
    const double x = 1e-3 * std::pow(3e4, i / 400.0); // 1e-3 .. 30
    for (double c : {0.0, 0.3, 1.0 / std::sqrt(3.0), 0.8, 1.0}) {
      CHECK(std::abs(damping_gamma12(x, c)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("closed forms agree with solid-angle quadrature") {
  // independent route: numerically integrate the angular emission kernel
  for (double x : {0.08, 0.5, 1.7, 6.0, 22.0}) {
    for (double c : {0.1, 0.5774, 0.95}) {
      CHECK(damping_gamma12(x, c) ==
            doctest::Approx(f_quadrature(x, c)).epsilon(1e-9));
    }
  }
}

TEST_CASE("series and direct evaluation agree across the switchover") {
  // the x^-2/x^-3 combination switches to a series below x = 0.1
  for (double c : {0.0, 0.4, 0.9}) {
    const double below = damping_gamma12(0.0999, c);
    const double above = damping_gamma12(0.1001, c);
    CHECK(std::abs(below - above) < 1e-4);
    CHECK(damping_gamma12(0.0999, c) ==
          doctest::Approx(f_quadrature(0.0999, c)).epsilon(1e-9));
    CHECK(damping_gamma12(0.1001, c) ==
          doctest::Approx(f_quadrature(0.1001, c)).epsilon(1e-9));
  }
}

TEST_CASE("geometry wrapper resolves separation and orientation") {
  DipoleGeometry geom;
  geom.r12 = {0.0, 0.0, 0.4};
  geom.dipole_axis = {0.0, 0.0, 1.0};
  const CollectiveParams along = collective_params(geom);
  CHECK(along.cos_theta == doctest::Approx(1.0));
  CHECK(along.x == doctest::Approx(two_pi * 0.4));
  CHECK(along.gamma12 == doctest::Approx(damping_gamma12(two_pi * 0.4, 1.0)));
  CHECK(along.g12 == doctest::Approx(coupling_g12(two_pi * 0.4, 1.0)));

  geom.r12 = {0.4, 0.0, 0.0};
  const CollectiveParams perp = collective_params(geom);
  CHECK(perp.cos_theta == doctest::Approx(0.0));

  // swapping the atoms cannot change the pair parameters
  geom.r12 = {0.2, -0.1, 0.3};
  const CollectiveParams fwd = collective_params(geom);
  geom.r12 = -geom.r12;
  const CollectiveParams bwd = collective_params(geom);
  CHECK(fwd.gamma12 == doctest::Approx(bwd.gamma12).epsilon(1e-15));
  CHECK(fwd.g12 == doctest::Approx(bwd.g12).epsilon(1e-15));
}

TEST_CASE("degenerate geometry is rejected") {
  DipoleGeometry geom;
  geom.r12 = {0.0, 0.0, 0.0};
  geom.dipole_axis = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS((void)collective_params(geom), std::domain_error);
}

TEST_SUITE_END();
