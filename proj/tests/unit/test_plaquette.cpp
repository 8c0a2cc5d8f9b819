#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "catlgt/linalg.hpp"
#include "catlgt/plaquette.hpp"

using namespace catlgt;

TEST_CASE("momentum spectrum") {
  const auto z = momentum_spectrum(1.0, 0.0);
  CHECK(z[0] == doctest::Approx(-2.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK(z[2] == doctest::Approx(1.0));
  const auto pi = momentum_spectrum(1.0, std::numbers::pi);
  CHECK(pi[0] == doctest::Approx(-1.0));
  CHECK(pi[1] == doctest::Approx(-1.0));
  CHECK(pi[2] == doctest::Approx(2.0));
}

TEST_CASE("ancillary construction") {
  const double g = 0.7;
  const Mat h = plaquette_ancillary(g);
  CHECK(h.rows() == 24);
  CHECK(hermiticity_defect(h) < 1e-15);
  for (double phi : {0.0, std::numbers::pi}) {
    const RVec s = flux_sector_spectrum(g, phi);
    const auto f = momentum_spectrum(g, phi);
    CHECK(s.size() == 12);
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 4; ++c) CHECK(s(4 * k + c) == doctest::Approx(f[static_cast<std::size_t>(k)]));
  }
  CHECK(flux_sector_spectrum(g, std::numbers::pi).minCoeff() - flux_sector_spectrum(g, 0.0).minCoeff() ==
        doctest::Approx(g));
  const RVec all = eigh(h).eigenvalues;
  CHECK(all.minCoeff() == doctest::Approx(-2 * g));
}

TEST_CASE("direct three-body term") {
  const Mat h = plaquette_direct(0.001, {2.0, 2.0, 2.0});
  CHECK(h.rows() == 8);
  const RVec e = eigh(h).eigenvalues;
  CHECK(e(0) == doctest::Approx(-0.016));
  CHECK(e(7) == doctest::Approx(0.016));
  CHECK(std::abs(h(0, 7) - 0.016) < 1e-15);
}
