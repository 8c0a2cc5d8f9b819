#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "catlgt/wigner.hpp"

using namespace catlgt;

namespace {
constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
}

TEST_CASE("coherent and cat states") {
  const auto s = HilbertSpace::fock(40);
  const auto coh = DensityMatrix::pure(coherent_state(s, cplx(1.0, -0.5)));
  WignerEvaluator w(coh, 25.0);
  for (cplx a : {cplx(0, 0), cplx(1, -0.5), cplx(-1, 2), cplx(0.3, 0.1)})
    CHECK(w(a) == doctest::Approx(kTwoOverPi * std::exp(-2.0 * std::norm(a - cplx(1.0, -0.5)))).epsilon(1e-9));
  CHECK(WignerEvaluator(DensityMatrix::pure(cat_state(s, 2.0, Parity::Even)), 1.0)(0.0) == doctest::Approx(kTwoOverPi));
  CHECK(WignerEvaluator(DensityMatrix::pure(cat_state(s, 2.0, Parity::Odd)), 1.0)(0.0) == doctest::Approx(-kTwoOverPi));
}

TEST_CASE("grid evaluation") {
  const auto s = HilbertSpace::fock(30);
  const auto rho = DensityMatrix::pure(cat_state(s, 1.5, Parity::Odd));
  const auto grid = PhaseSpaceGrid::for_beta0(1.5, 65);
  const auto one = wigner(rho, grid, 1);
  const auto two = wigner(rho, grid, 3);
  CHECK((one.values - two.values).norm() == 0.0);
  CHECK(one.integral() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(one.max_imag < 1e-10);
  CHECK(one.values(32, 32) == doctest::Approx(-kTwoOverPi));
  CHECK_THROWS_AS(PhaseSpaceGrid::symmetric(3.0, 8).validate(), Error);
}

TEST_CASE("zero padding covers the grid") {
  const auto rho = DensityMatrix::pure(fock_state(HilbertSpace::fock(4), 0));
  WignerEvaluator w(rho, 30.0);
  CHECK(w.working_dim() >= 120);
  CHECK(w(cplx(3.0, 4.0)) == doctest::Approx(kTwoOverPi * std::exp(-50.0)).epsilon(1e-6));
}

TEST_CASE("marginals and rotational asymmetry") {
  auto p = LinkParams::from_beta0(0.03, 2.0, 0.0048);
  const System pc = project_hamiltonian(build_link(p));
  const Vec psi = pc.product_state({1, 0}, {pc.modes[0].cat_plus});
  const auto rho = fock_marginal(pc, psi, pc.gauge_sites[0]);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.expectation(parity_operator(HilbertSpace::fock(static_cast<std::size_t>(rho.dim())))) == doctest::Approx(1.0));

  const auto vac = DensityMatrix::pure(fock_state(HilbertSpace::fock(10), 0));
  CHECK(rotational_asymmetry(vac, 3.0) < 1e-12);
  const auto big = DensityMatrix::pure(cat_state(HilbertSpace::fock(40), 2.0, Parity::Even));
  const auto small = DensityMatrix::pure(cat_state(HilbertSpace::fock(40), 0.5, Parity::Even));
  CHECK(rotational_asymmetry(big, 5.0) > 10 * rotational_asymmetry(small, 3.5));
}
