#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "catlgt/diagnostics.hpp"
#include "catlgt/linalg.hpp"
#include "catlgt/model.hpp"

using namespace catlgt;

namespace {
double commutator_norm(const SpMat& a, const SpMat& b) { return Mat(a * b - b * a).norm(); }
}  // namespace

TEST_CASE("parameters") {
  const auto p = LinkParams::from_beta0(0.03, 2.0, 0.0);
  CHECK(std::abs(p.G - 0.24) < 1e-15);
  CHECK(std::abs(p.omega_gap() - 0.48) < 1e-15);
  CHECK(p.resolved_gauge_dim() == 32);
  LinkParams bad = p;
  bad.U = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  LinkParams strong = p;
  strong.g3 = 0.5;
  ScopedWarningCapture cap;
  CHECK_NOTHROW(strong.validate());
  CHECK(strong.strong_mixing());
  CHECK(!cap.messages().empty());
}

TEST_CASE("KPO Hamiltonian") {
  const auto p = LinkParams::from_beta0(0.03, 2.0, 0.0);
  const auto s = HilbertSpace::fock(40);
  const Mat h = build_kpo(p, s);
  const Mat b = destroy(s), bd = create(s), one = identity(s);
  const Mat factored = -p.U * (bd * bd - 4.0 * one) * (b * b - 4.0 * one) + p.U * 16.0 * one;
  // Entries next to the cutoff differ because b^+ b^+ b b is truncated differently.
  CHECK((h - factored).topLeftCorner(38, 38).norm() < 1e-10);
  CHECK(std::abs(expectation(h, coherent_state(s, 2.0)) - 0.48) < 1e-9);
  CHECK(std::abs(expectation(h, coherent_state(s, -2.0)) - 0.48) < 1e-9);
  LinkParams kerr = p;
  kerr.G = 0.0;
  const RVec e = build_kpo(kerr, HilbertSpace::fock(6)).diagonal().real();
  for (Index n = 0; n < 6; ++n) CHECK(std::abs(e(n) + kerr.U * n * (n - 1)) < 1e-15);
}

TEST_CASE("matter and coupling terms") {
  auto p = LinkParams::from_beta0(0.03, 2.0, 0.0048);
  p.omega_matter = {0.48, 0.0};
  const System sys = build_link(p);
  const Vec one = sys.product_state({1, 0}, {sys.modes[0].cat_plus});
  CHECK(std::abs(expectation(sys.H_matter, one) - 0.48) < 1e-15);
  CHECK(commutator_norm(sys.H, sys.total_matter_number()) < 1e-12);
  CHECK(hermiticity_defect(sys.H) < 1e-12);
  const auto& g = sys.modes[0].space;
  for (std::size_t n = 0; n < 5; ++n) {
    const Vec bra = sys.product_state({1, 0}, {fock_state(g, n)});
    const Vec ket = sys.product_state({0, 1}, {fock_state(g, n + 1)});
    CHECK(std::abs(bra.dot(sys.H_coup * ket) + p.g3 * std::sqrt(n + 1.0)) < 1e-15);
  }
  p.g3 = 0.0;
  CHECK(build_link(p).H_coup.norm() == 0.0);
  p.omega_matter = {0.0, 0.0};
  CHECK(build_link(p).H_matter.norm() == 0.0);
}

TEST_CASE("chains") {
  ChainParams two;
  two.N = 2;
  two.link = LinkParams::from_beta0(0.03, 2.0, 0.0048);
  CHECK((Mat(build_chain(two).H) - Mat(build_link(two.link).H)).norm() < 1e-14);
  ChainParams three;
  three.link = two.link;
  three.M = 6;
  CHECK(three.sector_dim() == 108);
  const System sys = build_chain(three);
  CHECK(sys.basis.size() == 108);
  CHECK(hermiticity_defect(sys.H) < 1e-12);
}

TEST_CASE("cat projector") {
  const auto g = cat_projector(LinkParams::from_beta0(0.03, 2.0, 0.0));
  CHECK(g.rank == 2);
  CHECK((g.projector * g.cat_plus - g.cat_plus).norm() < 1e-12);
  const RVec ev = eigh(g.sigma_z).eigenvalues;
  CHECK(std::abs(ev(0) + 1.0) < 1e-12);
  CHECK(std::abs(ev(ev.size() - 1) - 1.0) < 1e-12);
  ScopedWarningCapture cap;
  CHECK(cat_projector(LinkParams::from_beta0(0.03, 0.0, 0.0)).rank == 1);
}

TEST_CASE("link operator") {
  const auto p = LinkParams::from_beta0(0.03, 2.0, 0.0);
  const auto l = link_operator(p);
  // mpmath, 30 digits.
  CHECK(std::abs(l.u_x - 2.00000011253518421738) < 1e-14);
  CHECK(std::abs(l.u_y - 6.70925293556372306699e-4) < 1e-15);
  CHECK((l.numeric - l.block).norm() < 1e-9);
  CHECK(std::abs(std::abs(l.block(0, 1)) - (l.u_x + l.u_y)) < 1e-15);
  CHECK(std::abs(std::abs(l.block(1, 0)) - (l.u_x - l.u_y)) < 1e-15);
  const auto [ux, uy] = link_coefficients(1e-4);
  CHECK(std::abs(ux + uy - 1.0) < 1e-7);
}

TEST_CASE("Rabi frequencies") {
  const auto r = rabi_frequencies(2.0, 0.0048);
  CHECK(std::abs(r.plus - 0.0192064419631559096610) < 1e-15);
  CHECK(std::abs(r.minus - 0.0191935601975196273127) < 1e-15);
  for (double b : {0.1, 0.4, 1.0, 2.5}) {
    const auto q = rabi_frequencies(b, 0.01);
    CHECK(std::abs(q.plus * q.minus - std::pow(2 * 0.01 * b, 2)) < 1e-15);
  }
  const auto zero = rabi_frequencies(0.0, 0.01);
  CHECK(zero.plus == doctest::Approx(0.02));
  CHECK(zero.minus == 0.0);
  CHECK(rabi_frequencies(0.4, 1.0).plus / rabi_frequencies(0.4, 1.0).minus ==
        doctest::Approx(6.30324253246530557812).epsilon(1e-13));
}

TEST_CASE("projected Hamiltonian and Gauss law") {
  auto p = LinkParams::from_beta0(0.03, 2.0, 0.0048);
  p.omega_matter = {0.48, 0.48};
  const System full = build_link(p);
  const System pc = project_hamiltonian(full);
  const auto& m = pc.modes[0];
  const auto r = rabi_frequencies(p);
  const Vec a = pc.product_state({1, 0}, {m.cat_plus}), b = pc.product_state({0, 1}, {m.cat_minus});
  const Vec c = pc.product_state({1, 0}, {m.cat_minus}), d = pc.product_state({0, 1}, {m.cat_plus});
  CHECK(std::abs(a.dot(pc.H * b) + r.plus / 2) < 1e-12);
  CHECK(std::abs(c.dot(pc.H * d) + r.minus / 2) < 1e-12);
  const auto gens = gauge_generators(pc);
  for (const auto& g : gens) CHECK(commutator_norm(pc.H, g) < 1e-10);
  CHECK(expectation(gens[0], a) == doctest::Approx(-1.0));
  CHECK(expectation(gens[0], b) == doctest::Approx(-1.0));

  const System vac = project_hamiltonian(build_link(p, {std::nullopt}), 0.0, {std::nullopt});
  const Vec v = vac.product_state({0, 0}, {vac.modes[0].cat_plus});
  for (const auto& g : gauge_generators(vac)) CHECK(expectation(g, v) == doctest::Approx(1.0));

  p.g3 = 0.0;
  const System off = project_hamiltonian(build_link(p));
  CHECK(std::abs(a.dot(off.H * b)) == 0.0);
}
