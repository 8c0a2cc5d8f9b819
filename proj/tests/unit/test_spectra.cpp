#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "catlgt/diagnostics.hpp"
#include "catlgt/spectra.hpp"

using namespace catlgt;

TEST_CASE("KPO spectrum") {
  auto p = LinkParams::from_beta0(0.03, 2.0, 0.0);
  p.gauge_dim = 80;
  const auto s = kpo_spectrum(p, 6);
  CHECK(s.labels[0] == "C+");
  CHECK(s.labels[1] == "C-");
  CHECK(s.parity[0] == Parity::Even);
  CHECK(s.parity[1] == Parity::Odd);
  // numpy eigvalsh at dim 80.
  CHECK(std::abs(s.energies(0) - 0.48) < 1e-12);
  CHECK(std::abs(s.energies(2) - 0.08727602277438572) < 1e-10);
  CHECK(std::abs(s.gap - 0.3927239772256106) < 1e-10);
  CHECK(s.cat_splitting < 1e-3 * s.gap);
  const Vec cat = cat_state(HilbertSpace::fock(80), 2.0, Parity::Even);
  CHECK(std::abs(std::abs(cat.dot(s.vectors.col(0))) - 1.0) < 1e-10);

  p.G = 0.0;
  const auto kerr = kpo_spectrum(p, 4);
  CHECK(kerr.energies(0) == doctest::Approx(0.0));
  CHECK(kerr.energies(1) == doctest::Approx(0.0));
  CHECK(kerr.energies(2) == doctest::Approx(-0.06));
}

TEST_CASE("truncated basis") {
  auto p = LinkParams::from_beta0(0.03, 1.0, 0.0);
  p.gauge_dim = 20;
  const auto full = truncated_basis(p, 20);
  const RVec a = eigh(Mat(full.b_reduced.adjoint() * full.b_reduced)).eigenvalues;
  const Mat b = destroy(HilbertSpace::fock(20));
  const RVec ref = eigh(Mat(b.adjoint() * b)).eigenvalues;
  CHECK((a - ref).norm() < 1e-10);
  const auto t = truncated_basis(p, 6);
  CHECK(t.V.cols() == 6);
  CHECK((t.V.adjoint() * t.V - Mat::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("spectrum along a g3 ramp") {
  auto p = LinkParams::from_beta0(0.03, 2.0, 0.0);
  p.omega_matter = {0.48, 0.48};
  ScopedWarningCapture cap;
  const auto pts = spectrum_vs_g3(p, {0.0, 0.02, 0.6});
  int ones = 0;
  for (Index k = 0; k < pts[0].cat_weights.size(); ++k) {
    CHECK(pts[0].cat_weights(k) >= -1e-12);
    CHECK(pts[0].cat_weights(k) <= 1 + 1e-12);
    if (pts[0].cat_weights(k) > 1 - 1e-9) ++ones;
  }
  // One matter excitation on either site, times the two cats.
  CHECK(ones == 4);
  CHECK(pts[1].cat_weights.maxCoeff() > 0.99);
  CHECK(rabi_frequencies(2.0, 0.6).plus > p.omega_gap());
  CHECK(pts[2].cat_weights.maxCoeff() < 0.9);
}

TEST_CASE("Hinton matrix") {
  auto p = LinkParams::from_beta0(1.0, 2.0, 0.0);
  p.omega_matter = {p.omega_gap(), p.omega_gap()};
  const auto zero = hinton_elements(p);
  Eigen::MatrixXd off = zero.values;
  off.diagonal().setZero();
  CHECK(off.norm() < 1e-12);
  p.g3 = 0.16;
  const auto h = hinton_elements(p);
  CHECK((h.values - h.values.transpose()).norm() < 1e-12);
  double cat_cat = 0.0, cat_e = 0.0;
  for (std::size_t i = 0; i < h.labels.size(); ++i)
    for (std::size_t j = 0; j < h.labels.size(); ++j) {
      const bool ci = h.labels[i].find('C') != std::string::npos, cj = h.labels[j].find('C') != std::string::npos;
      const double v = std::abs(h.values(static_cast<Index>(i), static_cast<Index>(j)));
      if (i != j && ci && cj) cat_cat = std::max(cat_cat, v);
      if (ci != cj) cat_e = std::max(cat_e, v);
    }
  CHECK(cat_cat > cat_e);
}

TEST_CASE("Rabi matrix elements") {
  for (double b : {0.5, 1.0, 2.0}) {
    const auto p = LinkParams::from_beta0(0.03, b, 0.001);
    const auto e = rabi_matrix_elements(p);
    const auto r = rabi_frequencies(p);
    CHECK(std::abs(std::abs(e.full_plus) - r.plus / 2) / (r.plus / 2) < 1e-6);
    CHECK(std::abs(std::abs(e.full_minus) - r.minus / 2) / (r.minus / 2) < 1e-6);
    CHECK(std::abs(e.projected_plus - e.full_plus) < 1e-6 * std::abs(e.full_plus));
  }
  const auto z = rabi_matrix_elements(LinkParams::from_beta0(0.03, 2.0, 0.0));
  CHECK(std::abs(z.full_plus) == 0.0);
}
