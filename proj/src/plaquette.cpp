#include "catlgt/plaquette.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "catlgt/linalg.hpp"

namespace catlgt {

namespace {

Mat pauli_x() {
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

// Sigma^x on one of three qubits, tensored with the ancilla identity.
Mat qubit_x(int which) {
  Mat out = Mat::Identity(1, 1);
  for (int q = 0; q < 3; ++q) {
    const Mat f = q == which ? pauli_x() : Mat::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return Eigen::kroneckerProduct(out, Mat::Identity(3, 3)).eval();
}

Mat ancilla_hop(int i, int j) {
  Mat h = Mat::Zero(3, 3);
  h(i, j) = 1.0;
  return Eigen::kroneckerProduct(Mat::Identity(8, 8), h).eval();
}

}  // namespace

Mat plaquette_direct(double g3, const std::array<double, 3>& beta) {
  const Mat x = pauli_x();
  Mat xxx = Eigen::kroneckerProduct(Eigen::kroneckerProduct(x, x).eval(), x).eval();
  return 2.0 * g3 * beta[0] * beta[1] * beta[2] * xxx;
}

Mat plaquette_ancillary(double g) {
  Mat h = Mat::Zero(24, 24);
  const int links[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int l = 0; l < 3; ++l) {
    const Mat hop = qubit_x(l) * ancilla_hop(links[l][0], links[l][1]);
    h += -g * (hop + hop.adjoint());
  }
  return h;
}

std::array<double, 3> momentum_spectrum(double g, double phi) {
  std::array<double, 3> e{};
  for (int k = -1; k <= 1; ++k) e[static_cast<std::size_t>(k + 1)] = -2.0 * g * std::cos((2.0 * std::numbers::pi * k + phi) / 3.0);
  std::sort(e.begin(), e.end());
  return e;
}

RVec flux_sector_spectrum(double g, double phi) {
  const double target = std::cos(phi) >= 0.0 ? 1.0 : -1.0;
  const Mat h = plaquette_ancillary(g);
  // sigma^x eigenbasis on every qubit: |s_12 s_23 s_31> with s = +-1.
  std::vector<double> values;
  for (int cfg = 0; cfg < 8; ++cfg) {
    const double s[3] = {(cfg & 4) ? -1.0 : 1.0, (cfg & 2) ? -1.0 : 1.0, (cfg & 1) ? -1.0 : 1.0};
    if (s[0] * s[1] * s[2] != target) continue;
    // Projector onto this configuration (x) ancilla.
    Mat basis = Mat::Zero(24, 3);
    Vec q = Vec::Ones(1);
    for (int l = 0; l < 3; ++l) {
      Vec v(2);
      v << 1.0 / std::sqrt(2.0), s[l] / std::sqrt(2.0);
      q = Eigen::kroneckerProduct(q, v).eval();
    }
    for (int a = 0; a < 3; ++a) basis.col(a) = Eigen::kroneckerProduct(q, Vec::Unit(3, a)).eval();
    const Mat block = basis.adjoint() * h * basis;
    const auto dec = eigh(block, "plaquette flux sector");
    for (Index k = 0; k < dec.size(); ++k) values.push_back(dec.eigenvalues(k));
  }
  std::sort(values.begin(), values.end());
  RVec out(static_cast<Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) out(static_cast<Index>(k)) = values[k];
  return out;
}

}  // namespace catlgt
