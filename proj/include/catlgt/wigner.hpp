#pragma once

// Wigner quasi-probability W(alpha) = (2/pi) Tr[rho D(alpha) Pi D^+(alpha)],
// with alpha = x + i p.

#include "catlgt/fock.hpp"
#include "catlgt/model.hpp"

namespace catlgt {

struct PhaseSpaceGrid {
  double x_min = -5.0, x_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  std::size_t resolution = 128;

  static PhaseSpaceGrid symmetric(double half_width, std::size_t resolution = 128);
  /// [-(beta0 + 3), beta0 + 3] on both axes.
  static PhaseSpaceGrid for_beta0(double beta0, std::size_t resolution = 128);
  void validate() const;
  double x(std::size_t i) const;
  double p(std::size_t j) const;
  double cell_area() const;
  double max_abs_alpha_sq() const;
};

struct WignerField {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;  // values(i, j) = W(x_i, p_j)
  double max_imag = 0.0;   // largest imaginary residue before discarding it
  double integral() const;
};

/// Evaluates W for one density matrix. The state is zero-padded to a Fock
/// cutoff of at least 4 max|alpha|^2 (capped at `max_dim`); a warning is
/// emitted when the cap prevents that.
class WignerEvaluator {
 public:
  WignerEvaluator(const DensityMatrix& rho, double max_abs_alpha_sq, std::size_t max_dim = 256);
  double operator()(cplx alpha, double* imag_residue = nullptr) const;
  std::size_t working_dim() const { return static_cast<std::size_t>(eigvals_.size()); }

 private:
  RVec eigvals_;               // spectrum of K = i(b^+ - b)
  Mat v_;                      // its eigenvectors
  Mat parity_rotated_;         // V^+ Pi V
  std::vector<double> weights_;
  std::vector<Vec> vectors_;   // eigenvectors of rho with non-negligible weight
};

WignerField wigner(const DensityMatrix& rho, const PhaseSpaceGrid& grid, std::size_t workers = 1);

/// Reduced state of `site`, mapped back to the Fock basis of that mode.
DensityMatrix fock_marginal(const System& sys, const Vec& psi, std::size_t site);
WignerField marginal_wigner(const System& sys, const Vec& psi, std::size_t site, const PhaseSpaceGrid& grid,
                            std::size_t workers = 1);

/// Variance of W over `n_theta` angles on the circle |alpha| = radius.
double angular_variance(const DensityMatrix& rho, double radius, std::size_t n_theta = 64);

/// int (W - <W>_theta)^2 / int W^2 on a polar grid of radius r_max.
double rotational_asymmetry(const DensityMatrix& rho, double r_max, std::size_t n_r = 48, std::size_t n_theta = 64);

}  // namespace catlgt
