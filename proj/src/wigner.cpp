#include "catlgt/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "catlgt/diagnostics.hpp"
#include "catlgt/dynamics.hpp"
#include "catlgt/linalg.hpp"

namespace catlgt {

PhaseSpaceGrid PhaseSpaceGrid::symmetric(double half_width, std::size_t resolution) {
  PhaseSpaceGrid g{-half_width, half_width, -half_width, half_width, resolution};
  g.validate();
  return g;
}

PhaseSpaceGrid PhaseSpaceGrid::for_beta0(double beta0, std::size_t resolution) {
  return symmetric(beta0 + 3.0, resolution);
}

void PhaseSpaceGrid::validate() const {
  if (resolution < 32) throw Error(ErrorKind::Validation, "phase-space grid needs resolution >= 32");
  if (!(x_max > x_min) || !(p_max > p_min)) throw Error(ErrorKind::Validation, "phase-space grid has empty extent");
}

double PhaseSpaceGrid::x(std::size_t i) const {
  return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

double PhaseSpaceGrid::p(std::size_t j) const {
  return p_min + (p_max - p_min) * static_cast<double>(j) / static_cast<double>(resolution - 1);
}

double PhaseSpaceGrid::cell_area() const {
  const double n = static_cast<double>(resolution - 1);
  return (x_max - x_min) / n * (p_max - p_min) / n;
}

double PhaseSpaceGrid::max_abs_alpha_sq() const {
  const double x = std::max(std::abs(x_min), std::abs(x_max));
  const double p = std::max(std::abs(p_min), std::abs(p_max));
  return x * x + p * p;
}

double WignerField::integral() const {
  // Trapezoid rule on the uniform grid.
  const Index n = values.rows();
  double acc = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < values.cols(); ++j) {
      const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == values.cols() - 1) ? 0.5 : 1.0;
      acc += wi * wj * values(i, j);
    }
  return acc * grid.cell_area();
}

WignerEvaluator::WignerEvaluator(const DensityMatrix& rho, double max_abs_alpha_sq, std::size_t max_dim) {
  const auto d = static_cast<std::size_t>(rho.dim());
  std::size_t work = std::max(d, static_cast<std::size_t>(std::ceil(4.0 * max_abs_alpha_sq)));
  if (work > max_dim) {
    work = std::max(d, max_dim);
    if (max_abs_alpha_sq > static_cast<double>(work) / 4.0) {
      std::ostringstream os;
      os << "wigner: |alpha|^2 = " << max_abs_alpha_sq << " exceeds dim/4 at working cutoff " << work;
      warn(os.str());
    }
  }
  const auto space = HilbertSpace::fock(work, "wigner");
  const Mat b = destroy(space);
  const Mat k = kI * (b.adjoint() - b);
  Eigen::SelfAdjointEigenSolver<Mat> solver(k);
  eigvals_ = solver.eigenvalues();
  v_ = solver.eigenvectors();
  parity_rotated_ = v_.adjoint() * parity_operator(space) * v_;

  Eigen::SelfAdjointEigenSolver<Mat> rs(rho.matrix());
  for (Index i = 0; i < rs.eigenvalues().size(); ++i) {
    const double w = rs.eigenvalues()(i);
    if (w <= 1e-14) continue;
    Vec padded = Vec::Zero(static_cast<Index>(work));
    padded.head(rho.dim()) = rs.eigenvectors().col(i);
    weights_.push_back(w);
    vectors_.push_back(std::move(padded));
  }
}

double WignerEvaluator::operator()(cplx alpha, double* imag_residue) const {
  // D(r e^{i theta}) = R D(r) R^+ with R = exp(i theta n) and D(r) = V exp(-i r Lambda) V^+,
  // so <psi| D Pi D^+ |psi> = y^+ E A E^+ y with y = V^+ R^+ psi.
  const double r = std::abs(alpha);
  const double theta = std::arg(alpha);
  const Index d = eigvals_.size();
  Vec e(d);
  for (Index k = 0; k < d; ++k) e(k) = std::exp(-kI * r * eigvals_(k));
  cplx acc = 0.0;
  for (std::size_t s = 0; s < vectors_.size(); ++s) {
    Vec rotated(d);
    for (Index n = 0; n < d; ++n) rotated(n) = std::polar(1.0, -theta * static_cast<double>(n)) * vectors_[s](n);
    const Vec y = (v_.adjoint() * rotated).cwiseProduct(e.conjugate());
    acc += weights_[s] * y.dot(parity_rotated_ * y);
  }
  if (imag_residue) *imag_residue = std::abs(acc.imag()) * 2.0 / std::numbers::pi;
  return acc.real() * 2.0 / std::numbers::pi;
}

WignerField wigner(const DensityMatrix& rho, const PhaseSpaceGrid& grid, std::size_t workers) {
  grid.validate();
  const WignerEvaluator eval(rho, grid.max_abs_alpha_sq());
  WignerField f{grid, Eigen::MatrixXd::Zero(static_cast<Index>(grid.resolution), static_cast<Index>(grid.resolution)), 0.0};
  std::vector<double> imag(grid.resolution, 0.0);
  parallel_for(grid.resolution, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < grid.resolution; ++j) {
      double res = 0.0;
      f.values(static_cast<Index>(i), static_cast<Index>(j)) = eval(cplx(grid.x(i), grid.p(j)), &res);
      imag[i] = std::max(imag[i], res);
    }
  });
  for (double v : imag) f.max_imag = std::max(f.max_imag, v);
  return f;
}

DensityMatrix fock_marginal(const System& sys, const Vec& psi, std::size_t site) {
  const DensityMatrix reduced = sys.basis.reduced(psi, site);
  for (std::size_t k = 0; k < sys.gauge_sites.size(); ++k) {
    if (sys.gauge_sites[k] != site) continue;
    const Mat& iso = sys.modes[k].isometry;
    Mat rho = iso * reduced.matrix() * iso.adjoint();
    // The isometry columns are orthonormal only up to truncation of the cat
    // vectors; restore unit trace.
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()), 1e-8);
  }
  return reduced;
}

WignerField marginal_wigner(const System& sys, const Vec& psi, std::size_t site, const PhaseSpaceGrid& grid,
                            std::size_t workers) {
  return wigner(fock_marginal(sys, psi, site), grid, workers);
}

namespace {

Eigen::MatrixXd polar_values(const WignerEvaluator& eval, const std::vector<double>& radii, std::size_t n_theta) {
  Eigen::MatrixXd w(static_cast<Index>(radii.size()), static_cast<Index>(n_theta));
  for (std::size_t i = 0; i < radii.size(); ++i)
    for (std::size_t j = 0; j < n_theta; ++j) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta);
      w(static_cast<Index>(i), static_cast<Index>(j)) = eval(std::polar(radii[i], th));
    }
  return w;
}

}  // namespace

double angular_variance(const DensityMatrix& rho, double radius, std::size_t n_theta) {
  if (n_theta < 2) throw Error(ErrorKind::Validation, "angular_variance: need at least two angles");
  const WignerEvaluator eval(rho, radius * radius);
  const Eigen::MatrixXd w = polar_values(eval, {radius}, n_theta);
  const double mean = w.mean();
  return (w.array() - mean).square().mean();
}

double rotational_asymmetry(const DensityMatrix& rho, double r_max, std::size_t n_r, std::size_t n_theta) {
  if (n_r < 2 || n_theta < 2 || !(r_max > 0.0)) throw Error(ErrorKind::Validation, "rotational_asymmetry: bad grid");
  std::vector<double> radii;
  for (std::size_t i = 0; i < n_r; ++i) radii.push_back(r_max * (static_cast<double>(i) + 0.5) / static_cast<double>(n_r));
  const WignerEvaluator eval(rho, r_max * r_max);
  const Eigen::MatrixXd w = polar_values(eval, radii, n_theta);
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    const double mean = w.row(i).mean();
    num += radii[static_cast<std::size_t>(i)] * (w.row(i).array() - mean).square().sum();
    den += radii[static_cast<std::size_t>(i)] * w.row(i).array().square().sum();
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace catlgt
