#include "catlgt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace catlgt {

void fix_phases(Mat& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index r = 0; r < vectors.rows(); ++r) {
      // Strict comparison with a small slack keeps the choice stable when two
      // entries have equal magnitude up to rounding.
      const double a = std::abs(vectors(r, c));
      if (a > best_abs * (1.0 + 1e-10)) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs <= 0.0) continue;
    const cplx phase = std::conj(vectors(best, c)) / best_abs;
    vectors.col(c) *= phase;
    vectors(best, c) = cplx(std::abs(vectors(best, c)), 0.0);
  }
}

namespace {

double max_residual(const Mat& h, const RVec& w, const Mat& v) {
  double worst = 0.0;
  for (Index k = 0; k < w.size(); ++k)
    worst = std::max(worst, (h * v.col(k) - w(k) * v.col(k)).norm());
  return worst;
}

double max_residual(const SpMat& h, const RVec& w, const Mat& v) {
  double worst = 0.0;
  for (Index k = 0; k < w.size(); ++k)
    worst = std::max(worst, (h * v.col(k) - w(k) * v.col(k)).norm());
  return worst;
}

}  // namespace

EigenDecomposition eigh(const Mat& h, std::string source) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::Dimension, "eigh: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::Convergence, "eigh: dense Hermitian solver failed");
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  fix_phases(out.eigenvectors);
  out.source = std::move(source);
  out.max_residual = max_residual(h, out.eigenvalues, out.eigenvectors);
  return out;
}

EigenDecomposition eigh(const SpMat& h, std::string source, Index count, SpectrumEnd end) {
  const Index n = h.rows();
  if (n <= kDenseEigenLimit || count < 0 || count >= n) {
    auto full = eigh(Mat(h), std::move(source));
    if (count < 0 || count >= n) return full;
    EigenDecomposition out;
    out.source = full.source;
    if (end == SpectrumEnd::Lowest) {
      out.eigenvalues = full.eigenvalues.head(count);
      out.eigenvectors = full.eigenvectors.leftCols(count);
    } else {
      out.eigenvalues = full.eigenvalues.tail(count);
      out.eigenvectors = full.eigenvectors.rightCols(count);
    }
    out.max_residual = max_residual(h, out.eigenvalues, out.eigenvectors);
    return out;
  }
  auto out = lanczos_extremal(h, count, end);
  out.source = std::move(source);
  return out;
}

EigenDecomposition lanczos_extremal(const SpMat& h, Index count, SpectrumEnd end, double tol,
                                    Index max_krylov) {
  const Index n = h.rows();
  if (count <= 0 || count > n) throw Error(ErrorKind::Validation, "lanczos: invalid eigenpair count");
  const double scale = std::max(norm_bound(h), 1e-300);

  // Deterministic start vector.
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  Vec start(n);
  for (Index i = 0; i < n; ++i) start(i) = cplx(gauss(rng), gauss(rng));
  start.normalize();

  Index krylov = std::min(n, std::max<Index>(2 * count + 40, 80));
  max_krylov = std::min(n, max_krylov);
  while (true) {
    Mat basis(n, krylov);
    RVec alpha = RVec::Zero(krylov);
    RVec beta = RVec::Zero(krylov);
    basis.col(0) = start;
    Index built = krylov;
    for (Index j = 0; j < krylov; ++j) {
      Vec w = h * basis.col(j);
      alpha(j) = basis.col(j).dot(w).real();
      // Full re-orthogonalisation, applied twice.
      for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
      if (j + 1 == krylov) break;
      beta(j) = w.norm();
      if (beta(j) < 1e-13 * scale) {  // invariant subspace
        built = j + 1;
        break;
      }
      basis.col(j + 1) = w / beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(alpha.head(built), beta.head(std::max<Index>(built - 1, 0)));
    const Index take = std::min(count, built);
    EigenDecomposition out;
    out.eigenvalues.resize(take);
    out.eigenvectors.resize(n, take);
    for (Index k = 0; k < take; ++k) {
      const Index idx = end == SpectrumEnd::Lowest ? k : built - take + k;
      out.eigenvalues(k) = tri.eigenvalues()(idx);
      out.eigenvectors.col(k) = basis.leftCols(built) * tri.eigenvectors().col(idx).cast<cplx>();
      out.eigenvectors.col(k).normalize();
    }
    fix_phases(out.eigenvectors);
    out.max_residual = max_residual(h, out.eigenvalues, out.eigenvectors);
    if (take == count && out.max_residual <= tol * scale) return out;
    if (krylov >= max_krylov || built < krylov)
      throw Error(ErrorKind::Convergence, "lanczos: Ritz pairs not converged at maximum Krylov dimension");
    krylov = std::min(max_krylov, 2 * krylov);
  }
}

Mat expm_hermitian(const Mat& k, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(k);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "expm_hermitian: solver failed");
  const Vec phases = (-kI * t * solver.eigenvalues().cast<cplx>()).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

double hermiticity_defect(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const SpMat& m) {
  SpMat diff = m - SpMat(m.adjoint());
  double worst = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double norm_bound(const SpMat& m) {
  RVec rows = RVec::Zero(m.rows());
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double norm_bound(const Mat& m) { return m.size() ? m.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

std::vector<std::pair<Index, Index>> degenerate_clusters(const RVec& eigenvalues, double tol) {
  std::vector<std::pair<Index, Index>> clusters;
  Index begin = 0;
  for (Index i = 1; i <= eigenvalues.size(); ++i) {
    if (i == eigenvalues.size() || eigenvalues(i) - eigenvalues(i - 1) > tol) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return clusters;
}

double expectation(const SpMat& op, const Vec& v) { return v.dot(op * v).real(); }
double expectation(const Mat& op, const Vec& v) { return v.dot(op * v).real(); }

}  // namespace catlgt
