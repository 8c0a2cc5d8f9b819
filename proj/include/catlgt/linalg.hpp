#pragma once

#include <string>
#include <utility>
#include <vector>

#include "catlgt/types.hpp"

namespace catlgt {

/// Hermitian eigendecomposition with eigenvalues in ascending order and
/// phase-fixed, orthonormal eigenvectors (columns).
struct EigenDecomposition {
  RVec eigenvalues;
  Mat eigenvectors;
  std::string source;
  double max_residual = 0.0;  // max_k ||H v_k - lambda_k v_k||

  Index size() const { return eigenvalues.size(); }
};

/// Dimension above which eigh() switches from dense to Lanczos.
inline constexpr Index kDenseEigenLimit = 3000;

enum class SpectrumEnd { Lowest, Highest };

/// Dense Hermitian diagonalisation.
EigenDecomposition eigh(const Mat& h, std::string source = {});

/// Full spectrum (dense) for small operators; `count` extremal pairs via
/// Lanczos above kDenseEigenLimit.
EigenDecomposition eigh(const SpMat& h, std::string source = {}, Index count = -1,
                        SpectrumEnd end = SpectrumEnd::Lowest);

/// Lanczos with full re-orthogonalisation. Grows the Krylov space until every
/// requested Ritz pair has residual <= tol * ||H||.
EigenDecomposition lanczos_extremal(const SpMat& h, Index count, SpectrumEnd end,
                                    double tol = 1e-10, Index max_krylov = 2000);

/// Makes the largest-magnitude entry of every column real and positive.
void fix_phases(Mat& vectors);

/// exp(-i t K) for Hermitian K via eigendecomposition.
Mat expm_hermitian(const Mat& k, double t);

/// Max absolute deviation of entries from the conjugate transpose.
double hermiticity_defect(const Mat& m);
double hermiticity_defect(const SpMat& m);

/// Infinity-norm (max absolute row sum); bounds the spectral norm.
double norm_bound(const SpMat& m);
double norm_bound(const Mat& m);

/// Groups consecutive eigenvalues (ascending) that differ by <= tol.
/// Returns half-open [begin, end) index ranges.
std::vector<std::pair<Index, Index>> degenerate_clusters(const RVec& eigenvalues, double tol);

/// <v|op|v> as a real number (op assumed Hermitian).
double expectation(const SpMat& op, const Vec& v);
double expectation(const Mat& op, const Vec& v);

}  // namespace catlgt
