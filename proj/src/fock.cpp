#include "catlgt/fock.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "catlgt/diagnostics.hpp"
#include "catlgt/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace catlgt {

HilbertSpace HilbertSpace::fock(std::size_t dim, std::string label) {
  HilbertSpace s{dim, std::move(label), BasisKind::Fock};
  s.validate();
  return s;
}

void HilbertSpace::validate() const {
  if (dim < 2) throw Error(ErrorKind::Dimension, "Hilbert space '" + label + "' needs dim >= 2");
  if (kind == BasisKind::CatPair && dim != 2)
    throw Error(ErrorKind::Dimension, "cat-pair space '" + label + "' must have dim 2");
}

Layout::Layout(std::vector<HilbertSpace> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorKind::Dimension, "layout needs at least one factor");
  for (const auto& f : factors_) f.validate();
}

std::vector<std::size_t> Layout::dims() const {
  std::vector<std::size_t> d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.dim);
  return d;
}

std::uint64_t Layout::full_dim() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (const auto& f : factors_) {
    if (total > kMax / f.dim) return kMax;
    total *= f.dim;
  }
  return total;
}

std::size_t Layout::site_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw Error(ErrorKind::Validation, "layout has no factor labelled '" + label + "'");
}

namespace {

void require_fock(const HilbertSpace& space, const char* what) {
  space.validate();
  if (space.kind != BasisKind::Fock)
    throw Error(ErrorKind::Validation, std::string(what) + " requires a Fock-basis space");
}

Index as_index(std::size_t n) { return static_cast<Index>(n); }

void check_amplitude(const HilbertSpace& space, cplx beta, const char* what) {
  if (std::norm(beta) > static_cast<double>(space.dim) / 4.0) {
    std::ostringstream os;
    os << what << ": |beta|^2 = " << std::norm(beta) << " exceeds dim/4 for '" << space.label
       << "' (dim " << space.dim << "); cutoff may be insufficient";
    warn(os.str());
  }
}

Vec renormalised(Vec v, const HilbertSpace& space, double analytic_norm_sq, const char* what) {
  const double kept = v.squaredNorm();
  if (kept <= 0.0) throw Error(ErrorKind::Numerical, std::string(what) + ": state vanishes at this cutoff");
  const double discarded = 1.0 - kept / analytic_norm_sq;
  if (discarded > 1e-8) {
    std::ostringstream os;
    os << what << ": truncation discards weight " << discarded << " in '" << space.label << "' (dim "
       << space.dim << ")";
    warn(os.str());
  }
  return v / std::sqrt(kept);
}

// log(|beta|^n / sqrt(n!)) computed stably.
double log_poisson_amplitude(double abs_beta, std::size_t n) {
  if (abs_beta == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * std::log(abs_beta) - 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

Mat destroy(const HilbertSpace& space) {
  require_fock(space, "destroy");
  const Index d = as_index(space.dim);
  Mat b = Mat::Zero(d, d);
  for (Index n = 1; n < d; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

Mat create(const HilbertSpace& space) { return destroy(space).adjoint(); }

Mat number(const HilbertSpace& space) {
  require_fock(space, "number");
  const Index d = as_index(space.dim);
  Mat n = Mat::Zero(d, d);
  for (Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Mat identity(const HilbertSpace& space) {
  space.validate();
  return Mat::Identity(as_index(space.dim), as_index(space.dim));
}

Mat parity_operator(const HilbertSpace& space) {
  require_fock(space, "parity_operator");
  const Index d = as_index(space.dim);
  Mat p = Mat::Zero(d, d);
  for (Index k = 0; k < d; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return p;
}

Mat displacement(const HilbertSpace& space, cplx beta) {
  require_fock(space, "displacement");
  check_amplitude(space, beta, "displacement");
  if (beta == cplx(0.0)) return identity(space);
  const Mat b = destroy(space);
  // exp(A) with A = beta b^+ - beta^* b anti-Hermitian; A = -i K, K = i A Hermitian.
  const Mat k = kI * (beta * b.adjoint() - std::conj(beta) * b);
  return expm_hermitian(k, 1.0);
}

Vec fock_state(const HilbertSpace& space, std::size_t n) {
  space.validate();
  if (n >= space.dim) throw Error(ErrorKind::Dimension, "fock_state: n exceeds cutoff of '" + space.label + "'");
  Vec v = Vec::Zero(as_index(space.dim));
  v(as_index(n)) = 1.0;
  return v;
}

Vec coherent_state(const HilbertSpace& space, cplx beta) {
  require_fock(space, "coherent_state");
  check_amplitude(space, beta, "coherent_state");
  const double r = std::abs(beta);
  const double phase = std::arg(beta);
  Vec v(as_index(space.dim));
  for (std::size_t n = 0; n < space.dim; ++n) {
    const double mag = std::exp(-0.5 * r * r + log_poisson_amplitude(r, n));
    v(as_index(n)) = std::polar(mag, phase * static_cast<double>(n));
  }
  return renormalised(std::move(v), space, 1.0, "coherent_state");
}

double cat_normalization(double beta0, Parity parity) {
  // 1 +- exp(-2 beta0^2); expm1 keeps the odd branch accurate for small beta0.
  const double e = -2.0 * beta0 * beta0;
  const double denom = parity == Parity::Even ? 2.0 + std::expm1(e) : -std::expm1(e);
  if (denom <= 0.0) throw Error(ErrorKind::Validation, "odd cat undefined at zero amplitude");
  return 1.0 / std::sqrt(2.0 * denom);
}

Vec cat_state(const HilbertSpace& space, double beta0, Parity parity) {
  require_fock(space, "cat_state");
  if (!(beta0 >= 0.0)) throw Error(ErrorKind::Validation, "cat_state: beta0 must be real and non-negative");
  if (parity == Parity::Odd && beta0 == 0.0) throw Error(ErrorKind::Validation, "odd cat undefined at zero amplitude");
  check_amplitude(space, beta0, "cat_state");
  // |beta> +- |-beta> has amplitude 2 e^{-b^2/2} b^n/sqrt(n!) on even (odd) n
  // only; the wrong sector is set to exactly zero.
  const int keep = parity == Parity::Even ? 0 : 1;
  Vec v = Vec::Zero(as_index(space.dim));
  for (std::size_t n = static_cast<std::size_t>(keep); n < space.dim; n += 2)
    v(as_index(n)) = std::exp(-0.5 * beta0 * beta0 + log_poisson_amplitude(beta0, n));
  // Analytic norm^2 of this unnormalised vector is 1/(4 N^2) / 2 = (1 +- e^{-2b^2}) / 2.
  const double n_pm = cat_normalization(beta0, parity);
  const double analytic = 1.0 / (4.0 * n_pm * n_pm);
  return renormalised(std::move(v), space, analytic, "cat_state");
}

Vec displaced_fock_state(const HilbertSpace& space, std::size_t n, cplx beta) {
  return displacement(space, beta) * fock_state(space, n);
}

SpMat tensor(std::span<const Mat> ops) {
  if (ops.empty()) throw Error(ErrorKind::Dimension, "tensor: empty operator list");
  SpMat out = ops[0].sparseView();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    SpMat next = ops[i].sparseView();
    SpMat prod = Eigen::kroneckerProduct(out, next).eval();
    out = std::move(prod);
  }
  return out;
}

Vec tensor_state(std::span<const Vec> states) {
  if (states.empty()) throw Error(ErrorKind::Dimension, "tensor_state: empty state list");
  Vec out = states[0];
  for (std::size_t i = 1; i < states.size(); ++i) {
    Vec prod = Eigen::kroneckerProduct(out, states[i]).eval();
    out = std::move(prod);
  }
  return out;
}

SpMat embed(const Mat& op, std::size_t site, const Layout& layout) {
  if (site >= layout.size()) throw Error(ErrorKind::Validation, "embed: invalid site index");
  if (op.rows() != as_index(layout[site].dim) || op.cols() != op.rows())
    throw Error(ErrorKind::Dimension, "embed: operator does not match factor '" + layout[site].label + "'");
  std::vector<Mat> ops;
  ops.reserve(layout.size());
  for (std::size_t s = 0; s < layout.size(); ++s) ops.push_back(s == site ? op : identity(layout[s]));
  return tensor(ops);
}

DensityMatrix::DensityMatrix(Mat rho, double tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
    throw Error(ErrorKind::Dimension, "density matrix must be square and non-empty");
  if (hermiticity_defect(rho_) > tol) throw Error(ErrorKind::Numerical, "density matrix is not Hermitian");
  if (std::abs(rho_.trace() - cplx(1.0)) > tol) throw Error(ErrorKind::Numerical, "density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Mat> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol)
    throw Error(ErrorKind::Numerical, "density matrix has negative eigenvalues");
}

DensityMatrix DensityMatrix::pure(const Vec& psi) { return DensityMatrix(psi * psi.adjoint()); }

DensityMatrix partial_trace(const Vec& psi, const Layout& layout, std::size_t keep) {
  if (keep >= layout.size()) throw Error(ErrorKind::Validation, "partial_trace: invalid site index");
  if (static_cast<std::uint64_t>(psi.size()) != layout.full_dim())
    throw Error(ErrorKind::Dimension, "partial_trace: state does not match layout");
  Index left = 1, right = 1;
  for (std::size_t s = 0; s < keep; ++s) left *= as_index(layout[s].dim);
  for (std::size_t s = keep + 1; s < layout.size(); ++s) right *= as_index(layout[s].dim);
  const Index d = as_index(layout[keep].dim);
  Mat rho = Mat::Zero(d, d);
  // psi index = (l * d + i) * right + r
  for (Index l = 0; l < left; ++l) {
    Mat block(d, right);
    for (Index i = 0; i < d; ++i) block.row(i) = psi.segment((l * d + i) * right, right).transpose();
    rho.noalias() += block * block.adjoint();
  }
  return DensityMatrix(rho);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Layout& layout, std::size_t keep) {
  if (keep >= layout.size()) throw Error(ErrorKind::Validation, "partial_trace: invalid site index");
  if (static_cast<std::uint64_t>(rho.dim()) != layout.full_dim())
    throw Error(ErrorKind::Dimension, "partial_trace: density matrix does not match layout");
  Index left = 1, right = 1;
  for (std::size_t s = 0; s < keep; ++s) left *= as_index(layout[s].dim);
  for (std::size_t s = keep + 1; s < layout.size(); ++s) right *= as_index(layout[s].dim);
  const Index d = as_index(layout[keep].dim);
  const Mat& m = rho.matrix();
  Mat out = Mat::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      cplx acc = 0.0;
      for (Index l = 0; l < left; ++l)
        for (Index r = 0; r < right; ++r) acc += m((l * d + i) * right + r, (l * d + j) * right + r);
      out(i, j) = acc;
    }
  return DensityMatrix(out);
}

cplx franck_condon(std::size_t n, std::size_t m, cplx alpha, cplx beta, std::size_t start_dim,
                   std::size_t max_dim) {
  std::size_t dim = std::max({start_dim, n + 2, m + 2, std::size_t{2}});
  auto evaluate = [&](std::size_t d) {
    const auto space = HilbertSpace::fock(d, "fc");
    // Large displacements at small cutoffs are expected here; the doubling
    // loop is the convergence control, so the cutoff warning is muted.
    const auto prev = set_warning_sink({});
    const Mat da = displacement(space, alpha);
    const Mat db = displacement(space, beta);
    set_warning_sink(prev);
    return (da * db.adjoint())(as_index(n), as_index(m));
  };
  cplx previous = evaluate(dim);
  while (2 * dim <= max_dim) {
    dim *= 2;
    const cplx current = evaluate(dim);
    if (std::abs(current - previous) < 1e-10) return current;
    previous = current;
  }
  throw Error(ErrorKind::Convergence, "franck_condon: not converged at maximum cutoff");
}

}  // namespace catlgt
