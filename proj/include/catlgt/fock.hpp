#pragma once

// Truncated-Fock-space operator algebra: ladder operators, coherent and cat
// states, displacements, parity, tensor products, partial traces and
// Franck-Condon overlaps.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catlgt/types.hpp"

namespace catlgt {

enum class BasisKind {
  Fock,             // photon-number basis, 0..dim-1
  FieldEigenbasis,  // lowest-excitation eigenstates of a gauge-mode Hamiltonian
  CatPair,          // {|C+>, |C->}
};

struct HilbertSpace {
  std::size_t dim = 2;
  std::string label;
  BasisKind kind = BasisKind::Fock;

  static HilbertSpace fock(std::size_t dim, std::string label = {});
  void validate() const;
};

enum class Parity { Even, Odd };

inline int sign(Parity p) { return p == Parity::Even ? 1 : -1; }
inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

/// Ordered list of factor spaces of a tensor-product space, e.g.
/// a1 (x) b (x) a2 for a single link.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<HilbertSpace> factors);

  std::size_t size() const { return factors_.size(); }
  const HilbertSpace& operator[](std::size_t site) const { return factors_.at(site); }
  const std::vector<HilbertSpace>& factors() const { return factors_; }
  std::vector<std::size_t> dims() const;
  /// Product of all factor dimensions (saturates at UINT64_MAX).
  std::uint64_t full_dim() const;
  std::size_t site_of(const std::string& label) const;

 private:
  std::vector<HilbertSpace> factors_;
};

// Single-mode operators (dense, Fock basis).
Mat destroy(const HilbertSpace& space);
Mat create(const HilbertSpace& space);
Mat number(const HilbertSpace& space);
Mat identity(const HilbertSpace& space);
Mat parity_operator(const HilbertSpace& space);

/// D(beta) = exp(beta b^+ - beta^* b), exponentiated at the working cutoff.
Mat displacement(const HilbertSpace& space, cplx beta);

// States. Analytic amplitudes are renormalised after truncation; a warning is
// emitted when the discarded weight exceeds 1e-8 or |beta|^2 > dim/4.
Vec fock_state(const HilbertSpace& space, std::size_t n);
Vec coherent_state(const HilbertSpace& space, cplx beta);
Vec cat_state(const HilbertSpace& space, double beta0, Parity parity);
Vec displaced_fock_state(const HilbertSpace& space, std::size_t n, cplx beta);

/// N^{+-} = 1 / sqrt(2 (1 +- exp(-2 beta0^2))).
double cat_normalization(double beta0, Parity parity);

/// Kronecker product in the given order (first factor is most significant).
SpMat tensor(std::span<const Mat> ops);
Vec tensor_state(std::span<const Vec> states);
/// I (x) ... (x) op (x) ... (x) I on the full product space of `layout`.
SpMat embed(const Mat& op, std::size_t site, const Layout& layout);

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity to `tol`.
  explicit DensityMatrix(Mat rho, double tol = 1e-9);
  static DensityMatrix pure(const Vec& psi);

  const Mat& matrix() const { return rho_; }
  Index dim() const { return rho_.rows(); }
  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }
  double expectation(const Mat& op) const { return (rho_ * op).trace().real(); }

 private:
  Mat rho_;
};

/// Reduced density matrix of factor `keep` for a state on the full product
/// space of `layout`.
DensityMatrix partial_trace(const Vec& psi, const Layout& layout, std::size_t keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const Layout& layout, std::size_t keep);

/// F_{n,m}(alpha, beta) = <n| D(alpha) D^+(beta) |m>, evaluated with matrices at
/// a cutoff that is doubled from `start_dim` until the value changes by < 1e-10.
cplx franck_condon(std::size_t n, std::size_t m, cplx alpha, cplx beta, std::size_t start_dim = 32,
                   std::size_t max_dim = 1024);

}  // namespace catlgt
