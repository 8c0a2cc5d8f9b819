#pragma once

// Product-state bases over a Layout, optionally restricted to a fixed total
// excitation number on a subset of factors (the matter sector).

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catlgt/fock.hpp"

namespace catlgt {

/// Refuse bases larger than this.
inline constexpr std::uint64_t kMaxBasisStates = 500000;

/// A local factor of a product operator: (site, matrix on that site).
struct LocalFactor {
  std::size_t site;
  const Mat* op;
};

class ProductBasis {
 public:
  /// Every product state of the layout.
  static ProductBasis full(const Layout& layout);
  /// States whose digits on `counted_sites` sum to `total`; other sites free.
  static ProductBasis sector(const Layout& layout, std::vector<std::size_t> counted_sites, std::size_t total);

  const Layout& layout() const { return layout_; }
  Index size() const { return static_cast<Index>(keys_.size()); }
  bool is_full() const { return full_; }
  std::size_t digit(Index state, std::size_t site) const;
  std::vector<std::size_t> digits(Index state) const;
  std::optional<Index> find(std::span<const std::size_t> digits) const;

  /// Matrix of the product of local factors (identity elsewhere), restricted
  /// to this basis. Exact for operators that preserve the sector.
  SpMat op(std::span<const LocalFactor> factors) const;
  SpMat embed(const Mat& local, std::size_t site) const;
  SpMat identity() const;

  /// Amplitudes of a product state restricted to the basis (not renormalised).
  Vec product_state(std::span<const Vec> locals) const;
  /// Reduced density matrix of one factor.
  DensityMatrix reduced(const Vec& psi, std::size_t site) const;

 private:
  ProductBasis(Layout layout, bool full);
  std::uint64_t encode(std::span<const std::size_t> digits) const;
  void add(std::span<const std::size_t> digits);

  Layout layout_;
  bool full_ = false;
  std::vector<std::uint64_t> strides_;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<std::uint64_t, Index> index_;
};

}  // namespace catlgt
