#include "catlgt/basis.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace catlgt {

ProductBasis::ProductBasis(Layout layout, bool full) : layout_(std::move(layout)), full_(full) {
  if (layout_.full_dim() == std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorKind::Dimension, "product space dimension overflows 64 bits");
  strides_.assign(layout_.size(), 1);
  for (std::size_t s = layout_.size(); s-- > 1;) strides_[s - 1] = strides_[s] * layout_[s].dim;
}

std::uint64_t ProductBasis::encode(std::span<const std::size_t> digits) const {
  std::uint64_t key = 0;
  for (std::size_t s = 0; s < digits.size(); ++s) key += strides_[s] * digits[s];
  return key;
}

void ProductBasis::add(std::span<const std::size_t> digits) {
  const auto key = encode(digits);
  index_.emplace(key, static_cast<Index>(keys_.size()));
  keys_.push_back(key);
}

ProductBasis ProductBasis::full(const Layout& layout) {
  if (layout.full_dim() > kMaxBasisStates)
    throw Error(ErrorKind::Dimension, "basis has " + std::to_string(layout.full_dim()) +
                                          " states, above the limit of " + std::to_string(kMaxBasisStates));
  ProductBasis b(layout, true);
  const auto n = layout.full_dim();
  b.keys_.resize(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    b.keys_[k] = k;
    b.index_.emplace(k, static_cast<Index>(k));
  }
  return b;
}

ProductBasis ProductBasis::sector(const Layout& layout, std::vector<std::size_t> counted_sites, std::size_t total) {
  ProductBasis b(layout, false);
  std::vector<bool> counted(layout.size(), false);
  for (auto s : counted_sites) {
    if (s >= layout.size()) throw Error(ErrorKind::Validation, "sector: invalid site index");
    counted[s] = true;
  }
  // Odometer over all digits with pruning on the counted sum.
  const auto dims = layout.dims();
  std::vector<std::size_t> digits(layout.size(), 0);
  std::uint64_t produced = 0;
  auto recurse = [&](auto&& self, std::size_t site, std::size_t used) -> void {
    if (site == layout.size()) {
      if (used != total) return;
      if (++produced > kMaxBasisStates)
        throw Error(ErrorKind::Dimension, "sector basis exceeds the limit of " + std::to_string(kMaxBasisStates) +
                                              " states");
      b.add(digits);
      return;
    }
    for (std::size_t d = 0; d < dims[site]; ++d) {
      const std::size_t next = used + (counted[site] ? d : 0);
      if (next > total) break;
      digits[site] = d;
      self(self, site + 1, next);
    }
    digits[site] = 0;
  };
  recurse(recurse, 0, 0);
  if (b.keys_.empty()) throw Error(ErrorKind::Dimension, "sector basis is empty");
  return b;
}

std::size_t ProductBasis::digit(Index state, std::size_t site) const {
  return static_cast<std::size_t>((keys_.at(static_cast<std::size_t>(state)) / strides_[site]) % layout_[site].dim);
}

std::vector<std::size_t> ProductBasis::digits(Index state) const {
  std::vector<std::size_t> d(layout_.size());
  for (std::size_t s = 0; s < d.size(); ++s) d[s] = digit(state, s);
  return d;
}

std::optional<Index> ProductBasis::find(std::span<const std::size_t> digits) const {
  if (digits.size() != layout_.size()) return std::nullopt;
  for (std::size_t s = 0; s < digits.size(); ++s)
    if (digits[s] >= layout_[s].dim) return std::nullopt;
  auto it = index_.find(encode(digits));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SpMat ProductBasis::op(std::span<const LocalFactor> factors) const {
  for (const auto& f : factors) {
    if (f.site >= layout_.size()) throw Error(ErrorKind::Validation, "op: invalid site index");
    const auto d = static_cast<Index>(layout_[f.site].dim);
    if (f.op->rows() != d || f.op->cols() != d)
      throw Error(ErrorKind::Dimension, "op: local operator does not match factor '" + layout_[f.site].label + "'");
  }
  // Factors on the same site are multiplied in the given order (leftmost acts last).
  std::map<std::size_t, Mat> merged;
  for (const auto& f : factors) {
    auto it = merged.find(f.site);
    if (it == merged.end())
      merged.emplace(f.site, *f.op);
    else
      it->second = it->second * *f.op;
  }
  struct Entry {
    std::size_t row;
    cplx value;
  };
  std::vector<std::pair<std::size_t, std::vector<std::vector<Entry>>>> columns;
  for (const auto& [site, m] : merged) {
    std::vector<std::vector<Entry>> cols(static_cast<std::size_t>(m.cols()));
    for (Index c = 0; c < m.cols(); ++c)
      for (Index r = 0; r < m.rows(); ++r)
        if (m(r, c) != cplx(0.0)) cols[static_cast<std::size_t>(c)].push_back({static_cast<std::size_t>(r), m(r, c)});
    columns.emplace_back(site, std::move(cols));
  }

  std::vector<Eigen::Triplet<cplx>> triplets;
  const Index n = size();
  for (Index j = 0; j < n; ++j) {
    const std::uint64_t key = keys_[static_cast<std::size_t>(j)];
    // Enumerate all output keys reachable through the non-zero local columns.
    std::vector<std::pair<std::uint64_t, cplx>> frontier{{key, cplx(1.0)}};
    for (const auto& [site, cols] : columns) {
      const std::size_t d = static_cast<std::size_t>((key / strides_[site]) % layout_[site].dim);
      const auto& entries = cols[d];
      std::vector<std::pair<std::uint64_t, cplx>> next;
      next.reserve(frontier.size() * entries.size());
      for (const auto& [k, v] : frontier)
        for (const auto& e : entries)
          next.emplace_back(k - strides_[site] * d + strides_[site] * e.row, v * e.value);
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
    for (const auto& [k, v] : frontier) {
      auto it = index_.find(k);
      if (it != index_.end()) triplets.emplace_back(it->second, j, v);
    }
  }
  SpMat out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

SpMat ProductBasis::embed(const Mat& local, std::size_t site) const {
  const LocalFactor f{site, &local};
  return op(std::span<const LocalFactor>(&f, 1));
}

SpMat ProductBasis::identity() const {
  SpMat id(size(), size());
  id.setIdentity();
  return id;
}

Vec ProductBasis::product_state(std::span<const Vec> locals) const {
  if (locals.size() != layout_.size()) throw Error(ErrorKind::Dimension, "product_state: one vector per factor required");
  for (std::size_t s = 0; s < locals.size(); ++s)
    if (locals[s].size() != static_cast<Index>(layout_[s].dim))
      throw Error(ErrorKind::Dimension, "product_state: vector does not match factor '" + layout_[s].label + "'");
  Vec psi(size());
  for (Index j = 0; j < size(); ++j) {
    cplx amp = 1.0;
    for (std::size_t s = 0; s < locals.size(); ++s) amp *= locals[s](static_cast<Index>(digit(j, s)));
    psi(j) = amp;
  }
  return psi;
}

DensityMatrix ProductBasis::reduced(const Vec& psi, std::size_t site) const {
  if (psi.size() != size()) throw Error(ErrorKind::Dimension, "reduced: state does not match basis");
  if (site >= layout_.size()) throw Error(ErrorKind::Validation, "reduced: invalid site index");
  const Index d = static_cast<Index>(layout_[site].dim);
  // Group amplitudes by the key of the remaining factors.
  std::map<std::uint64_t, std::vector<std::pair<Index, cplx>>> groups;
  for (Index j = 0; j < size(); ++j) {
    if (psi(j) == cplx(0.0)) continue;
    const std::uint64_t key = keys_[static_cast<std::size_t>(j)];
    const auto dg = static_cast<Index>((key / strides_[site]) % layout_[site].dim);
    groups[key - strides_[site] * static_cast<std::uint64_t>(dg)].emplace_back(dg, psi(j));
  }
  Mat rho = Mat::Zero(d, d);
  for (const auto& [rest, entries] : groups)
    for (const auto& [i, ai] : entries)
      for (const auto& [k, ak] : entries) rho(i, k) += ai * std::conj(ak);
  return DensityMatrix(rho);
}

}  // namespace catlgt
