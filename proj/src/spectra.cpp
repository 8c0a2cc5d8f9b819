#include "catlgt/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace catlgt {

namespace {

struct Level {
  double energy;
  Parity parity;
  Vec vector;
};

std::vector<Level> parity_block(const Mat& h, Parity parity) {
  const Index d = h.rows();
  const Index start = parity == Parity::Even ? 0 : 1;
  std::vector<Index> idx;
  for (Index n = start; n < d; n += 2) idx.push_back(n);
  const Index m = static_cast<Index>(idx.size());
  Mat block(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) block(i, j) = h(idx[i], idx[j]);
  const auto dec = eigh(block, "kpo parity block");
  std::vector<Level> levels;
  for (Index k = m; k-- > 0;) {
    Vec v = Vec::Zero(d);
    for (Index i = 0; i < m; ++i) v(idx[i]) = dec.eigenvectors(i, k);
    levels.push_back({dec.eigenvalues(k), parity, std::move(v)});
  }
  return levels;
}

std::vector<std::string> level_labels(const std::vector<Parity>& parity) {
  std::vector<std::string> labels;
  int even_seen = 0, odd_seen = 0;
  for (std::size_t k = 0; k < parity.size(); ++k) {
    const bool even = parity[k] == Parity::Even;
    const int seen = even ? even_seen++ : odd_seen++;
    std::string l = seen == 0 ? "C" : (seen == 1 ? "E" : "E" + std::to_string(seen));
    labels.push_back(l + (even ? "+" : "-"));
  }
  return labels;
}

}  // namespace

KpoSpectrum kpo_spectrum(const LinkParams& p, Index count) {
  const auto space = HilbertSpace::fock(p.resolved_gauge_dim(), "b");
  const Mat h = build_kpo(p, space);
  auto even = parity_block(h, Parity::Even);
  auto odd = parity_block(h, Parity::Odd);
  std::vector<Level> levels;
  levels.push_back(std::move(even.front()));
  levels.push_back(std::move(odd.front()));
  std::vector<Level> rest;
  for (std::size_t k = 1; k < even.size(); ++k) rest.push_back(std::move(even[k]));
  for (std::size_t k = 1; k < odd.size(); ++k) rest.push_back(std::move(odd[k]));
  std::stable_sort(rest.begin(), rest.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy > b.energy;
    return a.parity == Parity::Even && b.parity == Parity::Odd;
  });
  for (auto& l : rest) levels.push_back(std::move(l));
  const Index total = static_cast<Index>(levels.size());
  const Index keep = count < 0 ? total : std::min(count, total);
  if (keep < 2) throw Error(ErrorKind::Validation, "kpo_spectrum: need at least two levels");

  KpoSpectrum out;
  out.energies.resize(keep);
  out.vectors.resize(h.rows(), keep);
  for (Index k = 0; k < keep; ++k) {
    out.energies(k) = levels[static_cast<std::size_t>(k)].energy;
    out.vectors.col(k) = levels[static_cast<std::size_t>(k)].vector;
    out.parity.push_back(levels[static_cast<std::size_t>(k)].parity);
  }
  fix_phases(out.vectors);
  out.labels = level_labels(out.parity);
  out.cat_splitting = std::abs(levels[0].energy - levels[1].energy);
  out.gap = 0.5 * (levels[0].energy + levels[1].energy) - levels[2].energy;
  return out;
}

TruncatedFieldBasis truncated_basis(const LinkParams& p, std::size_t M) {
  const std::size_t dim = p.resolved_gauge_dim();
  if (M < 2 || M > dim) throw Error(ErrorKind::Validation, "truncated_basis: M must lie in [2, gauge cutoff]");
  const auto spec = kpo_spectrum(p, static_cast<Index>(M));
  TruncatedFieldBasis out;
  out.M = M;
  out.V = spec.vectors;
  out.energies = spec.energies;
  out.labels = spec.labels;
  const Mat b = destroy(HilbertSpace::fock(dim, "b"));
  out.b_reduced = out.V.adjoint() * b * out.V;
  return out;
}

std::vector<SpectrumPoint> spectrum_vs_g3(const LinkParams& p, const std::vector<double>& g3_grid) {
  std::vector<SpectrumPoint> out;
  for (double g3 : g3_grid) {
    LinkParams q = p;
    q.g3 = g3;
    const System sys = build_link(q);
    const auto dec = eigh(sys.H, "link spectrum");
    const SpMat proj = sys.projector(0);
    SpectrumPoint pt;
    pt.g3 = g3;
    pt.eigenvalues = dec.eigenvalues;
    pt.cat_weights.resize(dec.size());
    for (Index k = 0; k < dec.size(); ++k)
      pt.cat_weights(k) = std::clamp(expectation(proj, Vec(dec.eigenvectors.col(k))), 0.0, 1.0);
    out.push_back(std::move(pt));
  }
  return out;
}

HintonMatrix hinton_elements(const LinkParams& p, std::size_t levels) {
  p.validate();
  const auto basis = truncated_basis(p, levels);
  GaugeMode mode = transform_gauge_mode(fock_gauge_mode(p, "b12"), basis.V, BasisKind::FieldEigenbasis);
  const System sys = assemble(p, {std::move(mode)});
  HintonMatrix out;
  const Index n = sys.basis.size();
  for (Index j = 0; j < n; ++j) {
    const auto d = sys.basis.digits(j);
    out.labels.push_back(std::to_string(d[0]) + "," + basis.labels[d[1]] + "," + std::to_string(d[2]));
  }
  const Mat h(sys.H);
  if (h.imag().cwiseAbs().maxCoeff() > 1e-9)
    throw Error(ErrorKind::Numerical, "hinton_elements: Hamiltonian has imaginary elements in the field eigenbasis");
  out.values = h.real();
  return out;
}

cplx matrix_element(const System& sys, const Vec& bra, const Vec& ket) {
  if (bra.size() != sys.basis.size() || ket.size() != sys.basis.size())
    throw Error(ErrorKind::Dimension, "matrix_element: state does not match basis");
  return bra.dot(sys.H * ket);
}

RabiElements rabi_matrix_elements(const LinkParams& p) {
  const System full = build_link(p);
  const System proj = project_hamiltonian(full);
  const auto& m = full.modes[0];
  RabiElements out;
  out.full_plus = matrix_element(full, full.product_state({1, 0}, {m.cat_plus}), full.product_state({0, 1}, {m.cat_minus}));
  out.full_minus = matrix_element(full, full.product_state({1, 0}, {m.cat_minus}), full.product_state({0, 1}, {m.cat_plus}));
  const auto& c = proj.modes[0];
  out.projected_plus =
      matrix_element(proj, proj.product_state({1, 0}, {c.cat_plus}), proj.product_state({0, 1}, {c.cat_minus}));
  out.projected_minus =
      matrix_element(proj, proj.product_state({1, 0}, {c.cat_minus}), proj.product_state({0, 1}, {c.cat_plus}));
  return out;
}

}  // namespace catlgt
