#include "catlgt/model.hpp"

#include <cmath>
#include <sstream>

#include "catlgt/diagnostics.hpp"
#include "catlgt/linalg.hpp"
#include "catlgt/spectra.hpp"

namespace catlgt {

LinkParams LinkParams::from_beta0(double U, double beta0, double g3) {
  LinkParams p;
  p.U = U;
  p.G = 2.0 * U * beta0 * beta0;
  p.g3 = g3;
  return p;
}

double LinkParams::beta0() const { return std::sqrt(G / (2.0 * U)); }

double LinkParams::omega_gap() const { return 4.0 * U * beta0() * beta0(); }

std::size_t LinkParams::resolved_gauge_dim() const {
  if (gauge_dim != 0) return gauge_dim;
  const double b = beta0();
  return std::max<std::size_t>(30, static_cast<std::size_t>(std::ceil(8.0 * b * b)));
}

bool LinkParams::strong_mixing() const { return rabi_frequencies(*this).plus > omega_gap(); }

void LinkParams::validate() const {
  if (!(U > 0.0) || !std::isfinite(U)) throw Error(ErrorKind::Validation, "U must be positive");
  if (!(G >= 0.0) || !std::isfinite(G)) throw Error(ErrorKind::Validation, "G must be non-negative");
  if (!(g3 >= 0.0) || !std::isfinite(g3)) throw Error(ErrorKind::Validation, "g3 must be non-negative");
  if (omega_matter.size() < 2) throw Error(ErrorKind::Validation, "need at least two matter frequencies");
  for (double w : omega_matter)
    if (!std::isfinite(w)) throw Error(ErrorKind::Validation, "matter frequencies must be finite");
  if (matter_dim < 2) throw Error(ErrorKind::Validation, "matter cutoff must be >= 2");
  if (gauge_dim != 0 && gauge_dim < 2) throw Error(ErrorKind::Validation, "gauge cutoff must be >= 2");
  if (G > 0.0 && strong_mixing()) {
    std::ostringstream os;
    os << "strong-mixing regime: Omega+ = " << rabi_frequencies(*this).plus << " exceeds omega_gap = " << omega_gap();
    warn(os.str());
  }
}

void ChainParams::validate() const {
  if (N < 2) throw Error(ErrorKind::Validation, "chain needs N >= 2");
  if (M == 1) throw Error(ErrorKind::Validation, "M must be 0 (full Fock) or >= 2");
  if (M > link.resolved_gauge_dim()) throw Error(ErrorKind::Validation, "M exceeds the gauge Fock cutoff");
  LinkParams lp = link;
  if (lp.omega_matter.size() < N) lp.omega_matter.resize(N, lp.omega_matter.back());
  lp.validate();
}

std::uint64_t ChainParams::sector_dim() const {
  const std::uint64_t m = M == 0 ? link.resolved_gauge_dim() : M;
  std::uint64_t d = N;
  for (std::size_t i = 1; i < N; ++i) d *= m;
  return d;
}

Mat build_kpo(const LinkParams& p, const HilbertSpace& space) {
  const Mat b = destroy(space);
  const Mat bd = b.adjoint();
  const Mat b2 = b * b;
  const Mat bd2 = bd * bd;
  Mat h = -p.U * (bd2 * b2) + 0.5 * p.G * (b2 + bd2);
  return 0.5 * (h + h.adjoint());
}

namespace {

Mat outer_pair(const Vec& plus, const Vec& minus, double sign_minus) {
  Mat m = plus * plus.adjoint();
  if (minus.size() > 0) m += sign_minus * (minus * minus.adjoint());
  return m;
}

}  // namespace

GaugeMode fock_gauge_mode(const LinkParams& p, const std::string& label) {
  GaugeMode g;
  g.space = HilbertSpace::fock(p.resolved_gauge_dim(), label);
  g.beta0 = p.beta0();
  g.b = destroy(g.space);
  g.field = build_kpo(p, g.space);
  g.cat_plus = cat_state(g.space, g.beta0, Parity::Even);
  if (g.beta0 > 0.0) g.cat_minus = cat_state(g.space, g.beta0, Parity::Odd);
  g.projector = outer_pair(g.cat_plus, g.cat_minus, 1.0);
  g.sigma_z = outer_pair(g.cat_plus, g.cat_minus, -1.0);
  g.isometry = Mat::Identity(static_cast<Index>(g.space.dim), static_cast<Index>(g.space.dim));
  return g;
}

GaugeMode transform_gauge_mode(const GaugeMode& fock, const Mat& v, BasisKind kind) {
  if (v.rows() != static_cast<Index>(fock.space.dim) || v.cols() < 2 || v.cols() > v.rows())
    throw Error(ErrorKind::Dimension, "transform_gauge_mode: isometry shape mismatch");
  GaugeMode g;
  g.space = HilbertSpace{static_cast<std::size_t>(v.cols()), fock.space.label, kind};
  g.beta0 = fock.beta0;
  g.b = v.adjoint() * fock.b * v;
  g.field = v.adjoint() * fock.field * v;
  g.field = 0.5 * (g.field + g.field.adjoint()).eval();
  g.cat_plus = v.adjoint() * fock.cat_plus;
  g.cat_plus.normalize();
  if (fock.cat_minus.size() > 0) {
    g.cat_minus = v.adjoint() * fock.cat_minus;
    g.cat_minus.normalize();
  }
  g.projector = outer_pair(g.cat_plus, g.cat_minus, 1.0);
  g.sigma_z = outer_pair(g.cat_plus, g.cat_minus, -1.0);
  g.isometry = fock.isometry * v;
  return g;
}

GaugeMode cat_gauge_mode(const GaugeMode& fock, double flux_field) {
  if (fock.cat_minus.size() == 0) throw Error(ErrorKind::Validation, "odd cat undefined at zero amplitude");
  Mat w(fock.cat_plus.size(), 2);
  w.col(0) = fock.cat_plus;
  w.col(1) = fock.cat_minus;
  GaugeMode g;
  g.space = HilbertSpace{2, fock.space.label, BasisKind::CatPair};
  g.beta0 = fock.beta0;
  g.b = w.adjoint() * fock.b * w;
  g.field = w.adjoint() * fock.field * w;
  g.field = 0.5 * (g.field + g.field.adjoint()).eval();
  g.field(0, 0) += flux_field;
  g.field(1, 1) -= flux_field;
  g.cat_plus = Vec::Unit(2, 0);
  g.cat_minus = Vec::Unit(2, 1);
  g.projector = Mat::Identity(2, 2);
  g.sigma_z = Mat::Zero(2, 2);
  g.sigma_z(0, 0) = 1.0;
  g.sigma_z(1, 1) = -1.0;
  g.isometry = fock.isometry * w;
  return g;
}

SpMat System::matter_number(std::size_t i) const {
  const auto site = matter_sites.at(i);
  return basis.embed(number(layout[site]), site);
}

SpMat System::total_matter_number() const {
  SpMat n(basis.size(), basis.size());
  for (std::size_t i = 0; i < matter_sites.size(); ++i) n += matter_number(i);
  return n;
}

SpMat System::sigma_z(std::size_t link) const { return basis.embed(modes.at(link).sigma_z, gauge_sites.at(link)); }

SpMat System::projector(std::size_t link) const {
  return basis.embed(modes.at(link).projector, gauge_sites.at(link));
}

Vec System::product_state(const std::vector<std::size_t>& matter, const std::vector<Vec>& gauge) const {
  if (matter.size() != matter_sites.size() || gauge.size() != gauge_sites.size())
    throw Error(ErrorKind::Dimension, "product_state: wrong number of site states");
  std::vector<Vec> locals(layout.size());
  for (std::size_t i = 0; i < matter.size(); ++i) locals[matter_sites[i]] = fock_state(layout[matter_sites[i]], matter[i]);
  for (std::size_t k = 0; k < gauge.size(); ++k) locals[gauge_sites[k]] = gauge[k];
  Vec psi = basis.product_state(locals);
  const double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw Error(ErrorKind::Dimension, "product_state: state is not contained in the basis sector");
  return psi;
}

SpMat build_matter(const System& sys) {
  SpMat h(sys.basis.size(), sys.basis.size());
  for (std::size_t i = 0; i < sys.matter_sites.size(); ++i) {
    const double w = sys.params.omega_matter.at(i);
    if (w != 0.0) h += w * sys.matter_number(i);
  }
  return h;
}

SpMat build_coupling(const System& sys) {
  SpMat h(sys.basis.size(), sys.basis.size());
  if (sys.params.g3 == 0.0) return h;
  for (std::size_t k = 0; k < sys.gauge_sites.size(); ++k) {
    const auto left = sys.matter_sites[k];
    const auto right = sys.matter_sites[k + 1];
    const Mat a_left = destroy(sys.layout[left]);
    const Mat a_right = destroy(sys.layout[right]);
    const Mat ad_left = a_left.adjoint();
    const Mat& b = sys.modes[k].b;
    const LocalFactor f[] = {{left, &ad_left}, {sys.gauge_sites[k], &b}, {right, &a_right}};
    const SpMat hop = sys.basis.op(f);
    h += -sys.params.g3 * SpMat(hop + SpMat(hop.adjoint()));
  }
  return h;
}

System assemble(const LinkParams& p, std::vector<GaugeMode> modes, const BuildOptions& opts) {
  const std::size_t n_sites = modes.size() + 1;
  LinkParams params = p;
  if (params.omega_matter.size() < n_sites) params.omega_matter.resize(n_sites, params.omega_matter.back());
  std::vector<HilbertSpace> factors;
  std::vector<std::size_t> matter_sites, gauge_sites;
  for (std::size_t i = 0; i < n_sites; ++i) {
    matter_sites.push_back(factors.size());
    factors.push_back(HilbertSpace::fock(params.matter_dim, "a" + std::to_string(i + 1)));
    if (i + 1 < n_sites) {
      gauge_sites.push_back(factors.size());
      auto space = modes[i].space;
      if (space.label.empty()) space.label = "b" + std::to_string(i + 1) + std::to_string(i + 2);
      factors.push_back(space);
    }
  }
  Layout layout(std::move(factors));
  ProductBasis basis = opts.matter_excitations ? ProductBasis::sector(layout, matter_sites, *opts.matter_excitations)
                                               : ProductBasis::full(layout);
  System sys{std::move(layout), std::move(matter_sites), std::move(gauge_sites), std::move(modes), std::move(basis),
             {}, {}, {}, {}, std::move(params)};
  sys.H_matter = build_matter(sys);
  sys.H_field = SpMat(sys.basis.size(), sys.basis.size());
  for (std::size_t k = 0; k < sys.gauge_sites.size(); ++k) sys.H_field += sys.basis.embed(sys.modes[k].field, sys.gauge_sites[k]);
  sys.H_coup = build_coupling(sys);
  sys.H = sys.H_matter + sys.H_field + sys.H_coup;
  sys.H.prune(cplx(0.0));
  return sys;
}

System build_link(const LinkParams& p, const BuildOptions& opts) {
  p.validate();
  return assemble(p, {fock_gauge_mode(p, "b12")}, opts);
}

System build_chain(const ChainParams& p, const BuildOptions& opts) {
  p.validate();
  std::vector<GaugeMode> modes;
  const GaugeMode fock = fock_gauge_mode(p.link, "b");
  Mat v;
  if (p.M != 0) v = truncated_basis(p.link, p.M).V;
  for (std::size_t k = 0; k + 1 < p.N; ++k) {
    GaugeMode m = fock;
    if (p.M != 0) m = transform_gauge_mode(fock, v, BasisKind::FieldEigenbasis);
    m.space.label = "b" + std::to_string(k + 1) + std::to_string(k + 2);
    modes.push_back(std::move(m));
  }
  return assemble(p.link, std::move(modes), opts);
}

GaugeStructure cat_projector(const LinkParams& p) {
  const auto mode = fock_gauge_mode(p, "b");
  GaugeStructure gs;
  gs.beta0 = mode.beta0;
  gs.cat_plus = mode.cat_plus;
  gs.cat_minus = mode.cat_minus;
  gs.projector = mode.projector;
  gs.sigma_z = mode.sigma_z;
  gs.rank = mode.cat_minus.size() > 0 ? 2 : 1;
  if (gs.rank == 1) warn("cat projector has rank 1 at beta0 = 0 (odd cat undefined)");
  return gs;
}

std::pair<double, double> link_coefficients(double beta0) {
  if (beta0 <= 0.0) throw Error(ErrorKind::Validation, "link coefficients need beta0 > 0");
  const double np = cat_normalization(beta0, Parity::Even);
  const double nm = cat_normalization(beta0, Parity::Odd);
  return {0.5 * beta0 * (nm / np + np / nm), 0.5 * beta0 * (nm / np - np / nm)};
}

LinkOperator link_operator(const LinkParams& p) {
  const auto [ux, uy] = link_coefficients(p.beta0());
  LinkOperator out;
  out.u_x = ux;
  out.u_y = uy;
  out.block = Mat::Zero(2, 2);
  out.block(0, 1) = ux + uy;
  out.block(1, 0) = ux - uy;
  const auto mode = cat_gauge_mode(fock_gauge_mode(p, "b"));
  out.numeric = mode.b;
  return out;
}

RabiFrequencies rabi_frequencies(double beta0, double g3) {
  if (!(beta0 >= 0.0) || !(g3 >= 0.0)) throw Error(ErrorKind::Validation, "rabi_frequencies: negative input");
  if (beta0 == 0.0) return {2.0 * g3, 0.0};
  // 1 - e and 1 + e with e = exp(-2 beta0^2).
  const double one_minus = -std::expm1(-2.0 * beta0 * beta0);
  const double one_plus = 2.0 - one_minus;
  return {2.0 * g3 * beta0 * std::sqrt(one_plus / one_minus), 2.0 * g3 * beta0 * std::sqrt(one_minus / one_plus)};
}

RabiFrequencies rabi_frequencies(const LinkParams& p) { return rabi_frequencies(p.beta0(), p.g3); }

System project_hamiltonian(const System& sys, double flux_field, const BuildOptions& opts) {
  std::vector<GaugeMode> modes;
  for (const auto& m : sys.modes)
    modes.push_back(m.space.kind == BasisKind::CatPair ? m : cat_gauge_mode(m, flux_field));
  return assemble(sys.params, std::move(modes), opts);
}

std::vector<SpMat> gauge_generators(const System& sys) {
  std::vector<SpMat> out;
  for (std::size_t i = 0; i < sys.matter_sites.size(); ++i) {
    const Mat q = parity_operator(sys.layout[sys.matter_sites[i]]);
    std::vector<LocalFactor> f{{sys.matter_sites[i], &q}};
    if (i > 0) f.push_back({sys.gauge_sites[i - 1], &sys.modes[i - 1].sigma_z});
    if (i < sys.gauge_sites.size()) f.push_back({sys.gauge_sites[i], &sys.modes[i].sigma_z});
    out.push_back(sys.basis.op(f));
  }
  return out;
}

}  // namespace catlgt
