#pragma once

// Hamiltonians and gauge structure of matter resonators coupled through
// Kerr-parametric gauge resonators by three-wave mixing.

#include <optional>
#include <string>
#include <vector>

#include "catlgt/basis.hpp"
#include "catlgt/fock.hpp"

namespace catlgt {

struct LinkParams {
  double U = 0.03;
  double G = 0.24;
  double g3 = 0.0;
  std::vector<double> omega_matter{0.0, 0.0};
  std::size_t matter_dim = 5;
  std::size_t gauge_dim = 0;  // 0 selects max(30, ceil(8 beta0^2))

  /// Parameters with G chosen so that sqrt(G / 2U) = beta0.
  static LinkParams from_beta0(double U, double beta0, double g3);

  double beta0() const;
  double omega_gap() const;
  std::size_t resolved_gauge_dim() const;
  /// Throws Validation on bad values; warns (never throws) in the strong-mixing
  /// regime Omega^+ > omega_gap.
  void validate() const;
  bool strong_mixing() const;
};

struct ChainParams {
  std::size_t N = 3;
  LinkParams link;
  std::size_t M = 0;  // retained field eigenstates per link; 0 keeps the Fock basis

  void validate() const;
  /// N M^(N-1), the single-excitation sector dimension in the truncated basis.
  std::uint64_t sector_dim() const;
};

/// A gauge resonator expressed in some basis (Fock, truncated field
/// eigenbasis, or the cat pair).
struct GaugeMode {
  HilbertSpace space;
  double beta0 = 0.0;
  Mat b;          // annihilation operator
  Mat field;      // KPO Hamiltonian
  Vec cat_plus;   // |C+>
  Vec cat_minus;  // |C->, empty when beta0 = 0
  Mat projector;  // P_C
  Mat sigma_z;    // P_C sigma^z P_C
  Mat isometry;   // columns: basis states in the Fock basis
};

GaugeMode fock_gauge_mode(const LinkParams& p, const std::string& label);
/// Re-expresses a Fock-basis mode in the basis spanned by the columns of `v`.
GaugeMode transform_gauge_mode(const GaugeMode& fock, const Mat& v, BasisKind kind);
/// Two-dimensional cat-pair mode [C+, C-]: b and field are projected; an
/// optional h sigma^z term is added to the field.
GaugeMode cat_gauge_mode(const GaugeMode& fock, double flux_field = 0.0);

/// Assembled Hamiltonian with named layout. Sites alternate a1, b12, a2, ...
struct System {
  Layout layout;
  std::vector<std::size_t> matter_sites;
  std::vector<std::size_t> gauge_sites;  // gauge_sites[k] links matter k and k+1
  std::vector<GaugeMode> modes;
  ProductBasis basis;
  SpMat H;
  SpMat H_matter;
  SpMat H_field;
  SpMat H_coup;
  LinkParams params;

  SpMat matter_number(std::size_t i) const;
  SpMat total_matter_number() const;
  SpMat sigma_z(std::size_t link) const;
  SpMat projector(std::size_t link) const;
  /// Product state from matter occupations and one vector per gauge mode.
  Vec product_state(const std::vector<std::size_t>& matter, const std::vector<Vec>& gauge) const;
};

struct BuildOptions {
  /// Restrict to this total matter excitation number; nullopt keeps the full space.
  std::optional<std::size_t> matter_excitations = 1;
};

/// Assembles a chain from explicit gauge modes (one per link).
System assemble(const LinkParams& p, std::vector<GaugeMode> modes, const BuildOptions& opts = {});

SpMat build_matter(const System& sys);
Mat build_kpo(const LinkParams& p, const HilbertSpace& space);
SpMat build_coupling(const System& sys);

System build_link(const LinkParams& p, const BuildOptions& opts = {});
System build_chain(const ChainParams& p, const BuildOptions& opts = {});

struct GaugeStructure {
  double beta0 = 0.0;
  Vec cat_plus;
  Vec cat_minus;
  Mat projector;
  Mat sigma_z;
  std::size_t rank = 2;
};

/// Cat projector and flux operator on the Fock space of a gauge mode. At
/// beta0 = 0 the projector has rank 1 and a warning is emitted.
GaugeStructure cat_projector(const LinkParams& p);

struct LinkOperator {
  Mat block;    // u_x sigma^x + i u_y sigma^y in the basis [C+, C-]
  Mat numeric;  // <C_i| b |C_j> evaluated at the working cutoff
  double u_x = 0.0;
  double u_y = 0.0;
};

LinkOperator link_operator(const LinkParams& p);
/// Closed-form u^x, u^y.
std::pair<double, double> link_coefficients(double beta0);

struct RabiFrequencies {
  double plus = 0.0;
  double minus = 0.0;
};
RabiFrequencies rabi_frequencies(double beta0, double g3);
RabiFrequencies rabi_frequencies(const LinkParams& p);

/// Same system with every gauge mode replaced by its cat pair.
System project_hamiltonian(const System& sys, double flux_field = 0.0, const BuildOptions& opts = {});

/// G_i = Q_i prod_{links at i} sigma^z, one per matter site.
std::vector<SpMat> gauge_generators(const System& sys);

}  // namespace catlgt
