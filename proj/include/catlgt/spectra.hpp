#pragma once

// Eigen-analysis of the gauge resonator and of assembled links.

#include <string>
#include <vector>

#include "catlgt/linalg.hpp"
#include "catlgt/model.hpp"

namespace catlgt {

/// KPO spectrum ordered by excitation: the Hamiltonian is bounded from above
/// and the cat pair sits at the top, so levels are sorted by descending energy.
/// Columns 0 and 1 are the even and odd cat eigenstates.
struct KpoSpectrum {
  RVec energies;
  Mat vectors;  // Fock-basis columns
  std::vector<Parity> parity;
  std::vector<std::string> labels;  // C+, C-, then E+/E- style labels
  double gap = 0.0;                 // (E0 + E1) / 2 - E2
  double cat_splitting = 0.0;       // |E0 - E1|
};

/// Diagonalises the even and odd parity blocks separately, which fixes the
/// basis inside the near-degenerate cat pair. `count` < 0 keeps all levels.
KpoSpectrum kpo_spectrum(const LinkParams& p, Index count = -1);

struct TruncatedFieldBasis {
  std::size_t M = 0;
  Mat V;  // Fock -> eigenbasis isometry (dim_Fock x M)
  Mat b_reduced;
  RVec energies;
  std::vector<std::string> labels;
};

TruncatedFieldBasis truncated_basis(const LinkParams& p, std::size_t M);

struct SpectrumPoint {
  double g3 = 0.0;
  RVec eigenvalues;
  RVec cat_weights;  // <E|P_C|E>
};

/// Single-link spectrum in the one-excitation sector along a g3 ramp.
std::vector<SpectrumPoint> spectrum_vs_g3(const LinkParams& p, const std::vector<double>& g3_grid);

struct HintonMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
};

/// H in the basis matter Fock (x) lowest `levels` field eigenstates, in the
/// one-excitation sector. Throws Numerical if an element has an imaginary part
/// above 1e-9.
HintonMatrix hinton_elements(const LinkParams& p, std::size_t levels = 4);

cplx matrix_element(const System& sys, const Vec& bra, const Vec& ket);

struct RabiElements {
  cplx full_plus;        // <1,C+,0| H |0,C-,1>
  cplx full_minus;       // <1,C-,0| H |0,C+,1>
  cplx projected_plus;   // same elements of the projected Hamiltonian
  cplx projected_minus;
};

RabiElements rabi_matrix_elements(const LinkParams& p);

}  // namespace catlgt
