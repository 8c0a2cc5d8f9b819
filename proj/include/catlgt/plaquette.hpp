#pragma once

// Effective-qubit plaquette constructions on a triangle of gauge links.

#include <array>

#include "catlgt/types.hpp"

namespace catlgt {

/// 2 g3 beta_i beta_j beta_k sigma^x (x) sigma^x (x) sigma^x on three link qubits.
Mat plaquette_direct(double g3, const std::array<double, 3>& beta);

/// -g sum_<ij> (c_i^+ sigma^x_ij c_j + h.c.) on three link qubits (x) one
/// ancillary excitation on three sites. Qubit order (12, 23, 31); the
/// ancilla index is least significant.
Mat plaquette_ancillary(double g);

/// -2 g cos((2 pi k + phi) / 3) for k = -1, 0, 1, sorted ascending.
std::array<double, 3> momentum_spectrum(double g, double phi);

/// Ancillary-Hamiltonian eigenvalues in the flux sector with
/// sigma^x_12 sigma^x_23 sigma^x_31 = cos(phi) (phi = 0 or pi), ascending.
/// Each qubit configuration contributes its three ancilla levels.
RVec flux_sector_spectrum(double g, double phi);

}  // namespace catlgt
