#pragma once

// Unitary time evolution and time-domain diagnostics.

#include <functional>
#include <string>
#include <vector>

#include "catlgt/linalg.hpp"
#include "catlgt/model.hpp"

namespace catlgt {

enum class Propagator { Auto, EigenPropagator, KrylovStep };

struct EvolutionPlan {
  std::vector<double> times;  // ascending, times[0] is the initial state
  Propagator method = Propagator::Auto;
  double tolerance = 1e-10;   // Krylov local error budget for the whole run
  bool keep_states = true;
};

/// Uniform grid of `samples` points on [0, t_max].
std::vector<double> uniform_times(double t_max, std::size_t samples);

struct Observable {
  std::string name;
  SpMat op;
};

/// Named real channels over a common time axis, in insertion order.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> times) : times_(std::move(times)) {}

  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& names() const { return names_; }
  void add(std::string name, std::vector<double> values);
  bool has(const std::string& name) const;
  const std::vector<double>& operator[](const std::string& name) const;

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> values_;
};

struct Evolution {
  TimeSeries series;
  std::vector<Vec> states;
  double norm_drift = 0.0;
  double energy_drift = 0.0;
  Propagator method = Propagator::EigenPropagator;
};

/// |psi(t)> = exp(-i H t)|psi0> on the plan's grid. Throws Numerical when the
/// norm drifts by more than 1e-8 or <H> by more than 1e-8 ||H||.
Evolution evolve(const SpMat& h, const Vec& psi0, const EvolutionPlan& plan,
                 const std::vector<Observable>& observables = {});

/// exp(-i H dt) v by Lanczos with adaptive sub-stepping.
Vec krylov_step(const SpMat& h, const Vec& v, double dt, double tol, Index max_krylov = 40);

/// Matter numbers n_i, link fluxes sz_k, generators G_i and their squares.
std::vector<Observable> standard_observables(const System& sys);

std::vector<double> flux_series(const std::vector<Vec>& states, const System& sys, std::size_t link);

struct GaussChannels {
  std::vector<std::vector<double>> mean;      // <G_i>(t)
  std::vector<std::vector<double>> variance;  // <G_i^2> - <G_i>^2
};
GaussChannels gauss_diagnostics(const std::vector<Vec>& states, const std::vector<SpMat>& generators);

/// |x(t) - x(0)| / |x(t)|; throws Numerical where |x(t)| < 1e-12.
std::vector<double> relative_deviation(const std::vector<double>& series);

/// Time of the first local minimum after t = 0, refined by a parabola
/// through the neighbouring samples. Throws Convergence when none exists.
double fit_half_period(const std::vector<double>& times, const std::vector<double>& series);

/// Time average of a uniformly sampled series (the zero-frequency Fourier
/// component divided by the window). Requires the window to span at least
/// five `slow_period`s.
double dc_baseline(const std::vector<double>& times, const std::vector<double>& series, double slow_period);

struct BaselineOptions {
  double U = 0.03;
  double periods = 20.0;    // window in units of 2 pi / Omega+
  std::size_t samples = 4000;
  std::size_t workers = 1;
};

struct SweepGrid {
  std::vector<double> beta0;
  std::vector<double> g3;
  Eigen::MatrixXd raw;         // rows: beta0, cols: g3
  Eigen::MatrixXd normalized;  // raw / max(raw)
};

/// Time-averaged Delta G_1 from |1,C+,0> over a (beta0, g3) grid, with
/// omega_i = omega_gap. Normalised by the grid maximum.
SweepGrid baseline_map(const std::vector<double>& beta0, const std::vector<double>& g3, const BaselineOptions& opts);

/// <psi|P|psi>^2 / <psi|P|psi>, which equals <psi|P|psi>.
double ipr_literal(const Vec& psi, const SpMat& projector);
/// sum over degenerate clusters of (sum_{n in cluster} |<E_n|phi>|^2)^2.
double ipr_eigenbasis(const Vec& phi, const EigenDecomposition& dec, double cluster_tol);

/// Literal variant on the long-time state: the diagonal-ensemble average of
/// <P_C> for a run started from |1,C+,0>.
double ipr_diagonal_ensemble(const LinkParams& p);

struct CatIpr {
  double plus = 0.0;   // eta = +
  double minus = 0.0;  // eta = -
  double mean = 0.0;
};

/// Eigenbasis IPR of the dressed cat states. For each eta the projected
/// Hamiltonian restricted to span{|1,C^eta,0>, |0,C^-eta,1>} is diagonalised
/// and the IPR of its two eigenvectors over the full spectrum is averaged.
CatIpr cat_ipr(const LinkParams& p);

struct SweepMap {
  std::vector<double> beta0;
  std::vector<double> g3;
  Eigen::MatrixXd values;
};
SweepMap ipr_map(const std::vector<double>& beta0, const std::vector<double>& g3, double U, std::size_t workers = 1);

/// g3 at which 1 - IPR first reaches half its map maximum, per beta0 row
/// (linear interpolation; NaN if never reached).
std::vector<double> half_max_contour(const SweepMap& map);

struct FourierSpectrum {
  std::vector<double> omega;
  std::vector<double> magnitude;  // |X_k| / N
};
FourierSpectrum fourier_channel(const std::vector<double>& times, const std::vector<double>& series);
/// Local maxima (excluding the zero bin) above `rel_threshold` times the
/// largest non-zero-frequency magnitude.
std::vector<double> spectral_lines(const FourierSpectrum& s, double rel_threshold = 0.1);

struct ChainRun {
  std::size_t dim = 0;
  Evolution evolution;
};
/// Single excitation in a1, every link in |C+>.
ChainRun chain_run(const ChainParams& p, const std::vector<double>& times);

/// Generic worker pool: runs f(i) for i in [0, n) on `workers` threads.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& f);

}  // namespace catlgt
