#include "catlgt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <fftw3.h>

#include "catlgt/diagnostics.hpp"

namespace catlgt {

std::vector<double> uniform_times(double t_max, std::size_t samples) {
  if (samples < 2 || !(t_max > 0.0)) throw Error(ErrorKind::Validation, "time grid needs t_max > 0 and >= 2 samples");
  std::vector<double> t(samples);
  for (std::size_t k = 0; k < samples; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
  return t;
}

void TimeSeries::add(std::string name, std::vector<double> values) {
  if (values.size() != times_.size()) throw Error(ErrorKind::Dimension, "channel '" + name + "' length mismatch");
  if (has(name)) throw Error(ErrorKind::Validation, "duplicate channel '" + name + "'");
  names_.push_back(std::move(name));
  values_.push_back(std::move(values));
}

bool TimeSeries::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& TimeSeries::operator[](const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorKind::Validation, "no channel named '" + name + "'");
  return values_[static_cast<std::size_t>(it - names_.begin())];
}

Vec krylov_step(const SpMat& h, const Vec& v, double dt, double tol, Index max_krylov) {
  const Index n = h.rows();
  const double scale = std::max(norm_bound(h), 1e-300);
  Vec out = v;
  double remaining = dt;
  const double sgn = dt < 0 ? -1.0 : 1.0;
  int guard = 0;
  while (std::abs(remaining) > 0.0) {
    const double vnorm = out.norm();
    if (vnorm == 0.0) return out;
    const Index m = std::min(n, max_krylov);
    Mat basis(n, m);
    RVec alpha = RVec::Zero(m), beta = RVec::Zero(m);
    basis.col(0) = out / vnorm;
    Index built = m;
    double beta_last = 0.0;
    for (Index j = 0; j < m; ++j) {
      Vec w = h * basis.col(j);
      alpha(j) = basis.col(j).dot(w).real();
      for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
      const double b = w.norm();
      if (b < 1e-13 * scale) {
        built = j + 1;
        beta_last = 0.0;
        break;
      }
      if (j + 1 == m) {
        beta_last = b;
        break;
      }
      beta(j) = b;
      basis.col(j + 1) = w / b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(alpha.head(built), beta.head(std::max<Index>(built - 1, 0)));
    const Eigen::MatrixXd& s = tri.eigenvectors();
    auto coefficients = [&](double tau) {
      Vec phases(built);
      for (Index k = 0; k < built; ++k) phases(k) = std::exp(-kI * tri.eigenvalues()(k) * tau) * s(0, k);
      return Vec(s.cast<cplx>() * phases);
    };
    double tau = remaining;
    Vec c;
    while (true) {
      c = coefficients(tau);
      const double err = beta_last * std::abs(c(built - 1)) * vnorm;
      if (err <= tol * std::abs(tau) / std::abs(dt) || beta_last == 0.0) break;
      tau *= 0.5;
      if (++guard > 200) throw Error(ErrorKind::Convergence, "krylov_step: step size underflow");
    }
    out = vnorm * (basis.leftCols(built) * c);
    remaining -= tau;
    if (sgn * remaining < 0.0) remaining = 0.0;
  }
  return out;
}

Evolution evolve(const SpMat& h, const Vec& psi0, const EvolutionPlan& plan, const std::vector<Observable>& observables) {
  const Index n = h.rows();
  if (h.cols() != n || psi0.size() != n) throw Error(ErrorKind::Dimension, "evolve: state does not match Hamiltonian");
  if (plan.times.empty()) throw Error(ErrorKind::Validation, "evolve: empty time grid");
  for (std::size_t k = 1; k < plan.times.size(); ++k)
    if (!(plan.times[k] >= plan.times[k - 1])) throw Error(ErrorKind::Validation, "evolve: times must ascend");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error(ErrorKind::Validation, "evolve: initial state not normalised");
  const double hdef = hermiticity_defect(h);
  if (hdef > 1e-12 * std::max(1.0, norm_bound(h))) throw Error(ErrorKind::Validation, "evolve: Hamiltonian is not Hermitian");

  Evolution ev;
  ev.method = plan.method;
  if (ev.method == Propagator::Auto)
    ev.method = n <= kDenseEigenLimit ? Propagator::EigenPropagator : Propagator::KrylovStep;

  const std::size_t nt = plan.times.size();
  std::vector<std::vector<double>> values(observables.size(), std::vector<double>(nt));
  const double e0 = expectation(h, psi0);
  const double hnorm = norm_bound(h);

  auto record = [&](std::size_t k, const Vec& psi) {
    for (std::size_t o = 0; o < observables.size(); ++o) values[o][k] = expectation(observables[o].op, psi);
    ev.norm_drift = std::max(ev.norm_drift, std::abs(psi.norm() - 1.0));
    ev.energy_drift = std::max(ev.energy_drift, std::abs(expectation(h, psi) - e0));
    if (plan.keep_states) ev.states.push_back(psi);
  };

  if (ev.method == Propagator::EigenPropagator) {
    const auto dec = eigh(Mat(h), "evolve");
    const Vec c0 = dec.eigenvectors.adjoint() * psi0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = plan.times[k];
      Vec c(n);
      for (Index i = 0; i < n; ++i) c(i) = std::exp(-kI * dec.eigenvalues(i) * t) * c0(i);
      record(k, dec.eigenvectors * c);
    }
  } else {
    const double per_step = plan.tolerance / static_cast<double>(std::max<std::size_t>(nt, 1));
    Vec psi = psi0;
    if (plan.times[0] != 0.0) psi = krylov_step(h, psi, plan.times[0], per_step);
    record(0, psi);
    for (std::size_t k = 1; k < nt; ++k) {
      psi = krylov_step(h, psi, plan.times[k] - plan.times[k - 1], per_step);
      record(k, psi);
    }
  }

  if (ev.norm_drift > 1e-8) throw Error(ErrorKind::Numerical, "evolve: norm drift exceeds 1e-8");
  if (ev.energy_drift > 1e-8 * std::max(hnorm, 1.0))
    throw Error(ErrorKind::Numerical, "evolve: energy drift exceeds 1e-8 ||H||");
  ev.series = TimeSeries(plan.times);
  for (std::size_t o = 0; o < observables.size(); ++o) ev.series.add(observables[o].name, std::move(values[o]));
  return ev;
}

std::vector<Observable> standard_observables(const System& sys) {
  std::vector<Observable> obs;
  for (std::size_t i = 0; i < sys.matter_sites.size(); ++i)
    obs.push_back({"n" + std::to_string(i + 1), sys.matter_number(i)});
  for (std::size_t k = 0; k < sys.gauge_sites.size(); ++k)
    obs.push_back({"sz_" + sys.layout[sys.gauge_sites[k]].label, sys.sigma_z(k)});
  const auto gens = gauge_generators(sys);
  for (std::size_t i = 0; i < gens.size(); ++i) obs.push_back({"G" + std::to_string(i + 1), gens[i]});
  for (std::size_t i = 0; i < gens.size(); ++i) obs.push_back({"G" + std::to_string(i + 1) + "_sq", SpMat(gens[i] * gens[i])});
  return obs;
}

std::vector<double> flux_series(const std::vector<Vec>& states, const System& sys, std::size_t link) {
  const SpMat sz = sys.sigma_z(link);
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& psi : states) out.push_back(expectation(sz, psi));
  return out;
}

GaussChannels gauss_diagnostics(const std::vector<Vec>& states, const std::vector<SpMat>& generators) {
  GaussChannels out;
  for (const auto& g : generators) {
    const SpMat g2 = g * g;
    std::vector<double> mean, var;
    for (const auto& psi : states) {
      const double m = expectation(g, psi);
      mean.push_back(m);
      var.push_back(expectation(g2, psi) - m * m);
    }
    out.mean.push_back(std::move(mean));
    out.variance.push_back(std::move(var));
  }
  return out;
}

std::vector<double> relative_deviation(const std::vector<double>& series) {
  std::vector<double> out;
  if (series.empty()) return out;
  for (double x : series) {
    if (std::abs(x) < 1e-12) throw Error(ErrorKind::Numerical, "relative_deviation: reference value vanishes");
    out.push_back(std::abs(x - series.front()) / std::abs(x));
  }
  return out;
}

double fit_half_period(const std::vector<double>& times, const std::vector<double>& series) {
  if (times.size() != series.size() || times.size() < 3) throw Error(ErrorKind::Validation, "fit_half_period: bad input");
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    if (series[k] <= series[k - 1] && series[k] < series[k + 1]) {
      const double h = times[k + 1] - times[k];
      const double y0 = series[k - 1], y1 = series[k], y2 = series[k + 1];
      const double denom = y0 - 2.0 * y1 + y2;
      const double shift = denom > 0.0 ? 0.5 * h * (y0 - y2) / denom : 0.0;
      return times[k] + shift;
    }
  }
  throw Error(ErrorKind::Convergence, "fit_half_period: no minimum inside the window");
}

double dc_baseline(const std::vector<double>& times, const std::vector<double>& series, double slow_period) {
  if (times.size() != series.size() || times.size() < 2) throw Error(ErrorKind::Validation, "dc_baseline: bad input");
  const double window = times.back() - times.front();
  if (window < 5.0 * slow_period * (1.0 - 1e-12))
    throw Error(ErrorKind::Validation, "dc_baseline: insufficient window (needs at least five slow periods)");
  // Rectangle rule over [t0, t_end), i.e. FFT bin zero / N.
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < series.size(); ++k) acc += series[k];
  return std::abs(acc / static_cast<double>(series.size() - 1));
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& f) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::mutex m;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard lock(m);
        if (next >= n || failure) return;
        i = next++;
      }
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

double baseline_point(double beta0, double g3, const BaselineOptions& opts) {
  LinkParams p = LinkParams::from_beta0(opts.U, beta0, g3);
  p.omega_matter = {p.omega_gap(), p.omega_gap()};
  const System sys = build_link(p);
  const Vec psi0 = sys.product_state({1, 0}, {sys.modes[0].cat_plus});
  const double slow = 2.0 * std::numbers::pi / rabi_frequencies(p).plus;
  EvolutionPlan plan;
  plan.times = uniform_times(opts.periods * slow, opts.samples);
  plan.method = Propagator::EigenPropagator;
  const auto gens = gauge_generators(sys);
  const auto ev = evolve(sys.H, psi0, plan, {{"G1", gens[0]}, {"G1_sq", SpMat(gens[0] * gens[0])}});
  const auto& m = ev.series["G1"];
  const auto& sq = ev.series["G1_sq"];
  std::vector<double> dg(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) dg[k] = sq[k] - m[k] * m[k];
  return dc_baseline(plan.times, dg, slow);
}

}  // namespace

SweepGrid baseline_map(const std::vector<double>& beta0, const std::vector<double>& g3, const BaselineOptions& opts) {
  if (beta0.empty() || g3.empty()) throw Error(ErrorKind::Validation, "baseline_map: empty grid");
  SweepGrid grid{beta0, g3, Eigen::MatrixXd::Zero(static_cast<Index>(beta0.size()), static_cast<Index>(g3.size())), {}};
  std::size_t advisories = 0;
  {
    ScopedWarningCapture capture;
    parallel_for(beta0.size() * g3.size(), opts.workers, [&](std::size_t idx) {
      const std::size_t i = idx / g3.size(), j = idx % g3.size();
      grid.raw(static_cast<Index>(i), static_cast<Index>(j)) = baseline_point(beta0[i], g3[j], opts);
    });
    advisories = capture.messages().size();
  }
  if (advisories > 0) warn("baseline_map: " + std::to_string(advisories) + " advisory warnings during sweep");
  const double mx = grid.raw.maxCoeff();
  grid.normalized = mx > 0.0 ? Eigen::MatrixXd(grid.raw / mx) : grid.raw;
  return grid;
}

double ipr_literal(const Vec& psi, const SpMat& projector) {
  const double w = expectation(projector, psi);
  if (w <= 0.0) return 0.0;
  return w * w / w;
}

double ipr_eigenbasis(const Vec& phi, const EigenDecomposition& dec, double cluster_tol) {
  const Vec overlaps = dec.eigenvectors.adjoint() * phi;
  double total = 0.0;
  for (const auto& [b, e] : degenerate_clusters(dec.eigenvalues, cluster_tol)) {
    double w = 0.0;
    for (Index k = b; k < e; ++k) w += std::norm(overlaps(k));
    total += w * w;
  }
  return total;
}

double ipr_diagonal_ensemble(const LinkParams& p) {
  const System sys = build_link(p);
  const auto dec = eigh(sys.H, "link spectrum");
  const double tol = 1e-10 * std::max(1.0, norm_bound(sys.H));
  const Vec psi = sys.product_state({1, 0}, {sys.modes[0].cat_plus});
  const SpMat proj = sys.projector(0);
  const Vec overlaps = dec.eigenvectors.adjoint() * psi;
  double total = 0.0;
  for (const auto& [b, e] : degenerate_clusters(dec.eigenvalues, tol)) {
    const Vec part = dec.eigenvectors.middleCols(b, e - b) * overlaps.segment(b, e - b);
    total += expectation(proj, part);
  }
  return total;
}

CatIpr cat_ipr(const LinkParams& p) {
  const System sys = build_link(p);
  const auto dec = eigh(sys.H, "link spectrum");
  const double tol = 1e-10 * std::max(1.0, norm_bound(sys.H));
  const auto& m = sys.modes[0];
  double ipr[2];
  for (int eta = 0; eta < 2; ++eta) {
    const Vec& cat = eta == 0 ? m.cat_plus : m.cat_minus;
    const Vec& other = eta == 0 ? m.cat_minus : m.cat_plus;
    Mat s(sys.basis.size(), 2);
    s.col(0) = sys.product_state({1, 0}, {cat});
    s.col(1) = sys.product_state({0, 1}, {other});
    const Mat block = s.adjoint() * (sys.H * s);
    const auto local = eigh(Mat(0.5 * (block + block.adjoint())), "cat doublet");
    double acc = 0.0;
    for (Index k = 0; k < 2; ++k) acc += ipr_eigenbasis(s * local.eigenvectors.col(k), dec, tol);
    ipr[eta] = 0.5 * acc;
  }
  return {ipr[0], ipr[1], 0.5 * (ipr[0] + ipr[1])};
}

SweepMap ipr_map(const std::vector<double>& beta0, const std::vector<double>& g3, double U, std::size_t workers) {
  if (beta0.empty() || g3.empty()) throw Error(ErrorKind::Validation, "ipr_map: empty grid");
  SweepMap map{beta0, g3, Eigen::MatrixXd::Zero(static_cast<Index>(beta0.size()), static_cast<Index>(g3.size()))};
  std::size_t advisories = 0;
  {
    ScopedWarningCapture capture;
    parallel_for(beta0.size() * g3.size(), workers, [&](std::size_t idx) {
      const std::size_t i = idx / g3.size(), j = idx % g3.size();
      LinkParams p = LinkParams::from_beta0(U, beta0[i], g3[j]);
      p.omega_matter = {p.omega_gap(), p.omega_gap()};
      map.values(static_cast<Index>(i), static_cast<Index>(j)) = cat_ipr(p).mean;
    });
    advisories = capture.messages().size();
  }
  if (advisories > 0) warn("ipr_map: " + std::to_string(advisories) + " advisory warnings during sweep");
  return map;
}

std::vector<double> half_max_contour(const SweepMap& map) {
  const Eigen::MatrixXd d = (1.0 - map.values.array()).matrix();
  const double level = 0.5 * d.maxCoeff();
  std::vector<double> out;
  for (Index i = 0; i < d.rows(); ++i) {
    double g = std::numeric_limits<double>::quiet_NaN();
    for (Index j = 0; j < d.cols(); ++j) {
      if (d(i, j) >= level) {
        if (j == 0) {
          g = map.g3[0];
        } else {
          const double f = (level - d(i, j - 1)) / (d(i, j) - d(i, j - 1));
          g = map.g3[static_cast<std::size_t>(j - 1)] + f * (map.g3[static_cast<std::size_t>(j)] - map.g3[static_cast<std::size_t>(j - 1)]);
        }
        break;
      }
    }
    out.push_back(g);
  }
  return out;
}

FourierSpectrum fourier_channel(const std::vector<double>& times, const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (times.size() != n || n < 2) throw Error(ErrorKind::Validation, "fourier_channel: bad input");
  const double dt = times[1] - times[0];
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((times[k] - times[k - 1]) - dt) > 1e-9 * std::abs(dt))
      throw Error(ErrorKind::Validation, "fourier_channel: sampling is not uniform");
  static std::mutex planner_mutex;
  std::vector<double> in(series);
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  FourierSpectrum s;
  const double window = dt * static_cast<double>(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    s.omega.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / window);
    s.magnitude.push_back(std::hypot(out[k][0], out[k][1]) / static_cast<double>(n));
  }
  return s;
}

std::vector<double> spectral_lines(const FourierSpectrum& s, double rel_threshold) {
  std::vector<double> lines;
  if (s.magnitude.size() < 3) return lines;
  const double peak = *std::max_element(s.magnitude.begin() + 1, s.magnitude.end());
  if (peak <= 0.0) return lines;
  for (std::size_t k = 1; k < s.magnitude.size(); ++k) {
    const double left = s.magnitude[k - 1];
    const double right = k + 1 < s.magnitude.size() ? s.magnitude[k + 1] : 0.0;
    if (s.magnitude[k] > left && s.magnitude[k] >= right && s.magnitude[k] >= rel_threshold * peak)
      lines.push_back(s.omega[k]);
  }
  return lines;
}

ChainRun chain_run(const ChainParams& p, const std::vector<double>& times) {
  const System sys = build_chain(p);
  std::vector<std::size_t> matter(p.N, 0);
  matter[0] = 1;
  std::vector<Vec> gauge;
  for (const auto& m : sys.modes) gauge.push_back(m.cat_plus);
  Vec psi0 = sys.product_state(matter, gauge);
  EvolutionPlan plan;
  plan.times = times;
  ChainRun run;
  run.dim = static_cast<std::size_t>(sys.basis.size());
  auto obs = standard_observables(sys);
  obs.push_back({"n_total", sys.total_matter_number()});
  run.evolution = evolve(sys.H, psi0, plan, obs);
  return run;
}

}  // namespace catlgt
