#include "recipes.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "catlgt/diagnostics.hpp"
#include "catlgt/dynamics.hpp"
#include "catlgt/plaquette.hpp"
#include "catlgt/spectra.hpp"
#include "catlgt/wigner.hpp"
#include "output.hpp"

namespace catlgt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ExperimentConfig make(std::initializer_list<std::pair<const char*, const char*>> kv) {
  ExperimentConfig c;
  for (const auto& [k, v] : kv) c.set(k, v);
  return c;
}

Propagator method_of(const ExperimentConfig& c) {
  const std::string m = c.get("run.method", "auto");
  if (m == "eigen") return Propagator::EigenPropagator;
  if (m == "krylov") return Propagator::KrylovStep;
  return Propagator::Auto;
}

EvolutionPlan plan_of(const ExperimentConfig& c, std::vector<double> times) {
  EvolutionPlan plan;
  plan.times = std::move(times);
  plan.method = method_of(c);
  plan.tolerance = c.number("run.tolerance", plan.tolerance);
  return plan;
}

/// Resonant matter frequencies unless the config sets them.
LinkParams resonant(const ExperimentConfig& c, LinkParams p) {
  if (!c.has("system.omega_matter")) p.omega_matter = {p.omega_gap(), p.omega_gap()};
  return p;
}

double window(const ExperimentConfig& c, double period, double default_periods) {
  if (c.has("run.t_max")) return c.number("run.t_max", 0.0);
  return c.number("run.periods", default_periods) * period;
}

void write_series(const fs::path& path, const std::string& hash, const TimeSeries& s,
                  const std::vector<std::pair<std::string, std::string>>& prefix = {}) {
  std::vector<std::string> cols;
  for (const auto& [k, v] : prefix) cols.push_back(k);
  cols.insert(cols.end(), {"t", "channel", "value"});
  CsvWriter csv(path, "timeseries", hash, cols);
  for (const auto& name : s.names())
    for (std::size_t k = 0; k < s.times().size(); ++k) {
      std::vector<std::string> row;
      for (const auto& [key, v] : prefix) row.push_back(v);
      row.insert(row.end(), {format_number(s.times()[k]), name, format_number(s[name][k])});
      csv.row(row);
    }
}

// Adds Delta G channels computed from G and G^2.
TimeSeries with_variances(const TimeSeries& s, std::size_t sites) {
  TimeSeries out(s.times());
  for (const auto& n : s.names())
    if (n.find("_sq") == std::string::npos) out.add(n, s[n]);
  for (std::size_t i = 1; i <= sites; ++i) {
    const auto& g = s["G" + std::to_string(i)];
    const auto& g2 = s["G" + std::to_string(i) + "_sq"];
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = g2[k] - g[k] * g[k];
    out.add("DeltaG" + std::to_string(i), std::move(v));
  }
  return out;
}

PhaseSpaceGrid grid_of(const ExperimentConfig& c, double beta0) {
  const std::size_t res = c.count("wigner.resolution", 128);
  const double hw = c.number("wigner.half_width", beta0 + 3.0);
  return PhaseSpaceGrid::symmetric(hw, res);
}

void write_wigner(CsvWriter& csv, const std::string& tag, const WignerField& f) {
  for (std::size_t i = 0; i < f.grid.resolution; ++i)
    for (std::size_t j = 0; j < f.grid.resolution; ++j)
      csv.row({tag, format_number(f.grid.x(i)), format_number(f.grid.p(j)),
               format_number(f.values(static_cast<Index>(i), static_cast<Index>(j)))});
}

double origin_value(const WignerField& f) {
  // Exact origin when the grid has an odd resolution; otherwise nearest point.
  const std::size_t mid = f.grid.resolution / 2;
  return f.values(static_cast<Index>(mid), static_cast<Index>(mid));
}

json fig2(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams p = c.link();
  p.validate();
  const System sys = build_link(p);
  const double om = rabi_frequencies(p).plus;
  if (om <= 0.0) throw Error(ErrorKind::Validation, "fig2 needs g3 > 0");
  const Vec psi0 = sys.product_state({1, 0}, {sys.modes[0].cat_plus});
  const Vec target = sys.product_state({0, 1}, {sys.modes[0].cat_minus});
  const auto times = uniform_times(window(c, kTwoPi / om, 1.0), c.count("run.samples", 400));
  const auto ev = evolve(sys.H, psi0, plan_of(c, times), standard_observables(sys));
  TimeSeries s = with_variances(ev.series, 2);
  std::vector<double> fid;
  for (const auto& psi : ev.states) fid.push_back(std::norm(target.dot(psi)));
  s.add("fidelity_swap", fid);
  write_series(ctx.out / "timeseries.csv", hash, s);

  const double t_swap = std::numbers::pi / om;
  const auto swap = evolve(sys.H, psi0, plan_of(c, {0.0, t_swap}));
  json wig = json::object();
  const std::string names[3] = {"a1", "b12", "a2"};
  for (int snap = 0; snap < 2; ++snap) {
    CsvWriter csv(ctx.out / (snap == 0 ? "wigner_t0.csv" : "wigner_swap.csv"), "wigner", hash, {"site", "x", "p", "w"});
    csv.comment("time " + format_number(snap == 0 ? 0.0 : t_swap) + "; alpha = x + i p");
    for (std::size_t site = 0; site < 3; ++site) {
      const auto f = marginal_wigner(sys, swap.states[static_cast<std::size_t>(snap)], site, grid_of(c, p.beta0()), ctx.workers);
      write_wigner(csv, names[site], f);
      if (site == 1) wig[snap == 0 ? "gauge_origin_t0" : "gauge_origin_swap"] =
          (2.0 / std::numbers::pi) * fock_marginal(sys, swap.states[static_cast<std::size_t>(snap)], 1)
                                        .expectation(parity_operator(HilbertSpace::fock(sys.modes[0].isometry.rows(), "b")));
    }
  }
  double g_dev = 0.0;
  for (double g : s["G1"]) g_dev = std::max(g_dev, std::abs(g + 1.0));
  const double fitted = std::numbers::pi / fit_half_period(times, s["n1"]);
  json h = {{"beta0", p.beta0()},
            {"omega_gap", p.omega_gap()},
            {"g3", p.g3},
            {"omega_plus", om},
            {"omega_fit", fitted},
            {"omega_fit_rel_error", std::abs(fitted - om) / om},
            {"fidelity_at_swap", std::norm(target.dot(swap.states[1]))},
            {"max_abs_G1_plus_1", g_dev},
            {"dim", sys.basis.size()}};
  h.update(wig);
  return h;
}

json fig3a(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams base = c.link();
  const auto betas = c.grid("sweep.beta0", {});
  CsvWriter csv(ctx.out / "rabi.csv", "rabi", hash,
                {"beta0", "omega_plus", "omega_minus", "full_plus", "full_minus", "projected_plus", "projected_minus"});
  double worst = 0.0;
  std::vector<std::vector<double>> rows(betas.size());
  parallel_for(betas.size(), ctx.workers, [&](std::size_t i) {
    LinkParams p = LinkParams::from_beta0(base.U, betas[i], base.g3);
    p.gauge_dim = base.gauge_dim;
    const auto om = rabi_frequencies(p);
    const auto el = rabi_matrix_elements(p);
    rows[i] = {betas[i], om.plus, om.minus, 2 * std::abs(el.full_plus), 2 * std::abs(el.full_minus),
               2 * std::abs(el.projected_plus), 2 * std::abs(el.projected_minus)};
  });
  for (const auto& r : rows) {
    csv.row(r);
    worst = std::max({worst, std::abs(r[3] - r[1]) / r[1], r[2] > 0 ? std::abs(r[4] - r[2]) / r[2] : 0.0});
  }
  return {{"g3", base.g3}, {"points", betas.size()}, {"max_rel_error_full_vs_formula", worst}};
}

json fig3b(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams base = c.link();
  const double ratio = c.number("system.g3_over_gap", 0.01);
  const auto betas = c.grid("sweep.beta0", {});
  CsvWriter csv(ctx.out / "wigner_swap.csv", "wigner", hash, {"beta0", "x", "p", "w"});
  json asym = json::array();
  for (double b : betas) {
    LinkParams p = LinkParams::from_beta0(base.U, b, 0.0);
    p.g3 = c.has("system.g3") ? base.g3 : ratio * p.omega_gap();
    const System sys = build_link(p);
    const auto ev = evolve(sys.H, sys.product_state({1, 0}, {sys.modes[0].cat_plus}),
                           plan_of(c, {0.0, std::numbers::pi / rabi_frequencies(p).plus}));
    const auto rho = fock_marginal(sys, ev.states.back(), sys.gauge_sites[0]);
    const auto f = wigner(rho, grid_of(c, b), ctx.workers);
    write_wigner(csv, format_number(b), f);
    asym.push_back({{"beta0", b}, {"rotational_asymmetry", rotational_asymmetry(rho, b + 3.0)}});
  }
  return {{"asymmetry", asym}};
}

json fig4a(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams base = resonant(c, c.link());
  const auto ratios = c.grid("run.g3_ratios", {});
  CsvWriter csv(ctx.out / "flux.csv", "flux", hash, {"g3_over_gap", "t", "sz"});
  json curves = json::array();
  ScopedWarningCapture advisories;
  for (double r : ratios) {
    LinkParams p = base;
    p.g3 = r * p.omega_gap();
    const System sys = build_link(p);
    const double om = rabi_frequencies(p).plus;
    const auto times = uniform_times(window(c, kTwoPi / om, 2.0), c.count("run.samples", 400));
    const auto ev = evolve(sys.H, sys.product_state({1, 0}, {sys.modes[0].cat_plus}), plan_of(c, times),
                           {{"sz", sys.sigma_z(0)}});
    double lo = 1.0, hi_after = -1.0;
    bool passed_min = false;
    const auto& sz = ev.series["sz"];
    for (std::size_t k = 0; k < times.size(); ++k) {
      csv.row({r, times[k], sz[k]});
      lo = std::min(lo, sz[k]);
      if (k > 0 && sz[k] > sz[k - 1]) passed_min = true;
      if (passed_min) hi_after = std::max(hi_after, sz[k]);
    }
    curves.push_back({{"g3_over_gap", r}, {"g3", p.g3}, {"min_sz", lo}, {"max_sz_after_first_minimum", hi_after}});
  }
  return {{"beta0", base.beta0()}, {"curves", curves}, {"advisories", advisories.messages().size()}};
}

json fig4b(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams base = resonant(c, c.link());
  const auto g3s = c.grid("sweep.g3", {});
  CsvWriter csv(ctx.out / "spectrum.csv", "spectrum", hash, {"g3", "eigen_index", "eigenvalue", "cat_weight"});
  std::vector<SpectrumPoint> pts(g3s.size());
  ScopedWarningCapture advisories;
  parallel_for(g3s.size(), ctx.workers, [&](std::size_t i) { pts[i] = spectrum_vs_g3(base, {g3s[i]}).front(); });
  double trace_err = 0.0;
  json maxw = json::array();
  for (const auto& pt : pts) {
    for (Index k = 0; k < pt.eigenvalues.size(); ++k)
      csv.row({format_number(pt.g3), std::to_string(k), format_number(pt.eigenvalues(k)), format_number(pt.cat_weights(k))});
    trace_err = std::max(trace_err, std::abs(pt.cat_weights.sum() - 4.0));
    maxw.push_back({{"g3", pt.g3}, {"max_cat_weight", pt.cat_weights.maxCoeff()}});
  }
  // In the one-excitation sector P_C acts on two matter configurations, so the weights sum to 4.
  return {{"beta0", base.beta0()}, {"max_cat_weight", maxw}, {"cat_weight_trace_error", trace_err}};
}

json fig4cd(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams base = resonant(c, c.link());
  const auto betas = c.grid("sweep.beta0", {});
  const auto g3s = c.grid("sweep.g3", {});
  ScopedWarningCapture advisories;
  std::vector<CatIpr> line(g3s.size());
  std::vector<double> literal(g3s.size());
  parallel_for(g3s.size(), ctx.workers, [&](std::size_t j) {
    LinkParams p = base;
    p.g3 = g3s[j];
    line[j] = cat_ipr(p);
    literal[j] = ipr_diagonal_ensemble(p);
  });
  {
    CsvWriter csv(ctx.out / "ipr_line.csv", "ipr_line", hash,
                  {"g3", "ipr_eigenbasis_plus", "ipr_eigenbasis_minus", "ipr_eigenbasis", "ipr_literal"});
    for (std::size_t j = 0; j < g3s.size(); ++j) csv.row({g3s[j], line[j].plus, line[j].minus, line[j].mean, literal[j]});
  }
  const auto map = ipr_map(betas, g3s, base.U, ctx.workers);
  {
    CsvWriter csv(ctx.out / "ipr_map.csv", "ipr_map", hash, {"beta0", "g3", "ipr_eigenbasis"});
    for (std::size_t i = 0; i < betas.size(); ++i)
      for (std::size_t j = 0; j < g3s.size(); ++j) csv.row({betas[i], g3s[j], map.values(static_cast<Index>(i), static_cast<Index>(j))});
  }
  const auto contour = half_max_contour(map);
  json cont = json::array();
  {
    CsvWriter csv(ctx.out / "ipr_contour.csv", "ipr_contour", hash, {"beta0", "g3_half_max", "g3_boundary"});
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double boundary = 2.0 * base.U * betas[i];
      csv.row({betas[i], contour[i], boundary});
      cont.push_back({{"beta0", betas[i]}, {"g3_half_max", std::isnan(contour[i]) ? json(nullptr) : json(contour[i])},
                      {"g3_boundary", boundary}});
    }
  }
  return {{"beta0_line", base.beta0()},
          {"ipr_min", map.values.minCoeff()},
          {"ipr_max", map.values.maxCoeff()},
          {"half_max_contour", cont}};
}

json fig4e(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  BaselineOptions opts;
  opts.U = c.link().U;
  opts.periods = c.number("run.periods", opts.periods);
  opts.samples = c.count("run.samples", opts.samples);
  opts.workers = ctx.workers;
  const auto betas = c.grid("sweep.beta0", {});
  const auto g3s = c.grid("sweep.g3", {});
  const auto grid = baseline_map(betas, g3s, opts);
  CsvWriter csv(ctx.out / "baseline_map.csv", "baseline_map", hash, {"beta0", "g3", "dc_raw", "dc_normalized"});
  double corner = 0.0;
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t j = 0; j < g3s.size(); ++j) {
      const Index ii = static_cast<Index>(i), jj = static_cast<Index>(j);
      csv.row({betas[i], g3s[j], grid.raw(ii, jj), grid.normalized(ii, jj)});
      if (betas[i] >= 2.0 && g3s[j] <= 4.0 * opts.U * betas[i] * betas[i] / 100.0) corner = std::max(corner, grid.normalized(ii, jj));
    }
  return {{"points", betas.size() * g3s.size()}, {"raw_max", grid.raw.maxCoeff()}, {"corner_max_normalized", corner}};
}

json fig5(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const ChainParams cp = c.chain();
  cp.validate();
  const double om = rabi_frequencies(cp.link).plus;
  const auto times = uniform_times(window(c, kTwoPi / om, 2.0), c.count("run.samples", 800));
  const auto run = chain_run(cp, times);
  TimeSeries s = with_variances(run.evolution.series, cp.N);
  const std::size_t mid = (cp.N + 1) / 2;
  const auto dev = relative_deviation(s["G" + std::to_string(mid)]);
  s.add("G" + std::to_string(mid) + "_rel_dev", dev);
  write_series(ctx.out / "timeseries.csv", hash, s);
  double max_last = 0.0, max_dev = 0.0, drift = 0.0;
  for (double v : s["n" + std::to_string(cp.N)]) max_last = std::max(max_last, v);
  for (double v : dev) max_dev = std::max(max_dev, v);
  for (double v : s["n_total"]) drift = std::max(drift, std::abs(v - 1.0));
  return {{"N", cp.N}, {"M", cp.M}, {"dim", run.dim}, {"max_population_last_site", max_last},
          {"max_rel_dev_central_generator", max_dev}, {"matter_number_drift", drift}};
}

// Half period from the first minimum where most of the excitation has left;
// shallow off-resonant ripples are skipped.
double transfer_half_period(const std::vector<double>& times, const std::vector<double>& n1) {
  std::size_t k = 0;
  while (k < n1.size() && n1[k] > 0.5) ++k;
  if (k == 0 || k == n1.size()) throw Error(ErrorKind::Convergence, "no excitation transfer inside the window");
  const std::size_t from = k - 1;
  return fit_half_period({times.begin() + static_cast<std::ptrdiff_t>(from), times.end()},
                         {n1.begin() + static_cast<std::ptrdiff_t>(from), n1.end()});
}

json s1(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams p = c.link();
  p.validate();
  const System sys = build_link(p);
  const auto om = rabi_frequencies(p);
  if (om.minus <= 0.0) throw Error(ErrorKind::Validation, "s1 needs beta0 > 0 and g3 > 0");
  const auto times = uniform_times(window(c, kTwoPi / om.minus, 1.0), c.count("run.samples", 4000));
  CsvWriter csv(ctx.out / "timeseries.csv", "timeseries", hash, {"initial", "t", "channel", "value"});
  double half[2];
  for (int eta = 0; eta < 2; ++eta) {
    const Vec& cat = eta == 0 ? sys.modes[0].cat_plus : sys.modes[0].cat_minus;
    const auto ev = evolve(sys.H, sys.product_state({1, 0}, {cat}), plan_of(c, times),
                           {{"n1", sys.matter_number(0)}, {"n2", sys.matter_number(1)}, {"sz", sys.sigma_z(0)}});
    const std::string tag = eta == 0 ? "C+" : "C-";
    for (const auto& name : ev.series.names())
      for (std::size_t k = 0; k < times.size(); ++k) csv.row({tag, format_number(times[k]), name, format_number(ev.series[name][k])});
    half[eta] = transfer_half_period(times, ev.series["n1"]);
  }
  return {{"beta0", p.beta0()}, {"omega_plus", om.plus}, {"omega_minus", om.minus},
          {"period_ratio", half[1] / half[0]}, {"omega_ratio", om.plus / om.minus}};
}

json s2_hinton(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const LinkParams base = c.link();
  const auto g3s = c.grid("sweep.g3", {});
  CsvWriter csv(ctx.out / "hinton.csv", "hinton", hash, {"g3", "row_label", "col_label", "value"});
  CsvWriter fft(ctx.out / "fourier.csv", "fourier", hash, {"g3", "omega", "magnitude"});
  json lines = json::array();
  ScopedWarningCapture advisories;
  for (double g : g3s) {
    LinkParams p = base;
    p.g3 = g;
    const auto h = hinton_elements(p);
    for (std::size_t i = 0; i < h.labels.size(); ++i)
      for (std::size_t j = 0; j < h.labels.size(); ++j)
        csv.row({format_number(g), h.labels[i], h.labels[j], format_number(h.values(static_cast<Index>(i), static_cast<Index>(j)))});
    if (g <= 0.0) continue;
    const System sys = build_link(p);
    const double om = rabi_frequencies(p).plus;
    const auto times = uniform_times(window(c, kTwoPi / om, 10.0), c.count("run.samples", 2048));
    const auto ev = evolve(sys.H, sys.product_state({1, 0}, {sys.modes[0].cat_plus}), plan_of(c, times),
                           {{"sz", sys.sigma_z(0)}});
    const auto spec = fourier_channel(times, ev.series["sz"]);
    for (std::size_t k = 0; k < spec.omega.size(); ++k) fft.row({g, spec.omega[k], spec.magnitude[k]});
    lines.push_back({{"g3", g}, {"lines", spectral_lines(spec).size()}});
  }
  return {{"U", base.U}, {"beta0", base.beta0()}, {"fourier_lines", lines}};
}

json plaquette_recipe(const RunContext& ctx, const std::string& hash) {
  const auto& c = ctx.config;
  const double g = c.number("plaquette.g_triangle", 1.0);
  const auto betas = c.grid("plaquette.beta", {2.0, 2.0, 2.0});
  if (betas.size() != 3) throw Error(ErrorKind::Validation, "plaquette.beta needs three values");
  const double g3 = c.link().g3;
  CsvWriter csv(ctx.out / "plaquette.csv", "plaquette", hash, {"phi", "k", "momentum_formula", "ancillary"});
  json out = json::object();
  for (double phi : {0.0, std::numbers::pi}) {
    const auto formula = momentum_spectrum(g, phi);
    const RVec anc = flux_sector_spectrum(g, phi);
    double err = 0.0;
    for (int k = 0; k < 3; ++k) {
      // Each momentum level appears once per qubit configuration of the sector.
      const double a = anc(4 * k);
      csv.row({phi, static_cast<double>(k - 1), formula[static_cast<std::size_t>(k)], a});
      err = std::max(err, std::abs(a - formula[static_cast<std::size_t>(k)]));
    }
    out[phi == 0.0 ? "flux_0" : "flux_pi"] = {{"spectrum", formula}, {"max_error", err}};
  }
  const auto direct = eigh(plaquette_direct(g3, {betas[0], betas[1], betas[2]}), "direct plaquette");
  out["direct_eigenvalues"] = std::vector<double>(direct.eigenvalues.data(), direct.eigenvalues.data() + direct.size());
  out["sector_gap_over_g"] = (flux_sector_spectrum(g, std::numbers::pi).minCoeff() - flux_sector_spectrum(g, 0.0).minCoeff()) / g;
  return out;
}

const std::map<std::string, json (*)(const RunContext&, const std::string&)>& table() {
  static const std::map<std::string, json (*)(const RunContext&, const std::string&)> t = {
      {"fig2", fig2},   {"fig3a", fig3a}, {"fig3b", fig3b}, {"fig4a", fig4a},         {"fig4b", fig4b},
      {"fig4cd", fig4cd}, {"fig4e", fig4e}, {"fig5", fig5}, {"s1", s1}, {"s2-hinton", s2_hinton},
      {"plaquette", plaquette_recipe}};
  return t;
}

}  // namespace

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {"fig2",  "fig3a", "fig3b", "fig4a", "fig4b",   "fig4cd",
                                                 "fig4e", "fig5",  "s1",    "s2-hinton", "plaquette"};
  return names;
}

ExperimentConfig recipe_defaults(const std::string& recipe) {
  if (recipe == "fig2")
    return make({{"system.U", "0.03"}, {"system.G", "0.24"}, {"system.g3_over_gap", "0.01"}, {"run.periods", "1"},
                 {"run.samples", "400"}, {"wigner.resolution", "128"}});
  if (recipe == "fig3a") return make({{"system.U", "0.03"}, {"system.g3", "0.001"}, {"sweep.beta0", "0.05:3:60"}});
  if (recipe == "fig3b")
    return make({{"system.U", "0.03"}, {"system.g3_over_gap", "0.01"}, {"sweep.beta0", "2,1,0.5,0.18"},
                 {"wigner.resolution", "128"}});
  if (recipe == "fig4a")
    return make({{"system.U", "0.03"}, {"system.beta0", "2"}, {"run.g3_ratios", "0.01,0.1,0.5,1"}, {"run.periods", "2"},
                 {"run.samples", "400"}});
  if (recipe == "fig4b") return make({{"system.U", "0.03"}, {"system.beta0", "2"}, {"sweep.g3", "0:0.2:41"}});
  if (recipe == "fig4cd")
    return make({{"system.U", "0.03"}, {"system.beta0", "2"}, {"sweep.beta0", "0.2:3:29"}, {"sweep.g3", "0.001:0.2:40:log"}});
  if (recipe == "fig4e")
    return make({{"system.U", "0.03"}, {"sweep.beta0", "0.2:3:12"}, {"sweep.g3", "0.001:0.2:12"}, {"run.periods", "20"},
                 {"run.samples", "4000"}});
  if (recipe == "fig5")
    return make({{"system.U", "0.03"}, {"system.G", "0.24"}, {"system.g3_over_gap", "0.01"}, {"system.N", "3"},
                 {"system.M", "6"}, {"run.periods", "2"}, {"run.samples", "800"}});
  if (recipe == "s1")
    return make({{"system.U", "0.03"}, {"system.beta0", "0.4"}, {"system.g3_over_gap", "0.01"}, {"run.periods", "1"},
                 {"run.samples", "4000"}});
  if (recipe == "s2-hinton")
    return make({{"system.U", "1"}, {"system.beta0", "2"}, {"sweep.g3", "0,0.16,1.6,8"}, {"run.periods", "10"},
                 {"run.samples", "2048"}});
  if (recipe == "plaquette")
    return make({{"system.g3", "0.001"}, {"plaquette.g_triangle", "1"}, {"plaquette.beta", "2,2,2"}});
  throw Error(ErrorKind::Validation, "unknown recipe '" + recipe + "'");
}

json run_recipe(const std::string& recipe, const RunContext& ctx) {
  const auto it = table().find(recipe);
  if (it == table().end()) throw Error(ErrorKind::Validation, "unknown recipe '" + recipe + "'");
  ctx.config.validate();
  fs::create_directories(ctx.out);
  const std::string hash = ctx.config.hash();
  {
    std::ofstream cfg(ctx.out / "config.ini", std::ios::binary);
    cfg << ctx.config.serialize();
  }
  json summary = {{"recipe", recipe}, {"config_hash", hash}, {"headline_metrics", it->second(ctx, hash)}};
  write_json(ctx.out / "summary.json", summary);
  return summary;
}

json run_sweep(const RunContext& ctx) {
  const auto& c = ctx.config;
  c.validate();
  const std::string quantity = c.get("sweep.quantity", "ipr");
  const auto betas = c.grid("sweep.beta0", {});
  const auto g3s = c.grid("sweep.g3", {});
  if (betas.empty() || g3s.empty()) throw Error(ErrorKind::Validation, "sweep needs sweep.beta0 and sweep.g3 grids");
  const std::string hash = c.hash();
  const fs::path points = ctx.out / "points";
  fs::create_directories(points);
  {
    std::ofstream cfg(ctx.out / "config.ini", std::ios::binary);
    cfg << c.serialize();
  }
  const std::size_t n = betas.size() * g3s.size();
  std::vector<double> values(n, std::nan(""));
  std::vector<std::string> failures(n);
  const LinkParams base = c.link();
  BaselineOptions opts;
  opts.U = base.U;
  opts.periods = c.number("run.periods", opts.periods);
  opts.samples = c.count("run.samples", opts.samples);
  ScopedWarningCapture advisories;
  parallel_for(n, ctx.workers, [&](std::size_t idx) {
    const std::size_t i = idx / g3s.size(), j = idx % g3s.size();
    const fs::path marker = points / (std::to_string(i) + "_" + std::to_string(j) + ".done");
    {
      std::ifstream in(marker);
      std::string h, v;
      if (in && std::getline(in, h) && h == hash && std::getline(in, v)) {
        values[idx] = parse_number(v, "marker value");
        return;
      }
    }
    try {
      double v;
      if (quantity == "ipr") {
        LinkParams p = LinkParams::from_beta0(base.U, betas[i], g3s[j]);
        p.omega_matter = {p.omega_gap(), p.omega_gap()};
        v = cat_ipr(p).mean;
      } else {
        v = baseline_map({betas[i]}, {g3s[j]}, opts).raw(0, 0);
      }
      values[idx] = v;
      const fs::path tmp = marker.string() + ".tmp";
      {
        std::ofstream out(tmp, std::ios::binary);
        out << hash << '\n' << format_number(v) << '\n';
      }
      fs::rename(tmp, marker);
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  });
  json failed = json::array();
  for (std::size_t idx = 0; idx < n; ++idx)
    if (!failures[idx].empty())
      failed.push_back({{"beta0", betas[idx / g3s.size()]}, {"g3", g3s[idx % g3s.size()]}, {"error", failures[idx]}});
  double mx = 0.0;
  for (double v : values)
    if (!std::isnan(v)) mx = std::max(mx, v);
  {
    CsvWriter csv(ctx.out / "sweep.csv", "sweep_" + quantity, hash, {"beta0", "g3", "value", "normalized"});
    for (std::size_t idx = 0; idx < n; ++idx) {
      const double v = values[idx];
      csv.row({betas[idx / g3s.size()], g3s[idx % g3s.size()], v, mx > 0.0 ? v / mx : v});
    }
  }
  json boundary = json::array();
  for (double b : betas) boundary.push_back({{"beta0", b}, {"g3_boundary", 2.0 * base.U * b}});
  json summary = {{"recipe", "sweep"},
                  {"config_hash", hash},
                  {"headline_metrics", {{"quantity", quantity}, {"points", n}, {"failed", failed.size()}, {"max", mx},
                                        {"boundary_curve", boundary}}}};
  write_json(ctx.out / "summary.json", summary);
  if (!failed.empty()) {
    write_json(ctx.out / "failures.json", failed);
    throw Error(ErrorKind::Convergence, std::to_string(failed.size()) + " sweep points failed; see failures.json");
  }
  return summary;
}

}  // namespace catlgt::cli
