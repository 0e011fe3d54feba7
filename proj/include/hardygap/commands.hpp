#pragma once
// Command implementations behind the CLI: each takes a parsed RunConfig and
// returns a report document plus an exit code.  Exit codes: 0 success,
// 1 configuration error (thrown as ConfigError), 2 solver non-convergence,
// 3 verification failure.

#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hardygap/classifier.hpp"
#include "hardygap/config.hpp"
#include "hardygap/estimates.hpp"
#include "hardygap/indicial.hpp"
#include "hardygap/mesh.hpp"
#include "hardygap/params.hpp"
#include "hardygap/profile.hpp"
#include "hardygap/rayleigh.hpp"
#include "hardygap/report.hpp"
#include "hardygap/svg.hpp"
#include "hardygap/verify.hpp"

namespace hardygap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerify = 3;

struct CommandOptions {
  bool plots = false;
  int jobs = 1;
  bool timestamp = true;  ///< false gives byte-stable reports
  std::optional<unsigned long> seed_override;
};

struct CommandResult {
  ReportDocument doc;
  int exit_code = kExitOk;
};

namespace detail {

inline SolverOptions solver_options_from(const RunConfig& cfg) {
  SolverOptions s;
  s.tol = cfg.solver.tol;
  s.max_iter = cfg.solver.max_iter;
  s.eig_tol = cfg.solver.eig_tol;
  return s;
}

inline HardyOptions hardy_options_from(const RunConfig& cfg) {
  HardyOptions opt;
  opt.elements = cfg.mesh.elements;
  opt.levels = cfg.mesh.levels;
  opt.L0 = cfg.mesh.depth0;
  opt.dL = cfg.mesh.depth_step;
  opt.solver = solver_options_from(cfg);
  return opt;
}

/// Validates the optional mesh constraints from the config against a mesh
/// that was actually built.
inline void check_mesh_constraints(const RunConfig& cfg, const GradedMesh& mesh) {
  if (cfg.mesh.grading != "auto") {
    const bool want_log = cfg.mesh.grading == "log";
    const bool is_log = mesh.grading == Grading::LogTowardInfinity;
    if (want_log != is_log)
      throw ConfigError("config: mesh.grading '" + cfg.mesh.grading +
                        "' does not match this domain's grading (" +
                        to_string(mesh.grading) + ")");
  }
  if (cfg.mesh.ratio > 0.0 && mesh.effective_ratio > cfg.mesh.ratio + 1e-12)
    throw ConfigError(
        "config: mesh.ratio cap " + format_sig(cfg.mesh.ratio) +
        " exceeded (effective ratio " + format_sig(mesh.effective_ratio) +
        "); raise mesh.elements or the cap");
}

inline HardyEstimate run_hardy_sweep(const RunConfig& cfg) {
  if (!cfg.mesh.t_min.empty())
    return hardy_estimate(cfg.domain, cfg.params, cfg.mesh.t_min,
                          cfg.mesh.r_max, cfg.mesh.elements,
                          solver_options_from(cfg));
  return hardy_estimate(cfg.domain, cfg.params, hardy_options_from(cfg));
}

inline ordered_json sweep_points_json(const std::vector<SweepPoint>& sweep) {
  ordered_json arr = ordered_json::array();
  for (const SweepPoint& s : sweep)
    arr.push_back({{"depth", sig15(s.L)},
                   {"t_min", sig15(s.t_min)},
                   {"r_max", sig15(s.r_max)},
                   {"value", sig15(s.value)},
                   {"iterations", s.iterations},
                   {"converged", s.converged}});
  return arr;
}

inline ordered_json rayleigh_json(const RayleighResult& res) {
  ordered_json j;
  j["value"] = tagged(res.value, Source::Computed);
  j["iterations"] = res.iterations;
  j["final_decrement"] = sig15(res.final_decrement);
  j["converged"] = res.converged;
  j["el_residual"] = sig15(res.el_residual);
  j["mesh"] = {{"elements", res.mesh_summary.elements},
               {"t_min", sig15(res.mesh_summary.t_min)},
               {"r_max", sig15(res.mesh_summary.r_max)},
               {"effective_ratio", sig15(res.mesh_summary.effective_ratio)},
               {"grading", to_string(res.mesh_summary.grading)}};
  return j;
}

inline ordered_json extrapolation_json(const ExtrapolatedValue& ev) {
  ordered_json j;
  j["value"] = tagged(ev.value, Source::Extrapolated);
  j["error_estimate"] = sig15(ev.error_estimate);
  j["intercept_linear"] = sig15(ev.intercept_linear);
  if (ev.used_extended) j["intercept_extended"] = sig15(ev.intercept_extended);
  j["fit_rms"] = sig15(ev.fit_rms);
  j["sweep"] = sweep_points_json(ev.sweep);
  return j;
}

/// Radius window over which the boundary decay of a minimizer is fitted:
/// well inside the asymptotic regime, clear of the truncation cutoff.
inline std::pair<double, double> boundary_decay_window(const GradedMesh& mesh) {
  const double rb = mesh.profile.singular_radii().front();
  const double span = mesh.profile.delta_span();
  const double d_lo = 8.0 * mesh.t_min;
  const double d_hi = std::min(0.25 * span, d_lo * 400.0);
  const double o = boundary_orientation(mesh.profile, rb);
  const double a = rb + o * d_lo, b = rb + o * d_hi;
  return {std::min(a, b), std::max(a, b)};
}

inline std::pair<double, double> farfield_decay_window(const GradedMesh& mesh) {
  return {mesh.r_max * std::exp(-5.0), mesh.r_max * std::exp(-1.0)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

inline CommandResult cmd_constants(const RunConfig& cfg,
                                   const CommandOptions& opt = {}) {
  CommandResult out;
  out.doc = report_skeleton("constants", cfg, opt.timestamp);
  const Params& prm = cfg.params;
  const Regime rg = classify_regime(prm);
  ordered_json r;
  r["c1"] = tagged(c_const(prm, 1), Source::Formula);
  r["cN"] = tagged(c_const(prm, prm.dim), Source::Formula);
  r["cmin"] = tagged(c_min(prm), Source::Formula);
  r["regime"] = to_string(rg.boundary_class);
  r["alpha_plus_p"] = sig15(rg.alpha_plus_p);
  r["extremal_exponent_boundary"] =
      sig15(extremal_exponent(prm, Location::Boundary));
  r["extremal_exponent_infinity"] =
      sig15(extremal_exponent(prm, Location::Infinity));
  out.doc.body["results"] = r;
  return out;
}

// ---------------------------------------------------------------------------
// indicial
// ---------------------------------------------------------------------------

inline CommandResult cmd_indicial(const RunConfig& cfg,
                                  const CommandOptions& opt = {}) {
  CommandResult out;
  out.doc = report_skeleton("indicial", cfg, opt.timestamp);
  const Params& prm = cfg.params;
  const Location loc = cfg.indicial.location == "infinity"
                           ? Location::Infinity
                           : Location::Boundary;
  const double c = indicial_c(prm, loc);
  const bool degenerate = indicial_degenerate(prm, loc);

  std::vector<double> mus = cfg.indicial.mu;
  if (cfg.indicial.grid_count > 0) {
    const int n = cfg.indicial.grid_count;
    for (int i = 0; i < n; ++i)
      mus.push_back(n == 1 ? 0.0 : c * i / (n - 1));
  }
  if (mus.empty()) mus = {0.0, 0.5 * c, c};

  ordered_json r;
  r["location"] = to_string(loc);
  r["c"] = tagged(c, Source::Formula);
  r["degenerate"] = degenerate;
  if (!degenerate) {
    const RootInterval br = indicial_interval(prm, loc);
    r["interval"] = {{"lo", sig15(br.lo)},
                     {"hi", sig15(br.hi)},
                     {"increasing", br.increasing}};
    r["extremal_exponent"] = sig15(extremal_exponent(prm, loc));
  }
  ordered_json rows = ordered_json::array();
  for (double mu : mus) {
    RootOptions ro;
    if (mu < -ro.mu_slack || mu > c + ro.mu_slack)
      throw ConfigError("config: indicial mu " + format_sig(mu) +
                        " outside [0, c] for this configuration");
    const double nu = indicial_root(prm, loc, mu);
    rows.push_back({{"mu", sig15(mu)},
                    {"nu", sig15(nu)},
                    {"residual", sig15(lambda_at(prm, loc, nu) - mu)}});
  }
  r["roots"] = rows;
  out.doc.body["results"] = r;
  return out;
}

// ---------------------------------------------------------------------------
// hardy
// ---------------------------------------------------------------------------

inline CommandResult cmd_hardy(const RunConfig& cfg,
                               const CommandOptions& opt = {}) {
  CommandResult out;
  out.doc = report_skeleton("hardy", cfg, opt.timestamp);
  const Params& prm = cfg.params;

  const HardyEstimate est = detail::run_hardy_sweep(cfg);
  detail::check_mesh_constraints(cfg, est.finest_mesh);

  ordered_json r;
  r["estimate"] = detail::extrapolation_json(est.estimate);
  r["finest"] = detail::rayleigh_json(est.finest);

  bool solver_ok = est.finest.converged;
  for (const SweepPoint& s : est.estimate.sweep) solver_ok = solver_ok && s.converged;

  // Exact reference when the domain admits one (cross-check, not a substitute).
  if (const std::optional<double> exact = convexity_shortcut(prm, cfg.domain))
    r["exact_reference"] = tagged(*exact, Source::Formula);
  else if (cfg.domain.kind == DomainKind::Interval && cfg.domain.half_line)
    r["exact_reference"] = tagged(c_const(prm, 1), Source::Formula);

  if (cfg.hardy.refine_levels >= 2) {
    MeshOptions mo;
    mo.elements = cfg.hardy.refine_elements;
    const double span = make_profile(cfg.domain, prm).delta_span();
    if (cfg.domain.bounded()) {
      mo.t_min = span * std::exp(-cfg.mesh.depth0);
    } else {
      mo.t_min = cfg.domain.r0 * std::exp(-cfg.mesh.depth0);
      mo.r_max = cfg.domain.r0 * std::exp(cfg.mesh.depth0);
    }
    const RefinementStudy study =
        refinement_study(cfg.domain, prm, mo, cfg.hardy.refine_levels,
                         detail::solver_options_from(cfg));
    ordered_json vals = ordered_json::array();
    for (const RayleighResult& res : study.results) {
      vals.push_back({{"elements", res.mesh_summary.elements},
                      {"value", sig15(res.value)},
                      {"iterations", res.iterations}});
      solver_ok = solver_ok && res.converged;
    }
    r["refinement"] = {{"values", vals},
                       {"observed_order", sig15(study.observed_order)},
                       {"extrapolated", tagged(study.extrapolated,
                                               Source::Extrapolated)}};
    if (opt.plots) {
      PlotSeries s{"truncated value", {}};
      for (const RayleighResult& res : study.results)
        s.points.emplace_back(res.mesh_summary.elements, res.value);
      PlotOptions po;
      po.title = "refinement convergence, " + format_domain(cfg.domain);
      po.x_label = "elements";
      po.y_label = "quotient minimum";
      po.log_x = true;
      out.doc.artifacts.push_back(
          {"refinement.svg", "image/svg+xml", svg_line_plot({s}, po)});
    }
  }

  if (cfg.hardy.decay_fit) {
    const auto [rlo, rhi] = detail::boundary_decay_window(est.finest_mesh);
    const DecayFit fit = decay_exponent(est.finest_mesh, est.finest.minimizer,
                                        Location::Boundary, rlo, rhi);
    const double h_for_root = std::min(est.estimate.value, c_const(prm, 1));
    ordered_json d;
    d["slope"] = tagged(fit.slope, Source::Computed);
    d["r_squared"] = sig15(fit.r_squared);
    d["points"] = fit.points;
    d["window"] = {sig15(rlo), sig15(rhi)};
    d["nu_predicted"] =
        tagged(indicial_root(prm, Location::Boundary, h_for_root),
               Source::Formula);
    r["decay_boundary"] = d;
    if (!cfg.domain.bounded()) {
      const auto [flo, fhi] = detail::farfield_decay_window(est.finest_mesh);
      const DecayFit far = decay_exponent(est.finest_mesh, est.finest.minimizer,
                                          Location::Infinity, flo, fhi);
      const double h_far = std::min(est.estimate.value, c_min(prm));
      ordered_json dj;
      dj["slope"] = tagged(far.slope, Source::Computed);
      dj["r_squared"] = sig15(far.r_squared);
      dj["points"] = far.points;
      dj["window"] = {sig15(flo), sig15(fhi)};
      dj["nu_predicted"] =
          tagged(indicial_root(prm, Location::Infinity, h_far),
                 Source::Formula);
      r["decay_infinity"] = dj;
    }
  }

  if (opt.plots) {
    PlotSeries prof{"minimizer", {}};
    for (int i = 0; i < est.finest_mesh.size(); ++i)
      prof.points.emplace_back(est.finest_mesh.nodes[i],
                               est.finest.minimizer[i]);
    PlotOptions po;
    po.title = "minimizer profile, " + format_domain(cfg.domain);
    po.x_label = "r";
    po.y_label = "u";
    po.log_x = !cfg.domain.bounded();
    out.doc.artifacts.push_back(
        {"minimizer.svg", "image/svg+xml", svg_line_plot({prof}, po)});

    PlotSeries dec{"u vs delta", {}};
    for (int i = 0; i < est.finest_mesh.size(); ++i) {
      const double d = est.finest_mesh.profile.delta(est.finest_mesh.nodes[i]);
      if (est.finest.minimizer[i] > 0.0)
        dec.points.emplace_back(d, est.finest.minimizer[i]);
    }
    PlotOptions pd;
    pd.title = "boundary decay, " + format_domain(cfg.domain);
    pd.x_label = "delta";
    pd.y_label = "u";
    pd.log_x = pd.log_y = true;
    out.doc.artifacts.push_back(
        {"decay.svg", "image/svg+xml", svg_line_plot({dec}, pd)});
  }

  out.doc.body["results"] = r;
  out.doc.body["notes"].push_back(kRadialCaveat);
  out.exit_code = solver_ok ? kExitOk : kExitSolver;
  return out;
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------

inline CommandResult cmd_gap(const RunConfig& cfg,
                             const CommandOptions& opt = {}) {
  CommandResult out;
  out.doc = report_skeleton("gap", cfg, opt.timestamp);
  const Params& prm = cfg.params;
  const SolverOptions sopt = detail::solver_options_from(cfg);

  GapReport rep = classify(prm, cfg.domain);
  ordered_json r;
  bool solver_ok = true;

  if (rep.h.kind == HKind::PositiveUnknown) {
    const HardyEstimate est = detail::run_hardy_sweep(cfg);
    detail::check_mesh_constraints(cfg, est.finest_mesh);
    solver_ok = est.finest.converged;
    for (const SweepPoint& s : est.estimate.sweep)
      solver_ok = solver_ok && s.converged;
    rep = classify(prm, cfg.domain,
                   NumericH{est.estimate.value, est.estimate.error_estimate});
    r["hardy"] = {{"estimate", detail::extrapolation_json(est.estimate)},
                  {"finest", detail::rayleigh_json(est.finest)}};
  }

  // Collar constants: numeric counterpart of the constant at the boundary /
  // at infinity, converging upward as the collar shrinks.
  const double span = make_profile(cfg.domain, prm).delta_span();
  CollarOptions copt;
  copt.solver = sopt;
  ordered_json collars = ordered_json::array();
  std::vector<double> widths = cfg.collar.widths;
  if (widths.empty()) widths = {0.25 * span, 0.125 * span};
  double min_collar = std::numeric_limits<double>::infinity();
  for (double w : widths) {
    const ExtrapolatedValue cv =
        collar_constant(cfg.domain, prm, CollarSide::Boundary, w, copt);
    collars.push_back({{"width", sig15(w)},
                       {"value", sig15(cv.value)},
                       {"error_estimate", sig15(cv.error_estimate)}});
    min_collar = std::min(min_collar, cv.value);
  }
  r["collar_boundary"] = collars;
  if (!cfg.domain.bounded()) {
    const double cut =
        cfg.collar.tail_cut > 0.0 ? cfg.collar.tail_cut : 2.0 * cfg.domain.r0;
    const ExtrapolatedValue tv =
        collar_constant(cfg.domain, prm, CollarSide::Tail, cut, copt);
    r["collar_tail"] = {{"core_radius", sig15(cut)},
                        {"value", sig15(tv.value)},
                        {"error_estimate", sig15(tv.error_estimate)}};
    min_collar = std::min(min_collar, tv.value);
  }
  r["lambda_inf_check"] = {
      {"formula", tagged(rep.lambda_inf, Source::Formula)},
      {"min_collar", tagged(min_collar, Source::Extrapolated)}};

  r["classification"] = gap_report_json(rep);
  out.doc.body["results"] = r;
  out.doc.body["notes"].push_back(kRadialCaveat);
  out.exit_code = solver_ok ? kExitOk : kExitSolver;
  return out;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline CommandResult cmd_verify(const RunConfig& cfg,
                                const CommandOptions& opt = {}) {
  CommandResult out;
  out.doc = report_skeleton("verify", cfg, opt.timestamp);
  VerifyConfig vc = cfg.verify;
  if (opt.seed_override) vc.seed = *opt.seed_override;
  const std::vector<CheckResult> checks = run_verify(vc);
  int failed = 0;
  ordered_json rows = ordered_json::array();
  for (const CheckResult& c : checks) {
    if (!c.pass) ++failed;
    rows.push_back({{"suite", c.suite},
                    {"name", c.name},
                    {"pass", c.pass},
                    {"detail", c.detail},
                    {"basis", c.basis}});
  }
  out.doc.body["results"] = {{"checks", rows},
                             {"total", static_cast<int>(checks.size())},
                             {"failed", failed},
                             {"seed", vc.seed},
                             {"samples", vc.samples}};
  out.exit_code = failed == 0 ? kExitOk : kExitVerify;
  return out;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

namespace detail {

inline SweepRow sweep_row(const RunConfig& cfg, double alpha, double p) {
  RunConfig row_cfg = cfg;
  row_cfg.params.alpha = alpha;
  row_cfg.params.p = p;
  const Params prm = row_cfg.params;
  validate(prm);

  GapReport rep = classify(prm, cfg.domain);
  SweepRow row;
  row.params = prm;
  row.domain = cfg.domain;
  row.regime = to_string(rep.regime);
  if (rep.h.kind == HKind::PositiveUnknown) {
    const HardyEstimate est = run_hardy_sweep(row_cfg);
    rep = classify(prm, cfg.domain,
                   NumericH{est.estimate.value, est.estimate.error_estimate});
    row.iterations = est.finest.iterations;
    row.error_estimate = est.estimate.error_estimate;
  }
  row.h_bound = rep.h.value;
  row.lambda_inf = rep.lambda_inf;
  row.gap = rep.gap_estimate;
  row.nu = rep.nu_boundary;
  row.nu_tilde = rep.nu_infinity;
  return row;
}

}  // namespace detail

inline CommandResult cmd_sweep(const RunConfig& cfg,
                               const CommandOptions& opt = {}) {
  CommandResult out;
  out.doc = report_skeleton("sweep", cfg, opt.timestamp);

  std::vector<std::pair<double, double>> grid;
  for (double a : cfg.sweep.alpha)
    for (double p : cfg.sweep.p) grid.emplace_back(a, p);

  std::vector<SweepRow> rows(grid.size());
  std::vector<std::string> errors(grid.size());
  const int jobs =
      std::max(1, std::min<int>(opt.jobs, static_cast<int>(grid.size())));
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i; (i = next.fetch_add(1)) < grid.size();) {
      try {
        rows[i] = detail::sweep_row(cfg, grid[i].first, grid[i].second);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("sweep: grid point (alpha=" +
                               format_sig(grid[i].first) + ", p=" +
                               format_sig(grid[i].second) + ") failed: " +
                               errors[i]);

  ordered_json rj = ordered_json::array();
  for (const SweepRow& row : rows) {
    ordered_json e;
    e["alpha"] = sig15(row.params.alpha);
    e["p"] = sig15(row.params.p);
    e["regime"] = row.regime;
    e["H_bound"] = sig15(row.h_bound);
    e["lambda_inf"] = sig15(row.lambda_inf);
    e["gap"] = sig15(row.gap);
    if (row.nu) e["nu"] = sig15(*row.nu);
    if (row.nu_tilde) e["nu_tilde"] = sig15(*row.nu_tilde);
    e["iterations"] = row.iterations;
    e["error_estimate"] = sig15(row.error_estimate);
    rj.push_back(e);
  }
  out.doc.body["results"] = {{"rows", rj},
                             {"count", static_cast<int>(rows.size())}};
  if (!rows.empty()) out.doc.body["notes"].push_back(kRadialCaveat);
  out.doc.artifacts.push_back({"sweep.csv", "text/csv", sweep_csv(rows)});

  if (opt.plots && !rows.empty()) {
    // One H-vs-alpha curve per p value.
    std::vector<PlotSeries> series;
    for (double p : cfg.sweep.p) {
      PlotSeries s{"p=" + format_sig(p), {}};
      for (const SweepRow& row : rows)
        if (row.params.p == p) s.points.emplace_back(row.params.alpha, row.h_bound);
      series.push_back(std::move(s));
    }
    PlotOptions po;
    po.title = "Hardy bound over the parameter grid, " +
               format_domain(cfg.domain);
    po.x_label = "alpha";
    po.y_label = "H bound";
    out.doc.artifacts.push_back(
        {"sweep.svg", "image/svg+xml", svg_line_plot(series, po)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flat CSV rendering of a report (used by --format csv for non-sweep output).
// ---------------------------------------------------------------------------

namespace detail {

inline void flatten_json(const ordered_json& j, const std::string& prefix,
                         std::string& out) {
  if (j.is_object()) {
    for (const auto& item : j.items())
      flatten_json(item.value(),
                   prefix.empty() ? item.key() : prefix + "." + item.key(), out);
  } else if (j.is_array()) {
    size_t i = 0;
    for (const auto& v : j) flatten_json(v, prefix + "[" + std::to_string(i++) + "]", out);
  } else {
    out += prefix;
    out += ',';
    if (j.is_number_float())
      out += format_sig(j.get<double>());
    else
      out += j.dump();
    out += '\n';
  }
}

}  // namespace detail

inline std::string report_csv(const ReportDocument& doc) {
  std::string out = "key,value\n";
  if (doc.body.contains("results"))
    detail::flatten_json(doc.body.at("results"), "results", out);
  return out;
}

}  // namespace hardygap
