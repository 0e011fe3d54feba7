#pragma once
// Estimation drivers built on the quotient minimizer: truncation sweeps with
// extrapolation to the untruncated limit, collar constants (whose shrinking
// limit is the constant at the boundary / at infinity), minimizer decay-rate
// fits, and mesh-refinement studies.
//
// Truncated constants on these problems behave like value(L) = limit + C/L^2
// with L the logarithmic depth of the truncation (log(scale/t_min), resp.
// log(r_max/scale)); the reported number is the intercept of a least-squares
// fit in x = L^-2 over a sweep of depths, with the raw sweep retained.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardygap/mesh.hpp"
#include "hardygap/params.hpp"
#include "hardygap/profile.hpp"
#include "hardygap/rayleigh.hpp"

namespace hardygap {

// ---------------------------------------------------------------------------
// Truncation-sweep extrapolation.
// ---------------------------------------------------------------------------

struct SweepPoint {
  double L = 0.0;      ///< logarithmic truncation depth
  double t_min = 0.0;  ///< inner cutoff used
  double r_max = 0.0;  ///< outer cutoff used
  double value = 0.0;  ///< raw truncated constant
  bool converged = true;
  int iterations = 0;
};

struct ExtrapolatedValue {
  double value = 0.0;           ///< headline estimate (clamped nonnegative)
  double error_estimate = 0.0;  ///< max(2x fit rms, model-form spread)
  double intercept_linear = 0.0;
  double intercept_extended = 0.0;  ///< with L^-3 basis term (>= 5 points)
  bool used_extended = false;
  double fit_rms = 0.0;
  std::vector<SweepPoint> sweep;
};

namespace detail {

/// Least-squares fit of y against the first nb of the basis {1, x, x^1.5};
/// returns the coefficients (tiny systems, Gaussian elimination with pivoting).
inline std::array<double, 3> lsq_power_fit(const std::vector<double>& x,
                                           const std::vector<double>& y, int nb) {
  std::array<std::array<double, 4>, 3> M{};
  auto basis = [](double xi, int j) {
    return j == 0 ? 1.0 : (j == 1 ? xi : xi * std::sqrt(xi));
  };
  for (size_t i = 0; i < x.size(); ++i)
    for (int a = 0; a < nb; ++a) {
      for (int b = 0; b < nb; ++b) M[a][b] += basis(x[i], a) * basis(x[i], b);
      M[a][3] += basis(x[i], a) * y[i];
    }
  for (int c = 0; c < nb; ++c) {  // elimination
    int piv = c;
    for (int r = c + 1; r < nb; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    std::swap(M[c], M[piv]);
    if (M[c][c] == 0.0) throw std::runtime_error("degenerate truncation fit");
    for (int r = 0; r < nb; ++r) {
      if (r == c) continue;
      const double fct = M[r][c] / M[c][c];
      for (int k = c; k < 4; ++k) M[r][k] -= fct * M[c][k];
    }
  }
  std::array<double, 3> coef{0.0, 0.0, 0.0};
  for (int c = 0; c < nb; ++c) coef[c] = M[c][3] / M[c][c];
  return coef;
}

/// Warm-start guess for the next sweep level: the previous minimizer
/// transported onto the new mesh, plus a small tent admixture.  Regions the
/// previous (smaller) truncation did not cover enter the transport as zeros,
/// and a truncated-support iterate sits near a spurious critical point of the
/// extended problem; the admixture gives every admissible node mass so the
/// solver cannot be cornered there.
inline GridFn transport_guess(const GradedMesh& mesh, const GradedMesh& prev_mesh,
                              const GridFn& prev) {
  GridFn init = interpolate(
      mesh, [&](double r) { return eval_linear(prev_mesh, prev, r); });
  const WindowRange w = default_window(mesh);
  const GridFn tent = tent_init(mesh, w);
  double peak = 0.0;
  for (double v : init) peak = std::max(peak, std::abs(v));
  for (int i = w.i0; i <= w.i1; ++i) init[i] += 0.02 * peak * tent[i];
  return init;
}

}  // namespace detail

/// Fits value(L) = limit + C/L^2 (+ D/L^3 when at least 5 sweep points are
/// available) and reports the intercept; negative intercepts are clamped to
/// zero with the clamp magnitude absorbed into the error estimate.
inline ExtrapolatedValue fit_truncation_limit(std::vector<SweepPoint> sweep) {
  if (sweep.size() < 2)
    throw std::invalid_argument("fit_truncation_limit: need at least 2 sweep points");
  ExtrapolatedValue out;
  std::vector<double> x, y;
  for (const auto& s : sweep) {
    if (!(s.L > 0.0))
      throw std::invalid_argument("fit_truncation_limit: depths must be positive");
    x.push_back(1.0 / (s.L * s.L));
    y.push_back(s.value);
  }
  const auto lin = detail::lsq_power_fit(x, y, 2);
  out.intercept_linear = lin[0];
  out.used_extended = sweep.size() >= 5;
  std::array<double, 3> coef = lin;
  if (out.used_extended) {
    coef = detail::lsq_power_fit(x, y, 3);
    out.intercept_extended = coef[0];
  }
  const double raw = out.used_extended ? out.intercept_extended : out.intercept_linear;

  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double fit = coef[0] + coef[1] * x[i] +
                       (out.used_extended ? coef[2] * x[i] * std::sqrt(x[i]) : 0.0);
    ss += (y[i] - fit) * (y[i] - fit);
  }
  out.fit_rms = std::sqrt(ss / x.size());

  out.value = std::max(raw, 0.0);
  out.error_estimate = 2.0 * out.fit_rms;
  if (out.used_extended)
    out.error_estimate = std::max(out.error_estimate,
                                  std::abs(out.intercept_extended - out.intercept_linear));
  if (raw < 0.0) out.error_estimate = std::max(out.error_estimate, -raw);
  out.sweep = std::move(sweep);
  return out;
}

// ---------------------------------------------------------------------------
// Hardy-constant estimation.
// ---------------------------------------------------------------------------

struct HardyOptions {
  int elements = 2048;
  int levels = 6;      ///< sweep length
  double L0 = 6.0;     ///< first truncation depth
  double dL = 2.0;     ///< depth increment
  SolverOptions solver{};
};

struct HardyEstimate {
  ExtrapolatedValue estimate;
  RayleighResult finest;   ///< result at the deepest truncation
  GradedMesh finest_mesh;  ///< its mesh (for decay windows and plots)
};

/// Sweeps the truncation depth and extrapolates the quotient minimum.  For
/// bounded domains the inner cutoff is t_min = span * e^-L; for exterior
/// domains both cutoffs are tied to one depth, t_min = R e^-L and
/// r_max = R e^L, so a single 1/L^2 model covers both truncation effects.
/// Values are radial upper bounds for the Hardy constant (see classifier
/// notes); on the domains with a pinned constant they are tight in the limit.
inline HardyEstimate hardy_estimate(const DomainSpec& spec, const Params& prm,
                                    const HardyOptions& opt = {}) {
  validate(spec);
  validate(prm);
  if (opt.levels < 2)
    throw std::invalid_argument("hardy_estimate: need at least 2 sweep levels");
  HardyEstimate out;
  std::vector<SweepPoint> sweep;
  const double span = make_profile(spec, prm).delta_span();
  GridFn prev;  // previous level's minimizer, warm-starting the next level
  GradedMesh prev_mesh;
  for (int k = 0; k < opt.levels; ++k) {
    const double L = opt.L0 + k * opt.dL;
    MeshOptions mo;
    mo.elements = opt.elements;
    if (spec.bounded()) {
      mo.t_min = span * std::exp(-L);
    } else {
      mo.t_min = spec.r0 * std::exp(-L);
      mo.r_max = spec.r0 * std::exp(L);
    }
    const GradedMesh mesh = build_mesh(spec, prm, mo);
    GridFn init;
    if (!prev.empty()) init = detail::transport_guess(mesh, prev_mesh, prev);
    RayleighResult res = minimize_quotient(mesh, prm, opt.solver,
                                           prev.empty() ? nullptr : &init);
    sweep.push_back({L, mo.t_min, mesh.r_max, res.value, res.converged,
                     res.iterations});
    if (k + 1 == opt.levels) {
      out.finest = std::move(res);
      out.finest_mesh = mesh;
    } else {
      prev = std::move(res.minimizer);
      prev_mesh = mesh;
    }
  }
  out.estimate = fit_truncation_limit(std::move(sweep));
  return out;
}

/// Sweep over an explicit inner-cutoff sequence (paired with outer cutoffs on
/// exterior domains; when r_max_seq is empty the outer cutoff is tied to the
/// same depth).  Depths are derived from the cutoffs for the 1/L^2 fit.
inline HardyEstimate hardy_estimate(const DomainSpec& spec, const Params& prm,
                                    const std::vector<double>& t_min_seq,
                                    const std::vector<double>& r_max_seq,
                                    int elements, const SolverOptions& sopt = {}) {
  validate(spec);
  validate(prm);
  if (t_min_seq.size() < 2)
    throw std::invalid_argument("hardy_estimate: need at least 2 cutoffs");
  if (!r_max_seq.empty() && r_max_seq.size() != t_min_seq.size())
    throw std::invalid_argument("hardy_estimate: cutoff sequences must pair up");
  HardyEstimate out;
  std::vector<SweepPoint> sweep;
  const double span = make_profile(spec, prm).delta_span();
  GridFn prev;  // previous level's minimizer, warm-starting the next level
  GradedMesh prev_mesh;
  for (size_t k = 0; k < t_min_seq.size(); ++k) {
    MeshOptions mo;
    mo.elements = elements;
    mo.t_min = t_min_seq[k];
    double L = 0.0;
    if (spec.bounded()) {
      L = std::log(span / mo.t_min);
    } else {
      const double L_in = std::log(spec.r0 / mo.t_min);
      mo.r_max = r_max_seq.empty() ? spec.r0 * std::exp(L_in) : r_max_seq[k];
      L = std::min(L_in, std::log(mo.r_max / spec.r0));
    }
    if (!(L > 1.0))
      throw std::invalid_argument(
          "hardy_estimate: cutoff too shallow for extrapolation (depth <= 1)");
    const GradedMesh mesh = build_mesh(spec, prm, mo);
    GridFn init;
    if (!prev.empty()) init = detail::transport_guess(mesh, prev_mesh, prev);
    RayleighResult res = minimize_quotient(mesh, prm, sopt,
                                           prev.empty() ? nullptr : &init);
    sweep.push_back({L, mo.t_min, mesh.r_max, res.value, res.converged,
                     res.iterations});
    if (k + 1 == t_min_seq.size()) {
      out.finest = std::move(res);
      out.finest_mesh = mesh;
    } else {
      prev = std::move(res.minimizer);
      prev_mesh = mesh;
    }
  }
  std::sort(sweep.begin(), sweep.end(),
            [](const SweepPoint& a, const SweepPoint& b) { return a.L < b.L; });
  out.estimate = fit_truncation_limit(std::move(sweep));
  return out;
}

// ---------------------------------------------------------------------------
// Collar constants.
// ---------------------------------------------------------------------------

enum class CollarSide {
  Boundary,  ///< functions supported in {delta < cut}
  Tail       ///< functions supported in {r > cut} (exterior only)
};

/// Free-node windows realizing the collar-restricted admissible space on an
/// existing mesh: one contiguous run per collar component, shrunk by one node
/// at each bulk-facing end so supports stay inside the collar.
inline std::vector<WindowRange> collar_windows(const GradedMesh& mesh,
                                               CollarSide side, double cut) {
  const DistanceProfile& prof = mesh.profile;
  const int n = mesh.size();
  std::vector<char> in(n, 0);
  if (side == CollarSide::Boundary) {
    if (!(cut > 0.0) || !(cut < prof.delta_span()))
      throw std::invalid_argument("collar_windows: width must lie in (0, max delta)");
    for (int i = 0; i < n; ++i) in[i] = prof.delta(mesh.nodes[i]) < cut;
  } else {
    if (prof.spec.kind != DomainKind::ExteriorBall)
      throw std::invalid_argument("collar_windows: tail collars need an exterior domain");
    if (!(cut > prof.spec.r0) || !(cut < mesh.r_max))
      throw std::invalid_argument("collar_windows: core radius must lie in (R, r_max)");
    for (int i = 0; i < n; ++i) in[i] = mesh.nodes[i] > cut;
  }
  const auto base = mesh.free_mask();
  for (int i = 0; i < n; ++i) in[i] = in[i] && base[i];

  std::vector<WindowRange> runs;
  for (int i = 0; i < n;) {
    if (!in[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && in[j + 1]) ++j;
    WindowRange w{i, j};
    // Shrink ends that face free bulk nodes (the other ends sit against
    // truncation nodes and are already conforming).
    if (w.i0 > 0 && base[w.i0 - 1] && !in[w.i0 - 1]) ++w.i0;
    if (w.i1 + 1 < n && base[w.i1 + 1] && !in[w.i1 + 1]) --w.i1;
    if (w.size() < 8)
      throw std::runtime_error(
          "collar too thin for the mesh (fewer than 8 interior nodes)");
    runs.push_back(w);
    i = j + 1;
  }
  if (runs.empty()) throw std::runtime_error("collar contains no free nodes");
  return runs;
}

/// Raw collar constant on one mesh: the minimum of the window-restricted
/// quotient minima over the collar components (disjoint supports, so the
/// infimum over the union is the min over components).
inline double collar_constant_raw(const GradedMesh& mesh, const EnergyForms& forms,
                                  CollarSide side, double cut,
                                  const SolverOptions& sopt = {}) {
  double best = std::numeric_limits<double>::infinity();
  for (const WindowRange& w : collar_windows(mesh, side, cut))
    best = std::min(best, minimize_quotient(mesh, forms, sopt, w).value);
  return best;
}

struct CollarOptions {
  int elements = 1024;
  int levels = 5;
  double L0 = 5.0;
  double dL = 1.5;
  double bulk_L = 6.0;  ///< fixed depth of the non-swept truncation (exterior)
  SolverOptions solver{};
};

/// Collar constant with the residual truncation extrapolated away: sweeps the
/// depth of the truncation inside the collar (t_min below a boundary collar,
/// r_max beyond a tail core) and fits the 1/L^2 model.
inline ExtrapolatedValue collar_constant(const DomainSpec& spec, const Params& prm,
                                         CollarSide side, double cut,
                                         const CollarOptions& opt = {}) {
  validate(spec);
  validate(prm);
  std::vector<SweepPoint> sweep;
  for (int k = 0; k < opt.levels; ++k) {
    const double L = opt.L0 + k * opt.dL;
    MeshOptions mo;
    mo.elements = opt.elements;
    if (side == CollarSide::Boundary) {
      mo.t_min = cut * std::exp(-L);
      if (!spec.bounded()) mo.r_max = spec.r0 * std::exp(opt.bulk_L);
    } else {
      mo.t_min = spec.r0 * std::exp(-opt.bulk_L);
      mo.r_max = cut * std::exp(L);
    }
    const GradedMesh mesh = build_mesh(spec, prm, mo);
    const EnergyForms forms = assemble_energies(mesh, prm);
    const double v = collar_constant_raw(mesh, forms, side, cut, opt.solver);
    sweep.push_back({L, mo.t_min, mesh.r_max, v, true, 0});
  }
  return fit_truncation_limit(std::move(sweep));
}

// ---------------------------------------------------------------------------
// Decay-exponent fit.
// ---------------------------------------------------------------------------

struct DecayFit {
  double slope = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least-squares slope of log u against log delta (Boundary) or log r
/// (Infinity) over the nodes with radius in [r_lo, r_hi].  The minimizer must
/// be strictly positive there.
inline DecayFit decay_exponent(const GradedMesh& mesh, const GridFn& u,
                               Location loc, double r_lo, double r_hi) {
  if (u.size() != mesh.nodes.size())
    throw std::invalid_argument("decay_exponent: size mismatch");
  if (loc == Location::Infinity &&
      mesh.profile.spec.kind != DomainKind::ExteriorBall)
    throw std::invalid_argument("decay_exponent: far-field fit needs an exterior domain");
  std::vector<double> X, Y;
  for (int i = 0; i < mesh.size(); ++i) {
    const double r = mesh.nodes[i];
    if (r < r_lo || r > r_hi) continue;
    const double x = (loc == Location::Boundary) ? mesh.profile.delta(r) : r;
    if (!(u[i] > 0.0))
      throw std::domain_error("decay_exponent: minimizer not positive on the window");
    X.push_back(std::log(x));
    Y.push_back(std::log(u[i]));
  }
  if (X.size() < 3)
    throw std::invalid_argument("decay_exponent: window holds fewer than 3 nodes");
  const double n = static_cast<double>(X.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < X.size(); ++i) {
    sx += X[i];
    sy += Y[i];
    sxx += X[i] * X[i];
    sxy += X[i] * Y[i];
    syy += Y[i] * Y[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (!(vx > 0.0))
    throw std::invalid_argument("decay_exponent: degenerate abscissae");
  DecayFit fit;
  fit.slope = cxy / vx;
  fit.r_squared = (vy > 0.0) ? (cxy * cxy) / (vx * vy) : 1.0;
  fit.points = static_cast<int>(X.size());
  return fit;
}

// ---------------------------------------------------------------------------
// Refinement study.
// ---------------------------------------------------------------------------

struct RefinementStudy {
  std::vector<RayleighResult> results;
  double observed_order = 0.0;  ///< log2 of successive decrement ratios
  double extrapolated = 0.0;    ///< Aitken limit from the last three values
};

/// Solves on nested bisection refinements of one mesh.  Values are
/// nonincreasing (conforming subspace chain); the limit is estimated from the
/// last three values assuming geometric decrements.
inline RefinementStudy refinement_study(const DomainSpec& spec, const Params& prm,
                                        const MeshOptions& base, int levels,
                                        const SolverOptions& sopt = {}) {
  if (levels < 2)
    throw std::invalid_argument("refinement_study: need at least 2 levels");
  RefinementStudy study;
  GradedMesh mesh = build_mesh(spec, prm, base);
  GridFn init;
  for (int k = 0; k < levels; ++k) {
    study.results.push_back(
        minimize_quotient(mesh, prm, sopt, init.empty() ? nullptr : &init));
    if (k + 1 < levels) {
      // Nested refinement: transporting the minimizer is an exact injection
      // of the piecewise-linear function into the finer space.
      const GradedMesh fine = refine(mesh);
      const GridFn& u = study.results.back().minimizer;
      init = interpolate(fine,
                         [&](double r) { return eval_linear(mesh, u, r); });
      mesh = fine;
    }
  }
  const size_t n = study.results.size();
  study.extrapolated = study.results.back().value;
  if (n >= 3) {
    const double v0 = study.results[n - 3].value;
    const double v1 = study.results[n - 2].value;
    const double v2 = study.results[n - 1].value;
    const double d1 = v0 - v1, d2 = v1 - v2;
    if (d1 > 0.0 && d2 > 0.0 && d1 > d2) {
      study.observed_order = std::log2(d1 / d2);
      study.extrapolated = v2 - d2 * d2 / (d1 - d2);
    }
  }
  return study;
}

}  // namespace hardygap
