#pragma once
// Pointwise radial calculus: the weighted p-Laplacian of radial profiles, the
// eigenvalue-equation residual, composition (chain-rule) spot checks,
// sub/supersolution sign verification for power-pair candidates, the exact
// power-test-function quotient, and the boundary integrability probe.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardygap/indicial.hpp"
#include "hardygap/profile.hpp"
#include "hardygap/quadrature.hpp"

namespace hardygap {

/// A radial profile r -> f(r), optionally with analytic derivatives.  When df
/// and d2f are absent, derivatives fall back to O(h^2) central differences.
struct RadialFn {
  std::function<double(double)> f;
  std::function<double(double)> df;   // optional
  std::function<double(double)> d2f;  // optional

  bool analytic() const { return static_cast<bool>(df) && static_cast<bool>(d2f); }
};

/// delta(r)^nu with analytic derivatives (valid away from kink radii).
inline RadialFn power_of_delta(const DistanceProfile& profile, double nu) {
  return RadialFn{
      [profile, nu](double r) { return std::pow(profile.delta(r), nu); },
      [profile, nu](double r) {
        return nu * std::pow(profile.delta(r), nu - 1.0) * profile.ddelta(r);
      },
      [profile, nu](double r) {
        // delta'' = 0 piecewise, so only the square of delta' survives.
        return nu * (nu - 1.0) * std::pow(profile.delta(r), nu - 2.0);
      }};
}

inline RadialFn power_of_r(double nu) {
  return RadialFn{[nu](double r) { return std::pow(r, nu); },
                  [nu](double r) { return nu * std::pow(r, nu - 1.0); },
                  [nu](double r) { return nu * (nu - 1.0) * std::pow(r, nu - 2.0); }};
}

/// first + sign * second, derivatives combined analytically when both have them.
inline RadialFn combine(const RadialFn& a, const RadialFn& b, double sign) {
  RadialFn out;
  out.f = [=](double r) { return a.f(r) + sign * b.f(r); };
  if (a.analytic() && b.analytic()) {
    out.df = [=](double r) { return a.df(r) + sign * b.df(r); };
    out.d2f = [=](double r) { return a.d2f(r) + sign * b.d2f(r); };
  }
  return out;
}

struct FdOptions {
  double h_scale = 1e-4;  ///< step = h_scale * max(delta(r), 1)
};

namespace detail {

inline double central_diff(const std::function<double(double)>& f, double r, double h) {
  return (f(r + h) - f(r - h)) / (2.0 * h);
}

inline void reject_near_kink(const DistanceProfile& profile, double r, double reach) {
  for (double k : profile.kink_radii)
    if (std::abs(r - k) <= reach)
      throw std::domain_error("radial calculus: evaluation window touches a kink radius");
}

/// +1 when the domain lies at larger radii than the singular boundary rb,
/// -1 when it lies at smaller radii.
inline double boundary_orientation(const DistanceProfile& profile, double rb) {
  return (rb == profile.lo) ? 1.0 : -1.0;
}

}  // namespace detail

/// Weighted p-Laplacian div(delta^(-alpha) |f'|^(p-2) f') of a radial profile
/// at radius r, i.e. r^(1-N) (r^(N-1) delta^(-alpha) |f'|^(p-2) f')'.
/// Analytic route (f carries derivatives): expand the flux derivative by the
/// product rule.  Otherwise: O(h^2) central difference of the flux.
inline double radial_alpha_p_laplacian(const DistanceProfile& profile,
                                       const Params& prm, const RadialFn& fn,
                                       double r, FdOptions opt = {}) {
  if (!profile.contains(r))
    throw std::domain_error("radial_alpha_p_laplacian: r outside the domain");
  const double h = opt.h_scale * std::max(profile.delta(r), 1.0);
  detail::reject_near_kink(profile, r, fn.analytic() ? 0.0 : 2.0 * h);

  const double d = profile.delta(r);
  const double wexp = profile.weight_exponent;

  if (fn.analytic()) {
    const double dd = profile.ddelta(r);
    const double fp = fn.df(r), fpp = fn.d2f(r);
    if (fp == 0.0 && prm.p < 2.0)
      throw std::domain_error(
          "radial_alpha_p_laplacian: degenerate gradient point for p < 2");
    const double ip = signed_power(fp, prm.p - 1.0);  // |f'|^{p-2} f'
    const double ipd = (fp == 0.0 && prm.p > 2.0)
                           ? 0.0
                           : std::pow(std::abs(fp), prm.p - 2.0) * fpp;
    double bracket = (prm.p - 1.0) * ipd - prm.alpha * (dd / d) * ip;
    if (wexp != 0.0) bracket += (wexp / r) * ip;
    return std::pow(d, -prm.alpha) * bracket;
  }

  // Finite-difference route: differentiate the flux directly.
  if (!profile.contains(r - 2.0 * h) || !profile.contains(r + 2.0 * h))
    throw std::domain_error(
        "radial_alpha_p_laplacian: difference stencil leaves the domain");
  auto fprime = [&](double x) { return detail::central_diff(fn.f, x, h); };
  auto flux = [&](double x) {
    const double fp = fprime(x);
    if (fp == 0.0 && prm.p < 2.0)
      throw std::domain_error(
          "radial_alpha_p_laplacian: degenerate gradient point for p < 2");
    return profile.weight(x) * std::pow(profile.delta(x), -prm.alpha) *
           signed_power(fp, prm.p - 1.0);
  };
  return detail::central_diff(flux, r, h) / profile.weight(r);
}

/// Residual of the eigenvalue equation at radius r:
///   -Lap_{alpha,p} f - lambda delta^(-(alpha+p)) |f|^(p-2) f.
/// Zero for exact solutions (power profiles at their indicial value).
inline double residual(const DistanceProfile& profile, const Params& prm,
                       const RadialFn& fn, double lambda, double r,
                       FdOptions opt = {}) {
  const double lap = radial_alpha_p_laplacian(profile, prm, fn, r, opt);
  const double pot = lambda * std::pow(profile.delta(r), -(prm.alpha + prm.p)) *
                     signed_power(fn.f(r), prm.p - 1.0);
  return -lap - pot;
}

// ---------------------------------------------------------------------------
// Chain-rule spot check.
//
// For smooth compositions the weighted p-Laplacian satisfies
//   Lap(F(u)) = |F'(u)|^(p-2) [ F'(u) Lap(u)
//                               + (p-1) F''(u) delta^(-alpha) |u'|^p ].
// Both sides are evaluated by finite differences with u = delta and
// F(t) = t^nu; the defect must vanish to O(h^2).
// ---------------------------------------------------------------------------

/// Max defect over the grid radii at finite-difference step scale h_scale.
inline double chain_rule_check(const DistanceProfile& profile, const Params& prm,
                               double nu, const std::vector<double>& radii,
                               double h_scale = 1e-4) {
  FdOptions opt{h_scale};
  // Value-only profiles: all derivatives on both sides come from differences.
  RadialFn u{[&profile](double r) { return profile.delta(r); }, nullptr, nullptr};
  RadialFn composite{
      [&profile, nu](double r) { return std::pow(profile.delta(r), nu); }, nullptr,
      nullptr};
  double worst = 0.0;
  for (double r : radii) {
    const double h = h_scale * std::max(profile.delta(r), 1.0);
    detail::reject_near_kink(profile, r, 2.0 * h);
    const double lhs = radial_alpha_p_laplacian(profile, prm, composite, r, opt);

    const double uval = profile.delta(r);
    const double up = detail::central_diff(u.f, r, h);
    const double Fp = nu * std::pow(uval, nu - 1.0);
    const double Fpp = nu * (nu - 1.0) * std::pow(uval, nu - 2.0);
    const double lap_u = radial_alpha_p_laplacian(profile, prm, u, r, opt);
    const double rhs = std::pow(std::abs(Fp), prm.p - 2.0) *
                       (Fp * lap_u + (prm.p - 1.0) * Fpp * std::pow(uval, -prm.alpha) *
                                         std::pow(std::abs(up), prm.p));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Sub/supersolution sign checks for power-pair candidates.
// ---------------------------------------------------------------------------

enum class Branch { Plus, Minus };

struct SignCheckOptions {
  int samples = 400;
  bool enforce_hypothesis = true;
  double rel_slack = 1e-11;  ///< rounding slack relative to the local term size
};

struct SignCheckReport {
  bool hypothesis_ok = true;
  std::string hypothesis_violation;
  double lambda_used = 0.0;
  double min_residual = 0.0;
  double max_residual = 0.0;
  bool sign_ok = false;  ///< expected sign at every sample of the window
  /// Boundary: largest delta t* such that the sign holds at all samples with
  /// delta <= t* (0 when even the innermost sample fails).  Infinity: smallest
  /// sampled radius R* such that the sign holds at all samples >= R* (+inf
  /// when even the outermost sample fails).
  double uniform_threshold = 0.0;
};

/// Residual-sign verification for U = delta^nu +- delta^beta near the boundary
/// (lambda = lambda_boundary(nu)), or U = r^nu +- r^beta in the far field
/// (lambda = lambda_infinity(nu)).  Plus candidates must be subsolutions
/// (residual <= 0), Minus candidates positive supersolutions (residual >= 0).
/// The window is in delta for Boundary, in r for Infinity; samples are placed
/// geometrically.  A Minus candidate that is positive nowhere in the window
/// is rejected outright (domain_error); isolated non-positive samples merely
/// fail the check there (detection loops scan windows until positivity and
/// the sign both hold).  Samples sitting on the domain boundary itself
/// (delta = 0), where the residual is undefined, fail the check as well.
/// An exponent-hypothesis violation is an error unless enforcement is
/// switched off (useful for demonstrating that corrupted exponents flip the
/// sign).
inline SignCheckReport subsupersolution_sign_check(
    const DistanceProfile& profile, const Params& prm, Location loc, double nu,
    double beta, Branch branch, double window_lo, double window_hi,
    SignCheckOptions opt = {}) {
  validate(prm);
  if (!(window_lo > 0.0) || !(window_hi > window_lo))
    throw std::invalid_argument("subsupersolution_sign_check: bad window");
  if (loc == Location::Infinity && profile.spec.kind != DomainKind::ExteriorBall)
    throw std::invalid_argument(
        "subsupersolution_sign_check: far-field checks need an exterior domain");

  SignCheckReport report;
  // Hypotheses under which the construction is proved: Boundary needs
  // nu < beta < nu+1 with both exponents inside the monotone bracket;
  // Infinity needs beta < nu < beta+1 with nu inside the bracket.
  auto check_hyp = [&]() -> std::string {
    if (indicial_degenerate(prm, loc)) return "degenerate bracket";
    const RootInterval br = indicial_interval(prm, loc);
    if (nu < br.lo || nu > br.hi) return "nu outside the monotone bracket";
    if (loc == Location::Boundary) {
      if (!(nu < beta && beta < nu + 1.0)) return "need nu < beta < nu + 1";
      if (beta < br.lo || beta > br.hi) return "beta outside the monotone bracket";
    } else {
      if (!(beta < nu && nu < beta + 1.0)) return "need beta < nu < beta + 1";
    }
    return "";
  };
  report.hypothesis_violation = check_hyp();
  report.hypothesis_ok = report.hypothesis_violation.empty();
  if (!report.hypothesis_ok && opt.enforce_hypothesis)
    throw std::domain_error("subsupersolution_sign_check: " +
                            report.hypothesis_violation);

  const double sign = (branch == Branch::Plus) ? 1.0 : -1.0;
  const RadialFn cand = (loc == Location::Boundary)
                            ? combine(power_of_delta(profile, nu),
                                      power_of_delta(profile, beta), sign)
                            : combine(power_of_r(nu), power_of_r(beta), sign);
  const double lambda = lambda_at(prm, loc, nu);
  report.lambda_used = lambda;

  // Geometric sample placement over the window (delta values near the first
  // singular boundary, or radii in the far field).
  const int n = std::max(opt.samples, 16);
  const double lw = std::log(window_lo), hw = std::log(window_hi);
  std::vector<double> radii(n);
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(lw + (hw - lw) * i / (n - 1.0));
    if (loc == Location::Boundary) {
      const double rb = profile.singular_radii().front();
      radii[i] = rb + detail::boundary_orientation(profile, rb) * v;
    } else {
      radii[i] = v;
    }
  }

  if (branch == Branch::Minus &&
      std::none_of(radii.begin(), radii.end(),
                   [&](double r) { return cand.f(r) > 0.0; }))
    throw std::domain_error(
        "subsupersolution_sign_check: Minus candidate positive nowhere in the "
        "window");

  report.min_residual = std::numeric_limits<double>::infinity();
  report.max_residual = -std::numeric_limits<double>::infinity();
  std::vector<bool> ok(n);
  for (int i = 0; i < n; ++i) {
    const double r = radii[i];
    const double d = profile.delta(r);
    if (!(d > 0.0)) continue;  // boundary sample: residual undefined, ok stays false
    const double uval = cand.f(r);
    const bool positive = (branch == Branch::Plus) || (uval > 0.0);
    const double res = residual(profile, prm, cand, lambda, r);
    report.min_residual = std::min(report.min_residual, res);
    report.max_residual = std::max(report.max_residual, res);
    // Slack proportional to the size of the terms being cancelled.
    const double scale =
        std::abs(lambda) * std::pow(d, -(prm.alpha + prm.p)) *
            std::pow(std::abs(uval), prm.p - 1.0) +
        std::numeric_limits<double>::min();
    ok[i] = positive && ((branch == Branch::Plus) ? (res <= opt.rel_slack * scale)
                                                  : (res >= -opt.rel_slack * scale));
  }
  report.sign_ok = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });

  if (loc == Location::Boundary) {
    // Samples are ordered by increasing delta; take the largest prefix that holds.
    report.uniform_threshold = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!ok[i]) break;
      report.uniform_threshold = std::exp(lw + (hw - lw) * i / (n - 1.0));
    }
  } else {
    report.uniform_threshold = std::numeric_limits<double>::infinity();
    for (int i = n - 1; i >= 0; --i) {
      if (!ok[i]) break;
      report.uniform_threshold = radii[i];
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exact power-test quotient.
//
// For u = delta^(eps/p) the gradient integrand |u'|^p delta^(-alpha) equals
// (eps/p)^p times the zero-order integrand |u|^p delta^(-(alpha+p)) pointwise
// (|delta'| = 1 a.e.), so the Rayleigh quotient equals (eps/p)^p exactly.
// Both integrands are evaluated independently on a shared cell decomposition,
// so the computed ratio verifies the identity instead of assuming it; the
// individual integrals are finite iff alpha + p - eps < 1, and are otherwise
// reported as divergent (truncated at the resolution floor) while the
// quotient stays meaningful as the common limit of cell-sum ratios.
// ---------------------------------------------------------------------------

struct QuotientResult {
  double numerator = 0.0;    ///< gradient-side integral (per unit sphere area)
  double denominator = 0.0;  ///< zero-order integral (per unit sphere area)
  double quotient = 0.0;
  bool divergent = false;
};

namespace detail {

/// Integration cells covering the bounded radial domain with geometric
/// refinement toward each distance-singular boundary.  Cells never straddle
/// a kink; shells halve down to the given floor in delta.
inline std::vector<std::pair<double, double>> singular_cells(
    const DistanceProfile& profile, double delta_floor) {
  const double span = profile.delta_span();
  const double t0 = 0.25 * span;
  std::vector<double> cuts;
  auto add_shells = [&](double rb) {
    const double orient = boundary_orientation(profile, rb);
    double t = t0;
    while (t >= delta_floor) {
      const double cut = rb + orient * t;
      // Below one ulp of rb the cut rounds onto the boundary itself and the
      // resulting sliver cell would place quadrature nodes outside the
      // domain; the shells bottom out at the representable resolution.
      if (cut == rb) break;
      cuts.push_back(cut);
      t *= 0.5;
    }
  };
  for (double rb : profile.singular_radii()) add_shells(rb);
  switch (profile.spec.kind) {
    case DomainKind::Interval:
      if (profile.spec.half_line) {
        cuts.push_back(profile.spec.r1);  // top of the half-line window
      } else {
        cuts.push_back(0.5 * profile.spec.r1);  // kink
      }
      break;
    case DomainKind::Ball:
      cuts.push_back(0.0);  // center (delta = R there, nothing singular)
      break;
    case DomainKind::Annulus:
      cuts.push_back(0.5 * (profile.spec.r0 + profile.spec.r1));  // kink
      break;
    case DomainKind::ExteriorBall:
      throw std::invalid_argument("singular_cells: bounded domains only");
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> cells;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) cells.emplace_back(cuts[i], cuts[i + 1]);
  return cells;
}

}  // namespace detail

inline QuotientResult power_test_quotient(const DistanceProfile& profile,
                                          const Params& prm, double epsilon) {
  validate(prm);
  if (!(epsilon > 0.0))
    throw std::invalid_argument("power_test_quotient: need epsilon > 0");
  if (!profile.spec.bounded())
    throw std::invalid_argument("power_test_quotient: bounded domains only");
  QuotientResult out;
  // Exponent of delta in the zero-order integrand near the boundary.
  const double s = epsilon - prm.alpha - prm.p;
  out.divergent = (s <= -1.0);
  // Divergent sums are truncated at a shallow floor to keep them finite; the
  // ratio is floor-independent because the integrands are proportional.
  const double floor = out.divergent ? 1e-12 : 1e-280;
  const double e_over_p = epsilon / prm.p;
  for (auto [a, b] : detail::singular_cells(profile, floor)) {
    out.denominator += gauss8(
        [&](double r) {
          return std::pow(profile.delta(r), s) * profile.weight(r);
        },
        a, b);
    // Gradient side from its own formula |(eps/p) d^(eps/p-1)|^p d^(-alpha),
    // with the delta-exponents combined before the pow call: the deepest
    // shells would overflow the intermediate |u'|^p factor on its own.
    out.numerator += gauss8(
        [&](double r) {
          const double d = profile.delta(r);
          return std::pow(e_over_p, prm.p) *
                 std::pow(d, (e_over_p - 1.0) * prm.p - prm.alpha) *
                 profile.weight(r);
        },
        a, b);
  }
  out.quotient = out.numerator / out.denominator;
  return out;
}

// ---------------------------------------------------------------------------
// Integrability probe.
// ---------------------------------------------------------------------------

struct ProbeOptions {
  int max_levels = 160;
  int consecutive = 4;  ///< trailing non-decaying levels required for divergence
  double ratio_threshold = 0.995;
  double tail_cut = 1e-16;  ///< stop refining once shells stop mattering
};

struct ProbeResult {
  bool convergent = false;
  double value = 0.0;  ///< full integral (with angular factor) when convergent
  int levels_used = 0;
  std::vector<double> shell_sums;  ///< per-level boundary-shell contributions
};

/// Adaptive quadrature of the integral of delta^(-a) over the domain (bounded
/// case) or over the collar delta < min(R,1)/2 (exterior case), refining
/// geometrically toward each distance-singular boundary.  Log-spaced shells
/// have geometrically decaying contributions iff a < 1, so convergence is
/// classified from the trailing trend of successive shell sums; the trailing
/// window (rather than any early run) keeps transients of the r^(N-1) factor
/// from masquerading as divergence.  Returned values include the angular
/// factor, so a = 0 recovers the domain volume.
inline ProbeResult integrability_probe(const DistanceProfile& profile, double a,
                                       ProbeOptions opt = {}) {
  if (!(a >= 0.0)) throw std::invalid_argument("integrability_probe: need a >= 0");
  ProbeResult out;
  const bool exterior = !profile.spec.bounded();
  const double angular = (profile.spec.kind == DomainKind::Interval)
                             ? 1.0
                             : sphere_area(static_cast<int>(profile.weight_exponent) + 1);
  const double span =
      exterior ? 0.5 * std::min(profile.spec.r0, 1.0) : profile.delta_span();
  const double t0 = exterior ? span : 0.5 * span;
  const std::vector<double> singular = profile.singular_radii();

  // Bulk part: everything with delta in [t0, span] (absent for exterior
  // probes, where the window is the collar itself).
  double bulk = 0.0;
  if (!exterior) {
    for (double rb : singular) {
      const double orient = detail::boundary_orientation(profile, rb);
      bulk += gauss8(
          [&](double d) {
            return std::pow(d, -a) * profile.weight(rb + orient * d);
          },
          t0, span);
    }
  }

  // Boundary shells: level k covers delta in [t0 e^-(k+1), t0 e^-k] on every
  // distance-singular side.
  const double q = std::exp(-1.0);
  double shells_total = 0.0;
  double t_hi = t0;
  bool exploded = false;
  int flat_run = 0;
  for (int k = 0; k < opt.max_levels; ++k) {
    const double t_lo = t_hi * q;
    double s = 0.0;
    for (double rb : singular) {
      const double orient = detail::boundary_orientation(profile, rb);
      s += gauss8(
          [&](double d) {
            return std::pow(d, -a) * profile.weight(rb + orient * d);
          },
          t_lo, t_hi);
    }
    out.shell_sums.push_back(s);
    shells_total += s;
    out.levels_used = k + 1;
    if (!(shells_total < 1e250)) {  // mass exploding: unambiguous divergence
      exploded = true;
      break;
    }
    if (k >= 1) {
      const double ratio = s / out.shell_sums[k - 1];
      flat_run = (ratio >= opt.ratio_threshold) ? flat_run + 1 : 0;
      if (flat_run == 0 && s < opt.tail_cut * (bulk + shells_total)) break;
    }
    t_hi = t_lo;
  }

  out.convergent = !exploded && flat_run < opt.consecutive;
  if (out.convergent) {
    // Geometric tail estimate from the last observed decay ratio.
    double tail = 0.0;
    if (out.shell_sums.size() >= 2) {
      const double rho =
          out.shell_sums.back() / out.shell_sums[out.shell_sums.size() - 2];
      if (rho < 1.0) tail = out.shell_sums.back() * rho / (1.0 - rho);
    }
    out.value = angular * (bulk + shells_total + tail);
  } else {
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace hardygap
