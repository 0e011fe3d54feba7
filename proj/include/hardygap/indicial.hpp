#pragma once
// Indicial functions and their root solvers.
//
// Power profiles solve the weighted p-Laplace eigenvalue equation exactly at
// leading order: for u = delta^nu in a flat boundary collar,
//
//     -div(delta^(-alpha) |u'|^(p-2) u') = lambda_b(nu) delta^(-(alpha+p)) |u|^(p-2) u,
//     lambda_b(nu) = |nu|^(p-2) nu [ alpha + (1-nu)(p-1) ],
//
// and for u = r^nu in the far field of an exterior domain the same holds with
// the dimension-shifted bracket
//
//     lambda_i(nu) = |nu|^(p-2) nu [ (alpha - N + 1) + (1-nu)(p-1) ].
//
// Each function is strictly monotone on a known bracket whose extremal value
// is the matching model constant c(alpha,p,m); decay exponents of minimizers
// are the unique roots lambda(nu) = mu on that bracket.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hardygap/params.hpp"

namespace hardygap {

enum class Location { Boundary, Infinity };

inline std::string to_string(Location loc) {
  return loc == Location::Boundary ? "boundary" : "infinity";
}

/// |t|^q * sign(t), continuously extended by 0 at t=0 (avoids 0^negative).
inline double signed_power(double t, double q) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), q), t);
}

inline double lambda_boundary(const Params& prm, double nu) {
  // |nu|^{p-2} nu = signed_power(nu, p-1); the bracket is affine in nu.
  return signed_power(nu, prm.p - 1.0) * (prm.alpha + (1.0 - nu) * (prm.p - 1.0));
}

inline double lambda_infinity(const Params& prm, double nu) {
  return signed_power(nu, prm.p - 1.0) *
         ((prm.alpha - prm.dim + 1.0) + (1.0 - nu) * (prm.p - 1.0));
}

inline double lambda_at(const Params& prm, Location loc, double nu) {
  return loc == Location::Boundary ? lambda_boundary(prm, nu)
                                   : lambda_infinity(prm, nu);
}

/// The constant whose value lambda attains at the extremal endpoint:
/// c(alpha,p,1) at Boundary, c(alpha,p,N) at Infinity.
inline double indicial_c(const Params& prm, Location loc) {
  return c_const(prm, loc == Location::Boundary ? 1 : prm.dim);
}

/// Location of the maximum of lambda on its monotone bracket:
/// (alpha+p-1)/p at Boundary, (alpha+p-N)/p at Infinity.
inline double extremal_exponent(const Params& prm, Location loc) {
  const int m = (loc == Location::Boundary) ? 1 : prm.dim;
  return (prm.alpha + prm.p - m) / prm.p;
}

struct RootInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool increasing = false;  ///< lambda strictly increasing on [lo,hi] (else decreasing)
};

/// True when alpha+p = m (within eq_tol): the bracket collapses and only mu=0
/// is admissible, with root at the degenerate endpoint 0.
inline bool indicial_degenerate(const Params& prm, Location loc,
                                double eq_tol = kEqTolerance) {
  const int m = (loc == Location::Boundary) ? 1 : prm.dim;
  return std::abs(prm.alpha + prm.p - m) <= eq_tol;
}

/// Monotone bracket of the indicial function.  Throws for degenerate regimes.
inline RootInterval indicial_interval(const Params& prm, Location loc) {
  validate(prm);
  if (indicial_degenerate(prm, loc))
    throw std::domain_error("indicial_interval: alpha+p equals " +
                            std::string(loc == Location::Boundary ? "1" : "N") +
                            "; bracket is degenerate");
  const double s = prm.alpha + prm.p;
  if (loc == Location::Boundary) {
    // lambda_b decreasing from c(alpha,p,1) down to 0.
    if (s > 1.0) return {(s - 1.0) / prm.p, (s - 1.0) / (prm.p - 1.0), false};
    return {(s - 1.0) / prm.p, 0.0, false};
  }
  // lambda_i increasing from 0 up to c(alpha,p,N).
  const double sN = s - prm.dim;
  if (sN < 0.0) return {sN / (prm.p - 1.0), sN / prm.p, true};
  return {0.0, sN / prm.p, true};
}

struct RootOptions {
  double root_tol = 1e-12;  ///< required |lambda(root) - mu|
  double mu_slack = 1e-10;  ///< mu outside [0,c] by at most this is clamped
};

/// Unique nu in the monotone bracket with lambda(nu) = mu.  mu slightly
/// outside [0, c] (within mu_slack) is clamped; larger violations reject.
inline double indicial_root(const Params& prm, Location loc, double mu,
                            RootOptions opt = {}) {
  validate(prm);
  const double c = indicial_c(prm, loc);
  if (mu < -opt.mu_slack || mu > c + opt.mu_slack)
    throw std::domain_error("indicial_root: mu outside [0, c] beyond slack");
  mu = std::clamp(mu, 0.0, c);

  if (indicial_degenerate(prm, loc)) {
    if (mu > opt.mu_slack)
      throw std::domain_error("indicial_root: degenerate bracket admits only mu = 0");
    return 0.0;
  }
  const RootInterval br = indicial_interval(prm, loc);
  if (mu == c) return extremal_exponent(prm, loc);

  // Bisection; monotonicity guarantees the bracketing sign change and the
  // derivative-free solve tolerates the C^1-only kink of |nu|^{p-1} for p<2.
  double lo = br.lo, hi = br.hi;
  auto f = [&](double nu) { return lambda_at(prm, loc, nu) - mu; };
  double flo = f(lo);
  // Decreasing: f(lo) >= 0 >= f(hi); increasing: f(lo) <= 0 <= f(hi).
  double best = lo, best_abs = std::abs(flo);
  {
    // The root can sit exactly on an endpoint (mu = 0 lands on the zero of
    // lambda); midpoints never reach it and for p < 2 the |nu|^(p-1) cusp
    // there keeps their residual far above tolerance.
    const double fhi = f(hi);
    if (std::abs(fhi) < best_abs) {
      best = hi;
      best_abs = std::abs(fhi);
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < best_abs) {
      best = mid;
      best_abs = std::abs(fm);
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() *
                       std::max({std::abs(lo), std::abs(hi), 1.0}))
      break;
  }
  if (best_abs > opt.root_tol)
    throw std::runtime_error("indicial_root: bisection residual above tolerance");
  return best;
}

// ---------------------------------------------------------------------------
// The cross-term inequality.
//
// Perturbing a power profile delta^nu by +-delta^beta produces a sub- or
// supersolution only because the first-order term of the energy expansion has
// a definite sign; that reduces to the strict scalar inequality
//
//     (p-2) lambda(nu) beta/nu + lambda(beta) |nu/beta|^(p-2)  <  (p-1) lambda(nu)
//
// for admissible exponent pairs.  The verifier below evaluates it in extended
// precision: near the beta -> nu equality case both sides agree to first
// order and doubles can round a true inequality to a false violation.
// ---------------------------------------------------------------------------

struct PairHypothesis {
  bool ok = true;
  std::string violation;  ///< empty when ok; names the failed clause otherwise
};

/// Admissibility of (nu, beta) for perturbation_inequality.
/// Boundary: nu < beta with both exponents in the closed monotone bracket.
/// Infinity: beta < nu with nu in the bracket (beta unrestricted below nu).
/// Both exponents must be nonzero (the inequality divides by them).
inline PairHypothesis pair_hypothesis(const Params& prm, Location loc,
                                      double nu, double beta) {
  if (indicial_degenerate(prm, loc))
    return {false, "degenerate bracket: alpha+p equals the critical value"};
  const RootInterval br = indicial_interval(prm, loc);
  if (nu == 0.0) return {false, "nu must be nonzero"};
  if (beta == 0.0) return {false, "beta must be nonzero"};
  if (loc == Location::Boundary) {
    if (!(nu < beta)) return {false, "boundary case requires nu < beta"};
    if (nu < br.lo || nu > br.hi) return {false, "nu outside the monotone bracket"};
    if (beta < br.lo || beta > br.hi) return {false, "beta outside the monotone bracket"};
  } else {
    if (!(beta < nu)) return {false, "infinity case requires beta < nu"};
    if (nu < br.lo || nu > br.hi) return {false, "nu outside the monotone bracket"};
  }
  return {};
}

namespace detail {
inline long double signed_power_l(long double t, long double q) {
  if (t == 0.0L) return 0.0L;
  const long double mag = std::pow(std::abs(t), q);
  return t > 0.0L ? mag : -mag;
}

inline long double lambda_l(const Params& prm, Location loc, long double nu) {
  const long double shift =
      (loc == Location::Boundary) ? static_cast<long double>(prm.alpha)
                                  : static_cast<long double>(prm.alpha) - prm.dim + 1.0L;
  return signed_power_l(nu, static_cast<long double>(prm.p) - 1.0L) *
         (shift + (1.0L - nu) * (static_cast<long double>(prm.p) - 1.0L));
}
}  // namespace detail

/// Strict cross-term inequality for an admissible exponent pair.  With
/// enforce_hypothesis (default) an inadmissible pair throws, naming the
/// violated clause; with it off the scalar comparison is evaluated anyway
/// (used by deliberate negative controls).
inline bool perturbation_inequality(const Params& prm, Location loc, double nu,
                                    double beta, bool enforce_hypothesis = true) {
  validate(prm);
  const PairHypothesis hyp = pair_hypothesis(prm, loc, nu, beta);
  if (!hyp.ok) {
    if (enforce_hypothesis)
      throw std::domain_error("perturbation_inequality: " + hyp.violation);
    if (nu == 0.0 || beta == 0.0)
      throw std::domain_error("perturbation_inequality: " + hyp.violation);
  }
  const long double p = prm.p;
  const long double lnu = detail::lambda_l(prm, loc, nu);
  const long double lbe = detail::lambda_l(prm, loc, beta);
  const long double ratio =
      std::pow(std::abs(static_cast<long double>(nu) / beta), p - 2.0L);
  const long double lhs =
      (p - 2.0L) * lnu * (static_cast<long double>(beta) / nu) + lbe * ratio;
  const long double rhs = (p - 1.0L) * lnu;
  return lhs < rhs;
}

}  // namespace hardygap
