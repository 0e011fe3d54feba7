#pragma once
// Parameter bundle, radial domain descriptors, weight-exponent regimes, and
// the closed-form constant layer.
//
// Everything downstream is parametrized by the weighted p-energy
//
//     E[phi] = integral |phi'|^p delta^(-alpha) r^(N-1) dr,
//
// where delta is the distance to the boundary.  The model constants
//
//     c(alpha,p,m) = |(alpha+p-m)/p|^p,   m in {1, N},
//
// are the sharp Hardy constants of the flat half-space (m=1) and of the
// punctured space / far field (m=N); they anchor the indicial intervals, the
// collar limits, and the gap classification.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hardygap {

/// Threshold below which alpha+p-m counts as exactly m (borderline regime).
inline constexpr double kEqTolerance = 1e-12;

struct Params {
  double alpha = 0.0;  ///< weight exponent: gradient term carries delta^(-alpha)
  double p = 2.0;      ///< integrability exponent, p > 1
  int dim = 2;         ///< ambient dimension N >= 2 (Interval measures ignore it)

  friend bool operator==(const Params&, const Params&) = default;
};

inline void validate(const Params& prm) {
  if (!std::isfinite(prm.alpha))
    throw std::invalid_argument("params: alpha must be finite");
  if (!std::isfinite(prm.p) || prm.p <= 1.0)
    throw std::invalid_argument("params: p must lie in (1, inf)");
  if (prm.dim < 2)
    throw std::invalid_argument("params: dim must be an integer >= 2");
}

inline Params make_params(double alpha, double p, int dim) {
  Params prm{alpha, p, dim};
  validate(prm);
  return prm;
}

// ---------------------------------------------------------------------------
// Domains.  All supported shapes are radial; Interval is the 1D model (0,b)
// used for the half-space reduction (its measure carries no r^(N-1) factor).
// ---------------------------------------------------------------------------

enum class DomainKind { Interval, Ball, Annulus, ExteriorBall };

struct DomainSpec {
  DomainKind kind = DomainKind::Ball;
  double r0 = 0.0;  ///< inner radius (Annulus, ExteriorBall), else 0
  double r1 = 1.0;  ///< outer radius / interval length b; +inf for ExteriorBall
  bool half_line = false;  ///< Interval only: delta(t) = t instead of min(t, b-t)

  bool bounded() const { return kind != DomainKind::ExteriorBall; }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

inline std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Interval: return "interval";
    case DomainKind::Ball: return "ball";
    case DomainKind::Annulus: return "annulus";
    case DomainKind::ExteriorBall: return "exterior_ball";
  }
  return "?";
}

inline void validate(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::Interval:
      if (!(spec.r1 > 0.0) || !std::isfinite(spec.r1))
        throw std::invalid_argument("domain: interval length must be positive");
      break;
    case DomainKind::Ball:
      if (!(spec.r1 > 0.0) || !std::isfinite(spec.r1))
        throw std::invalid_argument("domain: ball radius must be positive");
      break;
    case DomainKind::Annulus:
      if (!(spec.r0 > 0.0) || !(spec.r1 > spec.r0) || !std::isfinite(spec.r1))
        throw std::invalid_argument("domain: annulus needs 0 < r0 < r1");
      break;
    case DomainKind::ExteriorBall:
      if (!(spec.r0 > 0.0) || !std::isfinite(spec.r0))
        throw std::invalid_argument("domain: exterior ball radius must be positive");
      break;
  }
}

inline DomainSpec make_interval(double b, bool half_line = true) {
  DomainSpec spec{DomainKind::Interval, 0.0, b, half_line};
  validate(spec);
  return spec;
}

inline DomainSpec make_ball(double R) {
  DomainSpec spec{DomainKind::Ball, 0.0, R, false};
  validate(spec);
  return spec;
}

inline DomainSpec make_annulus(double r0, double r1) {
  DomainSpec spec{DomainKind::Annulus, r0, r1, false};
  validate(spec);
  return spec;
}

inline DomainSpec make_exterior_ball(double R) {
  DomainSpec spec{DomainKind::ExteriorBall, R,
                  std::numeric_limits<double>::infinity(), false};
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Regimes: the case split on alpha+p relative to 1 and N.
// ---------------------------------------------------------------------------

enum class BoundaryClass { Sub1, Eq1, Between, EqN, SupN };

inline std::string to_string(BoundaryClass cls) {
  switch (cls) {
    case BoundaryClass::Sub1: return "sub1";
    case BoundaryClass::Eq1: return "eq1";
    case BoundaryClass::Between: return "between";
    case BoundaryClass::EqN: return "eqN";
    case BoundaryClass::SupN: return "supN";
  }
  return "?";
}

struct Regime {
  BoundaryClass boundary_class = BoundaryClass::Between;
  double alpha_plus_p = 0.0;
  double eq_tolerance = kEqTolerance;
};

/// Exactly one class per Params; Eq1/EqN fire iff |alpha+p-m| <= eq_tolerance.
inline Regime classify_regime(const Params& prm, double eq_tol = kEqTolerance) {
  validate(prm);
  const double s = prm.alpha + prm.p;
  Regime regime{BoundaryClass::Between, s, eq_tol};
  if (std::abs(s - 1.0) <= eq_tol)
    regime.boundary_class = BoundaryClass::Eq1;
  else if (std::abs(s - prm.dim) <= eq_tol)
    regime.boundary_class = BoundaryClass::EqN;
  else if (s < 1.0)
    regime.boundary_class = BoundaryClass::Sub1;
  else if (s < prm.dim)
    regime.boundary_class = BoundaryClass::Between;
  else
    regime.boundary_class = BoundaryClass::SupN;
  return regime;
}

// ---------------------------------------------------------------------------
// Closed-form constants.
// ---------------------------------------------------------------------------

/// c(alpha,p,m) = |(alpha+p-m)/p|^p for m in {1, dim}; zero exactly at alpha+p=m.
inline double c_const(const Params& prm, int m) {
  validate(prm);
  if (m != 1 && m != prm.dim)
    throw std::invalid_argument("c_const: m must be 1 or dim");
  return std::pow(std::abs((prm.alpha + prm.p - m) / prm.p), prm.p);
}

/// min{ c(alpha,p,1), c(alpha,p,N) }; the far-field constant of exterior domains.
inline double c_min(const Params& prm) {
  return std::min(c_const(prm, 1), c_const(prm, prm.dim));
}

/// Surface area of the unit sphere S^(N-1): 2 pi^(N/2) / Gamma(N/2).
inline double sphere_area(int dim) {
  if (dim < 1) throw std::invalid_argument("sphere_area: dim must be >= 1");
  const double half = 0.5 * dim;
  return 2.0 * std::pow(3.14159265358979323846, half) / std::tgamma(half);
}

}  // namespace hardygap
