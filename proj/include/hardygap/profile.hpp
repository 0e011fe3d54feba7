#pragma once
// Radial distance geometry: delta(r) profiles for the supported domain kinds,
// their kink radii, and the radial measure weight r^(N-1).
//
// On every supported domain the distance to the boundary is a piecewise
// affine function of the radius with |delta'| = 1 away from kinks, which is
// what lets delta-powers stand in for the general comparison profiles: in a
// radial collar they satisfy the same expansions with Hoelder exponent 1.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardygap/params.hpp"

namespace hardygap {

struct DistanceProfile {
  DomainSpec spec;
  double weight_exponent = 0.0;  ///< N-1, or 0 for Interval kinds
  double lo = 0.0;               ///< open radial interval (lo, hi)
  double hi = 0.0;               ///< +inf for exterior domains
  std::vector<double> kink_radii;

  double delta(double r) const {
    switch (spec.kind) {
      case DomainKind::Interval:
        return spec.half_line ? r : std::min(r, spec.r1 - r);
      case DomainKind::Ball:
        return spec.r1 - r;
      case DomainKind::Annulus:
        return std::min(r - spec.r0, spec.r1 - r);
      case DomainKind::ExteriorBall:
        return r - spec.r0;
    }
    return 0.0;
  }

  /// delta'(r) = +-1; evaluation at a kink radius is rejected.
  double ddelta(double r) const {
    for (double k : kink_radii)
      if (r == k) throw std::domain_error("ddelta: evaluation at a kink radius");
    switch (spec.kind) {
      case DomainKind::Interval:
        return (spec.half_line || r < 0.5 * spec.r1) ? 1.0 : -1.0;
      case DomainKind::Ball:
        return -1.0;
      case DomainKind::Annulus:
        return (r < 0.5 * (spec.r0 + spec.r1)) ? 1.0 : -1.0;
      case DomainKind::ExteriorBall:
        return 1.0;
    }
    return 0.0;
  }

  double weight(double r) const {
    return weight_exponent == 0.0 ? 1.0 : std::pow(r, weight_exponent);
  }

  bool contains(double r) const { return r > lo && r < hi; }

  /// Radii of the distance-singular boundary components (where delta -> 0).
  /// The far field of an exterior domain is handled separately.
  std::vector<double> singular_radii() const {
    switch (spec.kind) {
      case DomainKind::Interval:
        return spec.half_line ? std::vector<double>{0.0}
                              : std::vector<double>{0.0, spec.r1};
      case DomainKind::Ball:
        return {spec.r1};
      case DomainKind::Annulus:
        return {spec.r0, spec.r1};
      case DomainKind::ExteriorBall:
        return {spec.r0};
    }
    return {};
  }

  /// Largest attainable delta (half the gap for two-sided kinds); +inf for
  /// exterior domains.
  double delta_span() const {
    switch (spec.kind) {
      case DomainKind::Interval:
        return spec.half_line ? spec.r1 : 0.5 * spec.r1;
      case DomainKind::Ball:
        return spec.r1;
      case DomainKind::Annulus:
        return 0.5 * (spec.r1 - spec.r0);
      case DomainKind::ExteriorBall:
        return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }
};

inline DistanceProfile make_profile(const DomainSpec& spec, const Params& prm) {
  validate(spec);
  validate(prm);
  DistanceProfile profile;
  profile.spec = spec;
  profile.weight_exponent =
      (spec.kind == DomainKind::Interval) ? 0.0 : static_cast<double>(prm.dim - 1);
  switch (spec.kind) {
    case DomainKind::Interval:
      profile.lo = 0.0;
      profile.hi = spec.r1;
      if (!spec.half_line) profile.kink_radii = {0.5 * spec.r1};
      break;
    case DomainKind::Ball:
      profile.lo = 0.0;
      profile.hi = spec.r1;
      break;
    case DomainKind::Annulus:
      profile.lo = spec.r0;
      profile.hi = spec.r1;
      profile.kink_radii = {0.5 * (spec.r0 + spec.r1)};
      break;
    case DomainKind::ExteriorBall:
      profile.lo = spec.r0;
      profile.hi = std::numeric_limits<double>::infinity();
      break;
  }
  return profile;
}

/// (grad delta . x)/delta at radius r; for an exterior ball this is
/// r/(r - R) = 1 + R/delta, so the deviation from 1 decays like 1/delta.
inline double asymptotic_distance_ratio(const DistanceProfile& profile, double r) {
  if (profile.spec.kind != DomainKind::ExteriorBall)
    throw std::invalid_argument("asymptotic_distance_ratio: exterior domains only");
  if (!(r > profile.spec.r0))
    throw std::domain_error("asymptotic_distance_ratio: r must exceed the core radius");
  return r / (r - profile.spec.r0);
}

}  // namespace hardygap
