#pragma once
// Discrete minimization of the weighted p-Rayleigh quotient on graded radial
// meshes.  Energies are assembled per element with exact power-weight
// integrals near the singular boundary; p = 2 runs a generalized symmetric
// tridiagonal eigensolve (inverse power iteration finished with Rayleigh
// shifts), general p an inverse-power outer loop with a damped-Newton inner
// solve of the strictly convex subproblem.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardygap/indicial.hpp"
#include "hardygap/mesh.hpp"
#include "hardygap/params.hpp"
#include "hardygap/quadrature.hpp"

namespace hardygap {

// ---------------------------------------------------------------------------
// Energy forms.
// ---------------------------------------------------------------------------

/// The two p-homogeneous functionals of the quotient, discretized once per
/// mesh: gradient(v) = sum_e w_grad[e] |s_e|^p over element slopes s_e, and
/// potential(v) = an 8-point-per-element quadrature of delta^-(alpha+p)
/// r^(N-1) |v|^p (nodes placed in log delta, where the integrand is tame).
struct EnergyForms {
  Params prm{};
  std::vector<double> nodes;
  std::vector<double> h;       ///< element widths
  std::vector<double> w_grad;  ///< per element: integral of delta^-alpha r^(N-1)
  std::vector<double> pot_t;   ///< 8 per element: barycentric sample positions
  std::vector<double> pot_w;   ///< 8 per element: quadrature weight at the sample

  int elements() const { return static_cast<int>(h.size()); }

  double gradient(const GridFn& v) const {
    check(v);
    double g = 0.0;
    for (int e = 0; e < elements(); ++e) {
      const double s = (v[e + 1] - v[e]) / h[e];
      g += w_grad[e] * std::pow(std::abs(s), prm.p);
    }
    return g;
  }

  double potential(const GridFn& v) const {
    check(v);
    double q = 0.0;
    for (int e = 0; e < elements(); ++e)
      for (int g8 = 0; g8 < 8; ++g8) {
        const size_t k = 8 * static_cast<size_t>(e) + g8;
        const double t = pot_t[k];
        const double phi = (1.0 - t) * v[e] + t * v[e + 1];
        q += pot_w[k] * std::pow(std::abs(phi), prm.p);
      }
    return q;
  }

  double quotient(const GridFn& v) const {
    const double den = potential(v);
    if (!(den > 0.0))
      throw std::invalid_argument("quotient: denominator vanishes");
    return gradient(v) / den;
  }

 private:
  void check(const GridFn& v) const {
    if (v.size() != nodes.size())
      throw std::invalid_argument("energy form: nodal size mismatch");
  }
};

inline EnergyForms assemble_energies(const GradedMesh& mesh, const Params& prm) {
  validate(prm);
  const DistanceProfile& prof = mesh.profile;
  const double wexp = prof.weight_exponent;
  const auto singular = prof.singular_radii();

  EnergyForms f;
  f.prm = prm;
  f.nodes = mesh.nodes;
  const int m = mesh.elements();
  f.h.resize(m);
  f.w_grad.resize(m);
  f.pot_t.resize(8 * static_cast<size_t>(m));
  f.pot_w.resize(8 * static_cast<size_t>(m));

  for (int e = 0; e < m; ++e) {
    const double r_lo = mesh.nodes[e], r_hi = mesh.nodes[e + 1];
    f.h[e] = r_hi - r_lo;
    const double rm = 0.5 * (r_lo + r_hi);
    // Governing singular boundary of this element (elements never straddle a
    // kink, so delta = |r - rb| on the whole element).
    double rb = singular.front();
    for (double s : singular)
      if (std::abs(rm - s) < std::abs(rm - rb)) rb = s;
    const double orient = (rm > rb) ? 1.0 : -1.0;
    const double d0 = std::abs(r_lo - rb), d1 = std::abs(r_hi - rb);
    const double d_lo = std::min(d0, d1), d_hi = std::max(d0, d1);

    // Gradient weight.  The exact binomial form is used wherever it is
    // well-conditioned; deep in the bulk of a ball (delta comparable to rb
    // with the boundary above) the expansion of (rb - delta)^(N-1) cancels,
    // and a log-substituted Gauss rule on the then-smooth integrand is safer.
    if (orient > 0.0 || wexp == 0.0 || d_hi <= 0.5 * rb) {
      f.w_grad[e] = power_weight_integral(-prm.alpha, d_lo, d_hi, rb, orient,
                                          static_cast<int>(wexp));
    } else {
      f.w_grad[e] = gauss8(
          [&](double y) {
            const double d = std::exp(y);
            return std::pow(d, 1.0 - prm.alpha) * std::pow(rb + orient * d, wexp);
          },
          std::log(d_lo), std::log(d_hi));
    }

    // Potential samples, placed in y = log delta: the integrand
    // delta^(1-alpha-p) r^(N-1) varies by a bounded factor per element there.
    const double ya = std::log(d_lo), yb = std::log(d_hi);
    const double ymid = 0.5 * (ya + yb), yhalf = 0.5 * (yb - ya);
    for (int g8 = 0; g8 < 8; ++g8) {
      const size_t k = 8 * static_cast<size_t>(e) + g8;
      const double y = ymid + yhalf * Gauss8::x[g8];
      const double d = std::exp(y);
      const double r = rb + orient * d;
      f.pot_t[k] = (r - r_lo) / f.h[e];
      f.pot_w[k] = Gauss8::w[g8] * yhalf *
                   std::pow(d, 1.0 - prm.alpha - prm.p) * std::pow(r, wexp);
    }

    if (!std::isfinite(f.w_grad[e]))
      throw std::runtime_error("assemble_energies: gradient weight overflow in element " +
                               std::to_string(e));
    for (int g8 = 0; g8 < 8; ++g8)
      if (!std::isfinite(f.pot_w[8 * static_cast<size_t>(e) + g8]))
        throw std::runtime_error(
            "assemble_energies: potential weight overflow in element " +
            std::to_string(e));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Solver plumbing.
// ---------------------------------------------------------------------------

/// Contiguous range of free node indices (inclusive) defining the admissible
/// subspace: nodal values outside the range are held at zero.
struct WindowRange {
  int i0 = 0;
  int i1 = -1;
  int size() const { return i1 - i0 + 1; }
};

inline WindowRange default_window(const GradedMesh& mesh) {
  WindowRange w;
  w.i0 = mesh.dirichlet_lo ? 1 : 0;
  w.i1 = mesh.size() - 1 - (mesh.dirichlet_hi ? 1 : 0);
  if (w.size() < 1)
    throw std::invalid_argument("default_window: empty admissible space");
  return w;
}

/// Deterministic initial guess: a tent over the window, peak at the middle
/// node (log-midpoint of the boundary distance on these graded meshes).
inline GridFn tent_init(const GradedMesh& mesh, const WindowRange& w) {
  GridFn v(mesh.nodes.size(), 0.0);
  const int mid = (w.i0 + w.i1) / 2;
  for (int i = w.i0; i <= w.i1; ++i) {
    const double up = static_cast<double>(i - w.i0 + 1) / (mid - w.i0 + 1);
    const double dn = static_cast<double>(w.i1 + 1 - i) / (w.i1 + 1 - mid);
    v[i] = std::min(up, dn);
  }
  return v;
}

struct SolverOptions {
  double tol = 1e-10;      ///< quotient-decrement stagnation guard (relative)
  int max_iter = 500;
  double eig_tol = 1e-12;  ///< p = 2 relative eigenresidual target
  double el_tol = 1e-8;    ///< p != 2 relative Euler-Lagrange residual target
  int newton_max = 60;     ///< inner Newton cap per outer step (p != 2)
  /// p != 2: relative residual below which the linearly convergent
  /// inverse-power loop hands over to Newton on the full stationarity system
  /// (quadratic finisher, the analogue of the p = 2 Rayleigh shift).
  double polish_switch = 1e-2;
  int polish_max = 30;  ///< Newton finisher step cap
};

struct MeshSummary {
  int elements = 0;
  double t_min = 0.0;
  double r_max = 0.0;
  double effective_ratio = 1.0;
  Grading grading = Grading::Uniform;
};

struct RayleighResult {
  double value = 0.0;
  GridFn minimizer;  ///< full-length, zero outside the window, denominator 1
  int iterations = 0;
  double final_decrement = 0.0;
  bool converged = false;
  double el_residual = 0.0;  ///< relative Euler-Lagrange residual at the minimizer
  MeshSummary mesh_summary;
};

namespace detail {

/// Symmetric tridiagonal matrix: diag d (n), sub/super-diagonal e (n-1).
struct Tridiag {
  std::vector<double> d, e;
  int n() const { return static_cast<int>(d.size()); }
};

inline void tridiag_mul(const Tridiag& A, const std::vector<double>& x,
                        std::vector<double>& out) {
  const int n = A.n();
  out.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = A.d[i] * x[i];
    if (i > 0) s += A.e[i - 1] * x[i - 1];
    if (i + 1 < n) s += A.e[i] * x[i + 1];
    out[i] = s;
  }
}

/// LDL^T factorization without pivoting; near-zero pivots are bumped, which
/// in shifted inverse iteration only steers the solve harder toward the
/// targeted eigenvector.
struct TridiagFactor {
  std::vector<double> dhat, l;
  void factor(const Tridiag& A) {
    const int n = A.n();
    dhat.resize(n);
    l.assign(std::max(n - 1, 0), 0.0);
    double scale = 0.0;
    for (double v : A.d) scale = std::max(scale, std::abs(v));
    const double tiny = std::max(scale, 1.0) * 1e-280;
    dhat[0] = A.d[0];
    if (std::abs(dhat[0]) < tiny) dhat[0] = (dhat[0] < 0 ? -tiny : tiny);
    for (int i = 1; i < n; ++i) {
      l[i - 1] = A.e[i - 1] / dhat[i - 1];
      dhat[i] = A.d[i] - l[i - 1] * A.e[i - 1];
      if (std::abs(dhat[i]) < tiny) dhat[i] = (dhat[i] < 0 ? -tiny : tiny);
    }
  }
  void solve(std::vector<double>& x) const {
    const int n = static_cast<int>(dhat.size());
    for (int i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
    for (int i = 0; i < n; ++i) x[i] /= dhat[i];
    for (int i = n - 2; i >= 0; --i) x[i] -= l[i] * x[i + 1];
  }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// Stiffness (p = 2 gradient form) restricted to the window; elements with
/// one pinned endpoint still contribute to the free diagonal.
inline Tridiag build_stiffness(const EnergyForms& f, const WindowRange& w) {
  Tridiag A;
  A.d.assign(w.size(), 0.0);
  A.e.assign(std::max(w.size() - 1, 0), 0.0);
  const int m = f.elements();
  for (int e = std::max(w.i0 - 1, 0); e <= std::min(w.i1, m - 1); ++e) {
    const double c = f.w_grad[e] / (f.h[e] * f.h[e]);
    const bool lo_in = (e >= w.i0 && e <= w.i1);
    const bool hi_in = (e + 1 >= w.i0 && e + 1 <= w.i1);
    if (lo_in) A.d[e - w.i0] += c;
    if (hi_in) A.d[e + 1 - w.i0] += c;
    if (lo_in && hi_in) A.e[e - w.i0] -= c;
  }
  return A;
}

/// Mass (p = 2 potential form) restricted to the window.
inline Tridiag build_mass(const EnergyForms& f, const WindowRange& w) {
  Tridiag B;
  B.d.assign(w.size(), 0.0);
  B.e.assign(std::max(w.size() - 1, 0), 0.0);
  const int m = f.elements();
  for (int e = std::max(w.i0 - 1, 0); e <= std::min(w.i1, m - 1); ++e) {
    const bool lo_in = (e >= w.i0 && e <= w.i1);
    const bool hi_in = (e + 1 >= w.i0 && e + 1 <= w.i1);
    for (int g8 = 0; g8 < 8; ++g8) {
      const size_t k = 8 * static_cast<size_t>(e) + g8;
      const double a = 1.0 - f.pot_t[k], b = f.pot_t[k], wq = f.pot_w[k];
      if (lo_in) B.d[e - w.i0] += wq * a * a;
      if (hi_in) B.d[e + 1 - w.i0] += wq * b * b;
      if (lo_in && hi_in) B.e[e - w.i0] += wq * a * b;
    }
  }
  return B;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quotient minimization.
// ---------------------------------------------------------------------------

namespace detail {

inline RayleighResult minimize_p2(const GradedMesh& mesh, const EnergyForms& f,
                                  const SolverOptions& opt, const WindowRange& w,
                                  const GridFn* init = nullptr) {
  const int n = w.size();
  const Tridiag A = build_stiffness(f, w);
  const Tridiag B = build_mass(f, w);
  TridiagFactor base;
  base.factor(A);

  if (init != nullptr && init->size() != f.nodes.size())
    throw std::invalid_argument("minimize_quotient: initial guess size mismatch");
  GridFn start = (init != nullptr) ? *init : tent_init(mesh, w);
  std::vector<double> x(start.begin() + w.i0, start.begin() + w.i1 + 1);
  std::vector<double> Ax, Bx, y, By, Ay;
  tridiag_mul(B, x, Bx);
  {
    double bn = std::sqrt(dot(x, Bx));
    if (!(bn > 0.0) || !std::isfinite(bn)) {
      // Unusable guess (zero mass in the window): fall back to the tent.
      start = tent_init(mesh, w);
      x.assign(start.begin() + w.i0, start.begin() + w.i1 + 1);
      tridiag_mul(B, x, Bx);
      bn = std::sqrt(dot(x, Bx));
    }
    for (auto& v : x) v /= bn;
  }
  tridiag_mul(A, x, Ax);
  tridiag_mul(B, x, Bx);
  double theta = dot(x, Ax) / dot(x, Bx);

  RayleighResult res;
  bool shifted = false;
  TridiagFactor shifted_factor;
  double dec = theta;
  int stalled = 0;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    y = Bx;
    if (!shifted) {
      base.solve(y);
    } else {
      // Rayleigh-shifted step: factor (A - sigma B) at the current estimate.
      Tridiag S = A;
      const double sigma = theta * (1.0 - 1e-9);
      for (int i = 0; i < n; ++i) S.d[i] -= sigma * B.d[i];
      for (int i = 0; i + 1 < n; ++i) S.e[i] -= sigma * B.e[i];
      shifted_factor.factor(S);
      shifted_factor.solve(y);
    }
    tridiag_mul(B, y, By);
    const double nrm = std::sqrt(dot(y, By));
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    for (auto& v : y) v /= nrm;
    tridiag_mul(A, y, Ay);
    tridiag_mul(B, y, By);
    const double tn = dot(y, Ay) / dot(y, By);
    dec = theta - tn;
    x = y;
    Ax = Ay;
    Bx = By;
    theta = tn;
    // Relative eigenresidual.
    double rn = 0.0, an = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ri = Ax[i] - theta * Bx[i];
      rn += ri * ri;
      an += Ax[i] * Ax[i];
    }
    res.el_residual = std::sqrt(rn / std::max(an, 1e-300));
    if (res.el_residual <= opt.eig_tol) {
      res.converged = true;
      ++it;
      break;
    }
    // The attainable residual is limited by rounding in the assembled forms;
    // once Rayleigh-shifted steps leave theta stationary to machine precision
    // the iteration sits at its floating-point fixed point and further sweeps
    // cannot improve it.
    const double eps_theta =
        64.0 * std::numeric_limits<double>::epsilon() * std::max(theta, 1e-300);
    stalled = (shifted && std::abs(dec) <= eps_theta) ? stalled + 1 : 0;
    if (stalled >= 3) {
      res.converged = true;
      ++it;
      break;
    }
    if (!shifted && std::abs(dec) <= 1e-3 * std::max(theta, 1e-300)) shifted = true;
  }

  // Sign-fix (ground eigenvectors are one-signed).
  double peak = 0.0;
  for (double v : x) if (std::abs(v) > std::abs(peak)) peak = v;
  if (peak < 0.0)
    for (auto& v : x) v = -v;

  res.minimizer.assign(f.nodes.size(), 0.0);
  for (int i = 0; i < n; ++i) res.minimizer[w.i0 + i] = x[i];
  const double den = f.potential(res.minimizer);
  const double scale = std::pow(den, 1.0 / f.prm.p);
  for (auto& v : res.minimizer) v /= scale;
  res.value = f.quotient(res.minimizer);
  res.iterations = it;
  res.final_decrement = std::abs(dec);
  return res;
}

inline RayleighResult minimize_general_p(const GradedMesh& mesh,
                                         const EnergyForms& f,
                                         const SolverOptions& opt,
                                         const WindowRange& w,
                                         const GridFn* init = nullptr) {
  const double p = f.prm.p;
  const int n = w.size();
  const int m = f.elements();
  const int e_lo = std::max(w.i0 - 1, 0), e_hi = std::min(w.i1, m - 1);

  GridFn u = tent_init(mesh, w);
  if (init != nullptr) {
    if (init->size() != f.nodes.size())
      throw std::invalid_argument("minimize_quotient: initial guess size mismatch");
    GridFn masked(f.nodes.size(), 0.0);
    for (int i = w.i0; i <= w.i1; ++i) masked[i] = (*init)[i];
    const double den = f.potential(masked);
    // An unusable guess (zero mass in the window) keeps the tent.
    if (den > 0.0 && std::isfinite(den)) u = std::move(masked);
  }
  {
    const double den = f.potential(u);
    const double s = std::pow(den, 1.0 / p);
    for (auto& v : u) v /= s;
  }
  double theta = f.gradient(u);

  // Gradient of gradient_form/p at a full-length iterate, masked to the window.
  auto grad_G = [&](const GridFn& v, std::vector<double>& out) {
    out.assign(n, 0.0);
    for (int e = e_lo; e <= e_hi; ++e) {
      const double s = (v[e + 1] - v[e]) / f.h[e];
      const double gval = f.w_grad[e] * signed_power(s, p - 1.0) / f.h[e];
      if (e >= w.i0) out[e - w.i0] -= gval;
      if (e + 1 <= w.i1) out[e + 1 - w.i0] += gval;
    }
  };
  // Linear functional b = d(potential/p) at the current normalized iterate.
  auto build_b = [&](const GridFn& v, std::vector<double>& out) {
    out.assign(n, 0.0);
    for (int e = e_lo; e <= e_hi; ++e)
      for (int g8 = 0; g8 < 8; ++g8) {
        const size_t k = 8 * static_cast<size_t>(e) + g8;
        const double t = f.pot_t[k];
        const double phi = (1.0 - t) * v[e] + t * v[e + 1];
        const double c = f.pot_w[k] * signed_power(phi, p - 1.0);
        if (e >= w.i0) out[e - w.i0] += c * (1.0 - t);
        if (e + 1 <= w.i1) out[e + 1 - w.i0] += c * t;
      }
  };
  // Regularized Hessian of gradient_form/p (slopes floored to keep the
  // tridiagonal factor definite for p > 2 and bounded for p < 2).
  auto hess_G = [&](const GridFn& v, detail::Tridiag& H) {
    double s_scale = 0.0;
    for (int e = e_lo; e <= e_hi; ++e)
      s_scale = std::max(s_scale, std::abs((v[e + 1] - v[e]) / f.h[e]));
    const double s_floor = std::max(1e-10 * s_scale, 1e-300);
    H.d.assign(n, 0.0);
    H.e.assign(std::max(n - 1, 0), 0.0);
    for (int e = e_lo; e <= e_hi; ++e) {
      const double s = std::max(std::abs((v[e + 1] - v[e]) / f.h[e]), s_floor);
      const double c =
          (p - 1.0) * f.w_grad[e] * std::pow(s, p - 2.0) / (f.h[e] * f.h[e]);
      const bool lo_in = (e >= w.i0), hi_in = (e + 1 <= w.i1);
      if (lo_in) H.d[e - w.i0] += c;
      if (hi_in) H.d[e + 1 - w.i0] += c;
      if (lo_in && hi_in) H.e[e - w.i0] -= c;
    }
  };
  // Hessian of potential/p (nodal values floored the same way for p < 2).
  auto hess_P = [&](const GridFn& v, detail::Tridiag& H) {
    double v_scale = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
      v_scale = std::max(v_scale, std::abs(v[i]));
    const double v_floor = std::max(1e-10 * v_scale, 1e-300);
    H.d.assign(n, 0.0);
    H.e.assign(std::max(n - 1, 0), 0.0);
    for (int e = e_lo; e <= e_hi; ++e)
      for (int g8 = 0; g8 < 8; ++g8) {
        const size_t k = 8 * static_cast<size_t>(e) + g8;
        const double t = f.pot_t[k];
        const double phi =
            std::max(std::abs((1.0 - t) * v[e] + t * v[e + 1]), v_floor);
        const double c = f.pot_w[k] * (p - 1.0) * std::pow(phi, p - 2.0);
        const bool lo_in = (e >= w.i0), hi_in = (e + 1 <= w.i1);
        if (lo_in) H.d[e - w.i0] += c * (1.0 - t) * (1.0 - t);
        if (hi_in) H.d[e + 1 - w.i0] += c * t * t;
        if (lo_in && hi_in) H.e[e - w.i0] += c * (1.0 - t) * t;
      }
  };

  RayleighResult res;
  std::vector<double> a(n), b(n), gJ(n), step(n);
  GridFn phi = u, trial = u;
  double best_value = theta;
  GridFn best_u = u;
  double dec = theta;
  // Trailing Euler-Lagrange residuals, for the stagnation guard below.
  std::vector<double> el_hist;
  int polish_cooldown = 0;  ///< power steps to run after a rejected finisher
  build_b(u, b);
  int outer = 0;
  for (; outer < opt.max_iter; ++outer) {
    const double bnorm = detail::norm2(b);
    // Inner problem: minimize J(phi) = gradient_form(phi)/p - <b, phi>.
    phi = u;
    auto Jval = [&](const GridFn& v) {
      double lin = 0.0;
      for (int i = 0; i < n; ++i) lin += b[i] * v[w.i0 + i];
      return f.gradient(v) / p - lin;
    };
    double J = Jval(phi);
    for (int newton = 0; newton < opt.newton_max; ++newton) {
      grad_G(phi, gJ);
      for (int i = 0; i < n; ++i) gJ[i] -= b[i];
      const double gn = detail::norm2(gJ);
      if (gn <= 1e-11 * std::max(bnorm, 1e-300)) break;
      detail::Tridiag H;
      hess_G(phi, H);
      detail::TridiagFactor HF;
      HF.factor(H);
      step = gJ;
      HF.solve(step);
      double slope = 0.0;  // directional derivative along -step
      for (int i = 0; i < n; ++i) slope -= gJ[i] * step[i];
      // Armijo backtracking on J.
      double t = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        trial = phi;
        for (int i = 0; i < n; ++i) trial[w.i0 + i] -= t * step[i];
        const double Jt = Jval(trial);
        if (Jt <= J + 1e-4 * t * slope) {
          phi = trial;
          J = Jt;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
    // Renormalize and measure progress.
    const double den = f.potential(phi);
    if (!(den > 0.0) || !std::isfinite(den)) break;
    const double s = std::pow(den, 1.0 / p);
    GridFn unew = phi;
    for (auto& v : unew) v /= s;
    const double tn = f.gradient(unew);
    dec = theta - tn;
    u = unew;
    theta = tn;
    if (tn < best_value) {
      best_value = tn;
      best_u = u;
    }
    // Euler-Lagrange residual at the new iterate; the refreshed b doubles as
    // the linear functional of the next outer step.
    grad_G(u, a);
    build_b(u, b);
    double rn = 0.0, an = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ri = a[i] - theta * b[i];
      rn += ri * ri;
      an += a[i] * a[i];
    }
    res.el_residual = std::sqrt(rn / std::max(an, 1e-300));
    if (res.el_residual <= opt.el_tol) {
      res.converged = true;
      ++outer;
      break;
    }
    // Quadratic finisher: the inverse-power loop above converges linearly at
    // a rate that degrades with the truncation depth, so once it has
    // localized the ground state, switch to damped Newton on the bordered
    // stationarity system
    //     grad(G/p)(u) - theta grad(P/p)(u) = 0,   potential(u) = 1,
    // the p != 2 analogue of the Rayleigh-shifted steps in the p = 2 path.
    // Each step costs two tridiagonal solves; steps that fail to reduce the
    // residual after halving yield back to the power loop.
    if (polish_cooldown > 0) --polish_cooldown;
    if (res.el_residual <= opt.polish_switch && polish_cooldown == 0) {
      detail::Tridiag HG, HP, K;
      std::vector<double> y1(n), y2(n), a2(n), b2(n);
      bool done = false;
      bool any_accepted = false;
      for (int ps = 0; ps < opt.polish_max && !done; ++ps) {
        hess_G(u, HG);
        hess_P(u, HP);
        K = HG;
        for (int i = 0; i < n; ++i) K.d[i] -= theta * HP.d[i];
        for (int i = 0; i + 1 < n; ++i) K.e[i] -= theta * HP.e[i];
        detail::TridiagFactor KF;
        KF.factor(K);
        y1.assign(n, 0.0);
        for (int i = 0; i < n; ++i) y1[i] = a[i] - theta * b[i];
        KF.solve(y1);
        y2 = b;
        KF.solve(y2);
        const double denom = detail::dot(b, y2);
        if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) break;
        // The normalization row b.du = 0 fixes the multiplier update.
        const double dth = detail::dot(b, y1) / denom;
        double tstep = 1.0;
        bool accepted = false;
        for (int half = 0; half < 6 && !accepted; ++half, tstep *= 0.5) {
          trial = u;
          for (int i = 0; i < n; ++i)
            trial[w.i0 + i] += tstep * (dth * y2[i] - y1[i]);
          const double dent = f.potential(trial);
          if (!(dent > 0.0) || !std::isfinite(dent)) continue;
          const double st = std::pow(dent, 1.0 / p);
          for (auto& vv : trial) vv /= st;
          // The finisher tracks the one-signed ground state; a trial whose
          // negative part is material is sliding toward a sign-changing
          // critical point and is rejected.
          double pk = 0.0, mx = 0.0;
          for (int i = w.i0; i <= w.i1; ++i)
            if (std::abs(trial[i]) > mx) {
              mx = std::abs(trial[i]);
              pk = trial[i];
            }
          const double orient = (pk < 0.0) ? -1.0 : 1.0;
          double viol = 0.0;
          for (int i = w.i0; i <= w.i1; ++i)
            viol = std::max(viol, -orient * trial[i]);
          if (viol > 1e-8 * mx) continue;
          const double tht = f.gradient(trial);
          grad_G(trial, a2);
          build_b(trial, b2);
          double rt = 0.0, at = 0.0;
          for (int i = 0; i < n; ++i) {
            const double ri = a2[i] - tht * b2[i];
            rt += ri * ri;
            at += a2[i] * a2[i];
          }
          const double rel = std::sqrt(rt / std::max(at, 1e-300));
          if (rel >= res.el_residual) continue;
          accepted = true;
          any_accepted = true;
          dec = theta - tht;
          u = trial;
          theta = tht;
          a.swap(a2);
          b.swap(b2);
          res.el_residual = rel;
          if (theta < best_value) {
            best_value = theta;
            best_u = u;
          }
          if (rel <= opt.el_tol) {
            res.converged = true;
            done = true;
          }
        }
        if (!accepted) break;
      }
      if (done) {
        ++outer;
        break;
      }
      // A fruitless attempt means the iterate is near a critical point the
      // guards refuse; let the globally convergent power loop move it before
      // trying again.
      if (!any_accepted) polish_cooldown = 5;
    }
    // Stagnation guard: the quotient is stationary to the decrement tolerance
    // and ten further outer steps failed to halve the residual, so the
    // iteration sits at the precision floor of this mesh.
    el_hist.push_back(res.el_residual);
    const size_t hn = el_hist.size();
    if (std::abs(dec) <= opt.tol * std::max(theta, 1e-300) && hn > 10 &&
        el_hist[hn - 1] > 0.5 * el_hist[hn - 11]) {
      res.converged = true;
      ++outer;
      break;
    }
  }

  u = best_u;
  // Sign-fix toward a nonnegative profile.
  double peak = 0.0;
  for (double v : u) if (std::abs(v) > std::abs(peak)) peak = v;
  if (peak < 0.0)
    for (auto& v : u) v = -v;

  res.minimizer = u;
  res.value = f.quotient(u);
  res.iterations = outer;
  res.final_decrement = std::abs(dec);
  // Re-evaluate the relative Euler-Lagrange residual at the returned iterate
  // (the best-value snapshot need not be the last one).
  grad_G(u, a);
  build_b(u, b);
  double rn = 0.0, an = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ri = a[i] - res.value * b[i];
    rn += ri * ri;
    an += a[i] * a[i];
  }
  res.el_residual = std::sqrt(rn / std::max(an, 1e-300));
  return res;
}

}  // namespace detail

/// Minimizes the discrete quotient over piecewise-linear functions supported
/// on the window (free nodal values there, zero outside).  The returned
/// minimizer is full-length, nonnegative up to sign normalization, with
/// denominator 1; value is the quotient of the returned minimizer.  An
/// optional full-length initial guess (values outside the window ignored)
/// warm-starts the iteration, e.g. with a minimizer transported from a
/// neighboring mesh in a truncation sweep.
inline RayleighResult minimize_quotient(const GradedMesh& mesh,
                                        const EnergyForms& forms,
                                        const SolverOptions& opt,
                                        const WindowRange& window,
                                        const GridFn* init = nullptr) {
  if (window.size() < 1)
    throw std::invalid_argument("minimize_quotient: empty admissible space");
  if (window.i0 < 0 || window.i1 > mesh.size() - 1)
    throw std::invalid_argument("minimize_quotient: window outside the mesh");
  if ((window.i0 == 0 && mesh.dirichlet_lo) ||
      (window.i1 == mesh.size() - 1 && mesh.dirichlet_hi))
    throw std::invalid_argument("minimize_quotient: window includes truncation nodes");
  RayleighResult res =
      (forms.prm.p == 2.0)
          ? detail::minimize_p2(mesh, forms, opt, window, init)
          : detail::minimize_general_p(mesh, forms, opt, window, init);
  res.mesh_summary = MeshSummary{mesh.elements(), mesh.t_min, mesh.r_max,
                                 mesh.effective_ratio, mesh.grading};
  return res;
}

inline RayleighResult minimize_quotient(const GradedMesh& mesh,
                                        const EnergyForms& forms,
                                        const SolverOptions& opt = {},
                                        const GridFn* init = nullptr) {
  return minimize_quotient(mesh, forms, opt, default_window(mesh), init);
}

inline RayleighResult minimize_quotient(const GradedMesh& mesh, const Params& prm,
                                        const SolverOptions& opt = {},
                                        const GridFn* init = nullptr) {
  return minimize_quotient(mesh, assemble_energies(mesh, prm), opt, init);
}

}  // namespace hardygap
