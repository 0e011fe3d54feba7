#pragma once
// One-dimensional graded meshes for the radial variational problems: node
// ladders refined geometrically toward each distance-singular boundary
// (log-uniform in delta), truncation bookkeeping, nested bisection
// refinement, and piecewise-linear grid functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hardygap/profile.hpp"

namespace hardygap {

enum class Grading { GeometricTowardBoundary, LogTowardInfinity, Uniform };

inline const char* to_string(Grading g) {
  switch (g) {
    case Grading::GeometricTowardBoundary: return "geometric-toward-boundary";
    case Grading::LogTowardInfinity: return "log-toward-infinity";
    case Grading::Uniform: return "uniform";
  }
  return "?";
}

struct MeshOptions {
  int elements = 512;    ///< total element budget
  double t_min = 1e-6;   ///< truncation distance: delta at the cut next to each
                         ///< singular boundary
  double r_max = 0.0;    ///< outer truncation radius (exterior domains only)
};

/// Nodal values of a piecewise-linear function on a GradedMesh.
using GridFn = std::vector<double>;

struct GradedMesh {
  std::vector<double> nodes;  ///< strictly increasing radii
  DistanceProfile profile;
  Grading grading = Grading::Uniform;
  double t_min = 0.0;
  double r_max = 0.0;            ///< outer cutoff (exterior); nodes.back() otherwise
  double effective_ratio = 1.0;  ///< realized geometric step ratio in delta
  bool dirichlet_lo = true;      ///< zero boundary condition at the first node
  bool dirichlet_hi = true;      ///< zero boundary condition at the last node

  int size() const { return static_cast<int>(nodes.size()); }
  int elements() const { return size() - 1; }

  /// Base admissibility mask: true where nodal values are free unknowns.
  std::vector<char> free_mask() const {
    std::vector<char> mask(nodes.size(), 1);
    if (!mask.empty()) {
      if (dirichlet_lo) mask.front() = 0;
      if (dirichlet_hi) mask.back() = 0;
    }
    return mask;
  }
};

namespace detail {

/// Geometric delta-ladder t_min * g^j, j = 0..m, with g solving t_min * g^m = span.
inline std::vector<double> delta_ladder(double t_min, double span, int m) {
  const double g = std::pow(span / t_min, 1.0 / m);
  std::vector<double> d(m + 1);
  d[0] = t_min;
  for (int j = 1; j < m; ++j) d[j] = t_min * std::pow(g, j);
  d[m] = span;  // exact endpoint
  return d;
}

inline void check_mesh_options(const MeshOptions& opt, double span) {
  if (opt.elements < 8)
    throw std::invalid_argument("build_mesh: need at least 8 elements");
  if (!(opt.t_min > 0.0) || !(opt.t_min < 0.5 * span))
    throw std::invalid_argument("build_mesh: t_min must lie in (0, span/2)");
}

}  // namespace detail

/// Builds the graded mesh for a radial domain.  Nodes are log-uniform in the
/// boundary distance toward every distance-singular boundary (the realized
/// ratio is recorded); kink radii are always nodes; truncation nodes carry
/// zero boundary conditions, interior geometric boundaries (the center of a
/// ball) stay free.  Exterior domains need opt.r_max > R: a single log ladder
/// in delta = r - R serves as both the boundary collar and the far-field tail.
inline GradedMesh build_mesh(const DomainSpec& spec, const Params& prm,
                             const MeshOptions& opt) {
  validate(spec);
  GradedMesh mesh;
  mesh.profile = make_profile(spec, prm);
  mesh.t_min = opt.t_min;

  switch (spec.kind) {
    case DomainKind::Interval: {
      if (spec.half_line) {
        detail::check_mesh_options(opt, 2.0 * spec.r1);  // one-sided: allow t_min < b/2
        if (!(opt.t_min < spec.r1))
          throw std::invalid_argument("build_mesh: t_min must be below the window top");
        mesh.nodes = detail::delta_ladder(opt.t_min, spec.r1, opt.elements);
        mesh.grading = Grading::GeometricTowardBoundary;
        mesh.dirichlet_lo = true;   // delta-truncation
        mesh.dirichlet_hi = true;   // artificial window top
      } else {
        detail::check_mesh_options(opt, 0.5 * spec.r1);
        const int half = (opt.elements + 1) / 2;
        const auto d = detail::delta_ladder(opt.t_min, 0.5 * spec.r1, half);
        mesh.nodes.reserve(2 * half + 1);
        for (int j = 0; j <= half; ++j) mesh.nodes.push_back(d[j]);
        for (int j = half - 1; j >= 0; --j) mesh.nodes.push_back(spec.r1 - d[j]);
        mesh.grading = Grading::GeometricTowardBoundary;
        mesh.dirichlet_lo = mesh.dirichlet_hi = true;
      }
      break;
    }
    case DomainKind::Ball: {
      detail::check_mesh_options(opt, spec.r1);
      const auto d = detail::delta_ladder(opt.t_min, spec.r1, opt.elements);
      mesh.nodes.reserve(d.size());
      for (auto it = d.rbegin(); it != d.rend(); ++it)
        mesh.nodes.push_back(spec.r1 - *it);  // delta = R at the center -> r = 0
      mesh.grading = Grading::GeometricTowardBoundary;
      mesh.dirichlet_lo = false;  // the center is an interior point
      mesh.dirichlet_hi = true;
      break;
    }
    case DomainKind::Annulus: {
      detail::check_mesh_options(opt, 0.5 * (spec.r1 - spec.r0));
      const int half = (opt.elements + 1) / 2;
      const auto d = detail::delta_ladder(opt.t_min, 0.5 * (spec.r1 - spec.r0), half);
      mesh.nodes.reserve(2 * half + 1);
      for (int j = 0; j <= half; ++j) mesh.nodes.push_back(spec.r0 + d[j]);
      for (int j = half - 1; j >= 0; --j) mesh.nodes.push_back(spec.r1 - d[j]);
      mesh.grading = Grading::GeometricTowardBoundary;
      mesh.dirichlet_lo = mesh.dirichlet_hi = true;
      break;
    }
    case DomainKind::ExteriorBall: {
      if (!(opt.r_max > spec.r0))
        throw std::invalid_argument("build_mesh: exterior domains need r_max > R");
      if (!(opt.t_min > 0.0) || !(opt.t_min < opt.r_max - spec.r0))
        throw std::invalid_argument("build_mesh: t_min must lie in (0, r_max - R)");
      if (opt.elements < 8)
        throw std::invalid_argument("build_mesh: need at least 8 elements");
      const auto d = detail::delta_ladder(opt.t_min, opt.r_max - spec.r0, opt.elements);
      mesh.nodes.reserve(d.size());
      for (double dj : d) mesh.nodes.push_back(spec.r0 + dj);
      mesh.grading = Grading::LogTowardInfinity;
      mesh.dirichlet_lo = mesh.dirichlet_hi = true;
      break;
    }
  }

  mesh.r_max = mesh.nodes.back();
  // Realized per-element growth of the delta ladder (diagnostic).
  mesh.effective_ratio =
      (mesh.nodes[1] - mesh.nodes[0]) > 0.0 && mesh.size() > 2
          ? (mesh.nodes[2] - mesh.nodes[1]) / (mesh.nodes[1] - mesh.nodes[0])
          : 1.0;
  if (mesh.effective_ratio < 1.0 && spec.kind == DomainKind::Ball)
    mesh.effective_ratio = 1.0 / mesh.effective_ratio;  // ladder runs reversed
  return mesh;
}

/// Nested refinement: every element is bisected at its arithmetic midpoint,
/// so the coarse piecewise-linear space embeds in the fine one.
inline GradedMesh refine(const GradedMesh& mesh) {
  GradedMesh fine = mesh;
  fine.nodes.clear();
  fine.nodes.reserve(2 * mesh.nodes.size() - 1);
  for (size_t i = 0; i + 1 < mesh.nodes.size(); ++i) {
    fine.nodes.push_back(mesh.nodes[i]);
    fine.nodes.push_back(0.5 * (mesh.nodes[i] + mesh.nodes[i + 1]));
  }
  fine.nodes.push_back(mesh.nodes.back());
  fine.effective_ratio = std::sqrt(mesh.effective_ratio);
  return fine;
}

/// Dilation r -> s*r of the whole problem: domain, mesh, and truncation all
/// scale together (used by the scale-invariance checks).
inline GradedMesh dilate(const GradedMesh& mesh, const Params& prm, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dilate: need s > 0");
  DomainSpec spec = mesh.profile.spec;
  spec.r0 *= s;
  spec.r1 *= s;
  GradedMesh out = mesh;
  out.profile = make_profile(spec, prm);
  for (double& r : out.nodes) r *= s;
  out.t_min *= s;
  out.r_max *= s;
  return out;
}

/// Samples a radial callable at the nodes.
inline GridFn interpolate(const GradedMesh& mesh,
                          const std::function<double(double)>& f) {
  GridFn v(mesh.nodes.size());
  for (size_t i = 0; i < mesh.nodes.size(); ++i) v[i] = f(mesh.nodes[i]);
  return v;
}

/// Piecewise-linear evaluation of nodal values at radius r, clamped to the
/// endpoint values outside the node range (zero there when the ends carry
/// truncation nodes).  Used to transport minimizers between sweep meshes.
inline double eval_linear(const GradedMesh& mesh, const GridFn& v, double r) {
  const std::vector<double>& x = mesh.nodes;
  if (v.size() != x.size())
    throw std::invalid_argument("eval_linear: nodal size mismatch");
  if (r <= x.front()) return v.front();
  if (r >= x.back()) return v.back();
  const size_t e =
      static_cast<size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin()) -
      1;
  const double t = (r - x[e]) / (x[e + 1] - x[e]);
  return (1.0 - t) * v[e] + t * v[e + 1];
}

/// Zeroes the nodal values at truncation nodes (conforming admissibility).
inline void apply_dirichlet(const GradedMesh& mesh, GridFn& v) {
  if (v.size() != mesh.nodes.size())
    throw std::invalid_argument("apply_dirichlet: size mismatch");
  if (mesh.dirichlet_lo) v.front() = 0.0;
  if (mesh.dirichlet_hi) v.back() = 0.0;
}

/// Piecewise-linear evaluation at radius r (clamped to the mesh span).
inline double evaluate(const GradedMesh& mesh, const GridFn& v, double r) {
  if (v.size() != mesh.nodes.size())
    throw std::invalid_argument("evaluate: size mismatch");
  const auto& x = mesh.nodes;
  if (r <= x.front()) return v.front();
  if (r >= x.back()) return v.back();
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const size_t i = static_cast<size_t>(it - x.begin()) - 1;
  const double t = (r - x[i]) / (x[i + 1] - x[i]);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

}  // namespace hardygap
