// Graded meshes and the discrete Rayleigh-quotient minimizer.
//
// Solver oracle: on the truncated half-line window (t, b) with zero boundary
// values and weights delta^0 / delta^-2 (alpha = 0, p = 2), the substitution
// y = log r turns the problem into the Dirichlet Laplacian on (0, L) with
// L = log(b/t), so the exact lowest value is 1/4 + (pi/L)^2.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "hardygap/mesh.hpp"
#include "hardygap/rayleigh.hpp"

using namespace hardygap;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("mesh construction per domain kind") {
  const Params prm = make_params(0.0, 2.0, 3);

  SECTION("half-line ladder runs from t_min to the window top") {
    MeshOptions opt;
    opt.elements = 64;
    opt.t_min = 1e-4;
    const GradedMesh mesh = build_mesh(make_interval(1.0), prm, opt);
    CHECK(mesh.size() == 65);
    CHECK(mesh.nodes.front() == Catch::Approx(1e-4));
    CHECK(mesh.nodes.back() == Catch::Approx(1.0));
    CHECK(mesh.dirichlet_lo);
    CHECK(mesh.dirichlet_hi);
    CHECK(mesh.grading == Grading::GeometricTowardBoundary);
    CHECK(std::is_sorted(mesh.nodes.begin(), mesh.nodes.end()));
    // Log-uniform ladder: constant ratio of consecutive steps.
    CHECK(mesh.effective_ratio == Catch::Approx((mesh.nodes[2] - mesh.nodes[1]) /
                                                (mesh.nodes[1] - mesh.nodes[0])));
    CHECK(mesh.effective_ratio > 1.0);
  }

  SECTION("ball meshes keep the center free") {
    MeshOptions opt;
    opt.elements = 32;
    opt.t_min = 1e-3;
    const GradedMesh mesh = build_mesh(make_ball(1.0), prm, opt);
    CHECK(mesh.nodes.front() == Catch::Approx(0.0));
    CHECK(mesh.nodes.back() == Catch::Approx(1.0 - 1e-3));
    CHECK_FALSE(mesh.dirichlet_lo);
    CHECK(mesh.dirichlet_hi);
    const auto mask = mesh.free_mask();
    CHECK(mask.front() == 1);
    CHECK(mask.back() == 0);
  }

  SECTION("annulus meshes contain the kink radius as a node") {
    MeshOptions opt;
    opt.elements = 32;
    opt.t_min = 1e-3;
    const GradedMesh mesh = build_mesh(make_annulus(1.0, 2.0), prm, opt);
    CHECK(mesh.nodes.front() == Catch::Approx(1.0 + 1e-3));
    CHECK(mesh.nodes.back() == Catch::Approx(2.0 - 1e-3));
    CHECK(std::count(mesh.nodes.begin(), mesh.nodes.end(), 1.5) == 1);
    CHECK(mesh.dirichlet_lo);
    CHECK(mesh.dirichlet_hi);
  }

  SECTION("exterior meshes need an outer cutoff") {
    MeshOptions opt;
    opt.elements = 32;
    opt.t_min = 1e-3;
    CHECK_THROWS_AS(build_mesh(make_exterior_ball(1.0), prm, opt),
                    std::invalid_argument);
    opt.r_max = 100.0;
    const GradedMesh mesh = build_mesh(make_exterior_ball(1.0), prm, opt);
    CHECK(mesh.nodes.front() == Catch::Approx(1.0 + 1e-3));
    CHECK(mesh.nodes.back() == Catch::Approx(100.0));
    CHECK(mesh.grading == Grading::LogTowardInfinity);
    CHECK(mesh.r_max == Catch::Approx(100.0));
  }

  SECTION("option validation") {
    MeshOptions opt;
    opt.elements = 4;  // too few
    opt.t_min = 1e-3;
    CHECK_THROWS_AS(build_mesh(make_ball(1.0), prm, opt), std::invalid_argument);
    opt.elements = 32;
    opt.t_min = 0.3;  // not below half the annulus gap
    CHECK_THROWS_AS(build_mesh(make_annulus(1.0, 2.0), prm, opt),
                    std::invalid_argument);
  }
}

TEST_CASE("refinement is nested and halves the step ratio") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 16;
  opt.t_min = 1e-3;
  const GradedMesh coarse = build_mesh(make_interval(1.0), prm, opt);
  const GradedMesh fine = refine(coarse);
  REQUIRE(fine.size() == 2 * coarse.size() - 1);
  for (int i = 0; i < coarse.size(); ++i)
    CHECK(fine.nodes[2 * static_cast<size_t>(i)] == coarse.nodes[i]);
  CHECK(fine.effective_ratio == Catch::Approx(std::sqrt(coarse.effective_ratio)));
}

TEST_CASE("grid functions: interpolation, evaluation, boundary conditions") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 16;
  opt.t_min = 1e-2;
  const GradedMesh mesh = build_mesh(make_interval(1.0), prm, opt);
  GridFn v = interpolate(mesh, [](double r) { return r * r; });
  CHECK(evaluate(mesh, v, mesh.nodes[3]) == Catch::Approx(mesh.nodes[3] * mesh.nodes[3]));
  const double mid = 0.5 * (mesh.nodes[3] + mesh.nodes[4]);
  CHECK(evaluate(mesh, v, mid) ==
        Catch::Approx(0.5 * (v[3] + v[4])));  // linear between nodes
  CHECK(evaluate(mesh, v, 0.0) == v.front());  // clamped
  apply_dirichlet(mesh, v);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 0.0);
  GridFn bad(3, 1.0);
  CHECK_THROWS_AS(evaluate(mesh, bad, 0.5), std::invalid_argument);
}

TEST_CASE("energy forms reproduce exact integrals of the identity profile") {
  // Half-line, alpha = 0, p = 2: v(r) = r has slope one, so both the gradient
  // and the potential integral equal b - t exactly.
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 64;
  opt.t_min = 1e-3;
  const GradedMesh mesh = build_mesh(make_interval(1.0), prm, opt);
  const EnergyForms forms = assemble_energies(mesh, prm);
  const GridFn v = interpolate(mesh, [](double r) { return r; });
  CHECK(forms.gradient(v) == Catch::Approx(1.0 - 1e-3).epsilon(1e-12));
  CHECK(forms.potential(v) == Catch::Approx(1.0 - 1e-3).epsilon(1e-10));
  CHECK(forms.quotient(v) == Catch::Approx(1.0).epsilon(1e-10));

  const GridFn zero(static_cast<size_t>(mesh.size()), 0.0);
  CHECK_THROWS_AS(forms.quotient(zero), std::invalid_argument);
}

TEST_CASE("assembly reports the offending element on weight overflow") {
  const Params heavy = make_params(250.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 32;
  opt.t_min = 1e-6;
  const GradedMesh mesh = build_mesh(make_interval(1.0), heavy, opt);
  CHECK_THROWS_WITH(assemble_energies(mesh, heavy), ContainsSubstring("element"));
}

TEST_CASE("quotients are invariant under domain dilation") {
  const Params prm = make_params(1.5, 2.5, 3);
  MeshOptions opt;
  opt.elements = 128;
  opt.t_min = 1e-4;
  const GradedMesh mesh = build_mesh(make_annulus(0.5, 2.0), prm, opt);
  const GradedMesh scaled = dilate(mesh, prm, 2.7);
  const GridFn v = tent_init(mesh, default_window(mesh));
  const double q0 = assemble_energies(mesh, prm).quotient(v);
  const double q1 = assemble_energies(scaled, prm).quotient(v);
  CHECK(q1 == Catch::Approx(q0).epsilon(1e-10));
  CHECK_THROWS_AS(dilate(mesh, prm, 0.0), std::invalid_argument);
}

TEST_CASE("p = 2 minimizer matches the exact truncated eigenvalue") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 512;
  opt.t_min = 1e-6;
  const GradedMesh mesh = build_mesh(make_interval(1.0), prm, opt);
  const RayleighResult res = minimize_quotient(mesh, prm);

  const double L = std::log(1.0 / 1e-6);
  const double exact = 0.25 + std::pow(3.14159265358979323846 / L, 2);
  CHECK(res.converged);
  CHECK(res.value == Catch::Approx(exact).epsilon(1e-3));
  CHECK(res.el_residual <= 1e-10);
  CHECK(res.iterations < 500);
  // Normalized minimizer: unit denominator, zero at the cutoffs, one-signed.
  const EnergyForms forms = assemble_energies(mesh, prm);
  CHECK(forms.potential(res.minimizer) == Catch::Approx(1.0).epsilon(1e-8));
  CHECK(res.minimizer.front() == 0.0);
  CHECK(res.minimizer.back() == 0.0);
  for (double u : res.minimizer) CHECK(u >= -1e-12);
  CHECK(res.mesh_summary.elements == 512);
  CHECK(res.mesh_summary.grading == Grading::GeometricTowardBoundary);
}

TEST_CASE("refining the mesh can only lower the discrete minimum") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 64;
  opt.t_min = 1e-3;
  const GradedMesh coarse = build_mesh(make_interval(1.0), prm, opt);
  const GradedMesh fine = refine(coarse);
  const double v0 = minimize_quotient(coarse, prm).value;
  const double v1 = minimize_quotient(fine, prm).value;
  CHECK(v1 <= v0 + 1e-12);  // nested admissible spaces
}

TEST_CASE("general-p minimizer: convergence and truncation monotonicity") {
  const Params prm = make_params(0.5, 2.5, 3);
  const double c1 = c_const(prm, 1);  // half-line constant (0.8)^2.5

  MeshOptions opt;
  opt.elements = 256;
  opt.t_min = 1e-4;
  const GradedMesh mesh = build_mesh(make_interval(1.0), prm, opt);
  const RayleighResult res = minimize_quotient(mesh, prm);
  CHECK(res.converged);
  CHECK(res.el_residual <= 1e-6);
  CHECK(res.value > c1);         // truncation can only raise the infimum
  CHECK(res.value < 1.6 * c1);   // ... but stays in the expected ballpark
  const EnergyForms forms = assemble_energies(mesh, prm);
  CHECK(forms.potential(res.minimizer) == Catch::Approx(1.0).epsilon(1e-8));
  for (double u : res.minimizer) CHECK(u >= -1e-12);

  // Deeper truncation enlarges the admissible space.
  opt.t_min = 1e-2;
  const GradedMesh shallow = build_mesh(make_interval(1.0), prm, opt);
  CHECK(res.value <= minimize_quotient(shallow, prm).value + 1e-9);
}

TEST_CASE("window validation") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions opt;
  opt.elements = 32;
  opt.t_min = 1e-3;
  const GradedMesh mesh = build_mesh(make_interval(1.0), prm, opt);
  const EnergyForms forms = assemble_energies(mesh, prm);
  SolverOptions sopt;
  CHECK_THROWS_AS(minimize_quotient(mesh, forms, sopt, WindowRange{5, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimize_quotient(mesh, forms, sopt, WindowRange{0, 5}),
                  std::invalid_argument);  // includes the truncation node
  CHECK_THROWS_AS(minimize_quotient(mesh, forms, sopt, WindowRange{1, mesh.size()}),
                  std::invalid_argument);
  CHECK_NOTHROW(minimize_quotient(mesh, forms, sopt, WindowRange{1, mesh.size() - 2}));
}
