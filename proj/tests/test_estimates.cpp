// Truncation sweeps and extrapolation, collar constants, decay-exponent fits,
// and the mesh-refinement study.
//
// Numeric oracle used throughout: on the half-line window (t, b) with p = 2
// and alpha = 0 the exact truncated minimum is 1/4 + (pi / log(b/t))^2, so
// the 1/L^2 extrapolation must recover 1/4 and fixed-cutoff refinement
// studies must recover the closed-form truncated value.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "hardygap/estimates.hpp"

using namespace hardygap;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("truncation fit recovers synthetic 1/L^2 data") {
  SECTION("pure model data: exact intercept") {
    std::vector<SweepPoint> sweep;
    for (double L : {5.0, 7.0, 9.0, 11.0})
      sweep.push_back({L, std::exp(-L), 0.0, 0.25 + 3.0 / (L * L), true, 1});
    const ExtrapolatedValue fit = fit_truncation_limit(sweep);
    CHECK_FALSE(fit.used_extended);
    CHECK(fit.value == Catch::Approx(0.25).margin(1e-12));
    CHECK(fit.fit_rms < 1e-12);
    CHECK(fit.sweep.size() == 4);
  }

  SECTION("five or more points enable the extended model") {
    std::vector<SweepPoint> sweep;
    for (double L : {5.0, 6.5, 8.0, 9.5, 11.0})
      sweep.push_back(
          {L, 0.0, 0.0, 0.1 + 2.0 / (L * L) - 5.0 / (L * L * L), true, 1});
    const ExtrapolatedValue fit = fit_truncation_limit(sweep);
    CHECK(fit.used_extended);
    CHECK(fit.intercept_extended == Catch::Approx(0.1).margin(1e-10));
    CHECK(fit.value == Catch::Approx(0.1).margin(1e-10));
    // The pure-quadratic fit misses the cubic term; the spread feeds the error.
    CHECK(fit.error_estimate >=
          std::abs(fit.intercept_extended - fit.intercept_linear));
  }

  SECTION("negative intercepts clamp to zero and inflate the error") {
    std::vector<SweepPoint> sweep;
    for (double L : {5.0, 7.0, 9.0})
      sweep.push_back({L, 0.0, 0.0, -0.1 + 1.0 / (L * L), true, 1});
    const ExtrapolatedValue fit = fit_truncation_limit(sweep);
    CHECK(fit.value == 0.0);
    CHECK(fit.error_estimate >= 0.1 - 1e-12);
  }

  SECTION("input validation") {
    CHECK_THROWS_AS(fit_truncation_limit({{5.0, 0, 0, 1.0, true, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_truncation_limit(
                        {{5.0, 0, 0, 1.0, true, 1}, {0.0, 0, 0, 1.0, true, 1}}),
                    std::invalid_argument);
  }
}

TEST_CASE("hardy estimate extrapolates the half-line constant") {
  HardyOptions opt;
  opt.elements = 256;
  opt.levels = 4;
  opt.L0 = 5.0;
  opt.dL = 2.0;
  const Params prm = make_params(0.0, 2.0, 3);
  const HardyEstimate est = hardy_estimate(make_interval(1.0), prm, opt);
  // Truncated values follow 1/4 + (pi/L)^2 exactly, so the fit nails 1/4.
  CHECK(est.estimate.value == Catch::Approx(0.25).margin(2e-3));
  REQUIRE(est.estimate.sweep.size() == 4);
  CHECK(est.estimate.sweep.front().L == 5.0);
  CHECK(est.estimate.sweep.back().L == 11.0);
  for (const SweepPoint& sp : est.estimate.sweep) {
    CHECK(sp.converged);
    CHECK(sp.value == Catch::Approx(0.25 + std::pow(kPi / sp.L, 2)).epsilon(5e-3));
  }
  CHECK(est.finest.converged);
  CHECK(est.finest_mesh.t_min == Catch::Approx(std::exp(-11.0)));

  HardyOptions bad = opt;
  bad.levels = 1;
  CHECK_THROWS_AS(hardy_estimate(make_interval(1.0), prm, bad),
                  std::invalid_argument);
}

TEST_CASE("hardy estimate accepts explicit cutoff sequences") {
  const Params prm = make_params(0.0, 2.0, 3);
  const HardyEstimate est = hardy_estimate(
      make_interval(1.0), prm, {1e-3, 1e-4, 1e-5}, {}, 256);
  CHECK(est.estimate.value == Catch::Approx(0.25).margin(5e-3));
  CHECK(est.estimate.sweep.size() == 3);
  // Depths are sorted even if the cutoffs were not.
  CHECK(est.estimate.sweep.front().L < est.estimate.sweep.back().L);

  // Exterior domains tie the outer cutoff to the same depth by default.
  const HardyEstimate ext = hardy_estimate(
      make_exterior_ball(1.0), prm, {std::exp(-5.0), std::exp(-7.0)}, {}, 192);
  CHECK(ext.estimate.sweep.front().r_max == Catch::Approx(std::exp(5.0)));
  CHECK(ext.estimate.sweep.back().r_max == Catch::Approx(std::exp(7.0)));
  CHECK(ext.estimate.value > 0.0);
  CHECK(ext.estimate.value < 0.26);  // bounded by c_min = 1/4

  CHECK_THROWS_AS(hardy_estimate(make_interval(1.0), prm, {1e-3}, {}, 64),
                  std::invalid_argument);
  CHECK_THROWS_AS(hardy_estimate(make_interval(1.0), prm, {0.9, 1e-3}, {}, 64),
                  std::invalid_argument);  // depth <= 1
  CHECK_THROWS_AS(
      hardy_estimate(make_exterior_ball(1.0), prm, {1e-3, 1e-4}, {100.0}, 64),
      std::invalid_argument);  // unpaired outer cutoffs
}

TEST_CASE("collar windows: component geometry and validation") {
  const Params prm = make_params(0.0, 2.0, 3);

  SECTION("half-line boundary collar is a single run at the wall") {
    MeshOptions mo;
    mo.elements = 64;
    mo.t_min = 1e-4;
    const GradedMesh mesh = build_mesh(make_interval(1.0), prm, mo);
    const auto windows = collar_windows(mesh, CollarSide::Boundary, 0.01);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].i0 == 1);  // starts right after the truncation node
    CHECK(windows[0].size() >= 8);
    for (int i = windows[0].i0; i <= windows[0].i1; ++i)
      CHECK(mesh.profile.delta(mesh.nodes[i]) < 0.01);
    // The bulk-facing end keeps one buffer node inside the collar.
    CHECK(mesh.profile.delta(mesh.nodes[windows[0].i1 + 1]) < 0.01);
    CHECK(mesh.profile.delta(mesh.nodes[windows[0].i1 + 2]) >= 0.01);
  }

  SECTION("annulus boundary collar has one component per sphere") {
    MeshOptions mo;
    mo.elements = 128;
    mo.t_min = 1e-4;
    const GradedMesh mesh = build_mesh(make_annulus(1.0, 2.0), prm, mo);
    const auto windows = collar_windows(mesh, CollarSide::Boundary, 0.1);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].i1 < windows[1].i0);
  }

  SECTION("tail collar collects the far-field nodes") {
    MeshOptions mo;
    mo.elements = 128;
    mo.t_min = 1e-3;
    mo.r_max = 100.0;
    const GradedMesh mesh = build_mesh(make_exterior_ball(1.0), prm, mo);
    const auto windows = collar_windows(mesh, CollarSide::Tail, 10.0);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].i1 == mesh.size() - 2);
    CHECK(mesh.nodes[windows[0].i0] > 10.0);
    CHECK_THROWS_AS(collar_windows(mesh, CollarSide::Tail, 0.5),
                    std::invalid_argument);
  }

  SECTION("degenerate requests are rejected") {
    MeshOptions mo;
    mo.elements = 64;
    mo.t_min = 1e-4;
    const GradedMesh mesh = build_mesh(make_interval(1.0), prm, mo);
    CHECK_THROWS_AS(collar_windows(mesh, CollarSide::Boundary, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(collar_windows(mesh, CollarSide::Tail, 0.5),
                    std::invalid_argument);
    // A collar thinner than a few mesh cells cannot host test functions.
    CHECK_THROWS_AS(collar_windows(mesh, CollarSide::Boundary, 2e-4),
                    std::runtime_error);
  }
}

TEST_CASE("collar constants increase as the collar narrows") {
  const Params prm = make_params(0.0, 2.0, 3);
  CollarOptions opt;
  opt.elements = 384;
  opt.levels = 3;
  opt.L0 = 4.0;
  opt.dL = 1.5;
  const ExtrapolatedValue wide =
      collar_constant(make_annulus(1.0, 2.0), prm, CollarSide::Boundary, 0.4, opt);
  const ExtrapolatedValue narrow =
      collar_constant(make_annulus(1.0, 2.0), prm, CollarSide::Boundary, 0.1, opt);
  // Shrinking the support can only raise the infimum; the limit is the
  // boundary model constant 1/4.
  CHECK(narrow.value + 1e-2 > wide.value);
  CHECK(narrow.value == Catch::Approx(0.25).epsilon(0.10));
  CHECK(narrow.value < 0.27);
}

TEST_CASE("decay-exponent fit recovers power laws") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions mo;
  mo.elements = 64;
  mo.t_min = 1e-6;
  const GradedMesh mesh = build_mesh(make_interval(1.0), prm, mo);

  const GridFn pure =
      interpolate(mesh, [](double r) { return std::pow(r, 0.75); });
  const DecayFit fit = decay_exponent(mesh, pure, Location::Boundary, 1e-5, 1e-2);
  CHECK(fit.slope == Catch::Approx(0.75).margin(1e-10));
  CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
  CHECK(fit.points >= 3);

  // A lower-order correction shifts the slope only slightly on a deep window.
  const GridFn mixed = interpolate(
      mesh, [](double r) { return 3.0 * std::sqrt(r) * (1.0 + r); });
  const DecayFit fit2 =
      decay_exponent(mesh, mixed, Location::Boundary, 1e-6, 1e-2);
  CHECK(fit2.slope == Catch::Approx(0.5).margin(0.01));
  CHECK(fit2.r_squared > 0.999);

  GridFn touched = pure;
  touched[5] = 0.0;
  CHECK_THROWS_AS(decay_exponent(mesh, touched, Location::Boundary,
                                 mesh.nodes[4], mesh.nodes[8]),
                  std::domain_error);
  CHECK_THROWS_AS(decay_exponent(mesh, pure, Location::Boundary, 0.5, 0.50001),
                  std::invalid_argument);  // fewer than 3 nodes
  CHECK_THROWS_AS(decay_exponent(mesh, pure, Location::Infinity, 1e-5, 1e-2),
                  std::invalid_argument);  // far field needs exterior domain

  MeshOptions ext_mo;
  ext_mo.elements = 64;
  ext_mo.t_min = 1e-2;
  ext_mo.r_max = 1e4;
  const GradedMesh ext = build_mesh(make_exterior_ball(1.0), prm, ext_mo);
  const GridFn far = interpolate(ext, [](double r) { return std::pow(r, -0.75); });
  const DecayFit ffit = decay_exponent(ext, far, Location::Infinity, 1e2, 1e4);
  CHECK(ffit.slope == Catch::Approx(-0.75).margin(1e-6));
}

TEST_CASE("refinement study converges to the exact truncated value") {
  const Params prm = make_params(0.0, 2.0, 3);
  MeshOptions base;
  base.elements = 64;
  base.t_min = 1e-3;
  const RefinementStudy study =
      refinement_study(make_interval(1.0), prm, base, 4);
  REQUIRE(study.results.size() == 4);
  for (size_t k = 1; k < study.results.size(); ++k)
    CHECK(study.results[k].value <= study.results[k - 1].value + 1e-12);

  const double L = std::log(1e3);
  const double exact = 0.25 + std::pow(kPi / L, 2);
  CHECK(study.extrapolated == Catch::Approx(exact).epsilon(1e-2));
  CHECK(study.observed_order == Catch::Approx(2.0).margin(0.5));

  CHECK_THROWS_AS(refinement_study(make_interval(1.0), prm, base, 1),
                  std::invalid_argument);
}
