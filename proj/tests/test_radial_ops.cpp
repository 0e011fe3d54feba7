// Radial calculus: weighted p-Laplacian, eigen-equation residuals, the
// chain-rule spot check, sub/supersolution sign verification, the exact
// power-test quotient, and the boundary integrability probe.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardygap/radial_ops.hpp"

using namespace hardygap;

TEST_CASE("harmonic-type profiles annihilate the operator exactly") {
  // N = 3, p = 2, alpha = 0: r^-1 is harmonic away from the origin.
  const Params prm = make_params(0.0, 2.0, 3);
  const DistanceProfile ext = make_profile(make_exterior_ball(1.0), prm);
  for (double r : {1.5, 2.0, 5.0, 40.0}) {
    CHECK(radial_alpha_p_laplacian(ext, prm, power_of_r(-1.0), r) ==
          Catch::Approx(0.0).margin(1e-12));
  }

  // p = 3, N = 5: the p-harmonic radial power is nu = 1 - (N-1)/(p-1) = -1.
  const Params cubic = make_params(0.0, 3.0, 5);
  const DistanceProfile ext5 = make_profile(make_exterior_ball(1.0), cubic);
  for (double r : {2.0, 7.0, 30.0}) {
    CHECK(radial_alpha_p_laplacian(ext5, cubic, power_of_r(-1.0), r) ==
          Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("half-line power profiles solve the eigen-equation exactly") {
  // delta(t) = t with no measure weight, so delta^nu is an exact solution
  // with eigenvalue lambda_b(nu) for every nu in the monotone bracket.
  for (const Params prm : {make_params(0.0, 2.0, 3), make_params(0.5, 2.5, 2),
                           make_params(2.0, 3.0, 4)}) {
    const DistanceProfile half = make_profile(make_interval(4.0), prm);
    const double c = indicial_c(prm, Location::Boundary);
    for (int k = 0; k <= 4; ++k) {
      const double mu = c * k / 4.0;
      const double nu = indicial_root(prm, Location::Boundary, mu);
      if (nu == 0.0) continue;  // constant profile: flux vanishes identically
      const RadialFn fn = power_of_delta(half, nu);
      for (double t : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(residual(half, prm, fn, mu, t) == Catch::Approx(0.0).margin(1e-10));
      }
    }
  }
}

TEST_CASE("finite-difference route matches the analytic route") {
  const Params prm = make_params(0.5, 2.5, 3);
  const DistanceProfile ball = make_profile(make_ball(1.0), prm);
  const RadialFn exact = power_of_delta(ball, 0.7);
  const RadialFn valued{exact.f, nullptr, nullptr};
  for (double r : {0.3, 0.5, 0.8}) {
    const double a = radial_alpha_p_laplacian(ball, prm, exact, r);
    const double b = radial_alpha_p_laplacian(ball, prm, valued, r);
    CHECK(b == Catch::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("operator rejects out-of-domain, kink, and degenerate inputs") {
  const Params prm = make_params(0.0, 2.0, 3);
  const DistanceProfile ann = make_profile(make_annulus(1.0, 2.0), prm);
  const RadialFn fn = power_of_delta(ann, 0.75);
  CHECK_THROWS_AS(radial_alpha_p_laplacian(ann, prm, fn, 0.5), std::domain_error);
  CHECK_THROWS_AS(radial_alpha_p_laplacian(ann, prm, fn, 1.5), std::domain_error);
  // Value-only profiles also refuse stencils that straddle the kink.
  const RadialFn valued{fn.f, nullptr, nullptr};
  CHECK_THROWS_AS(radial_alpha_p_laplacian(ann, prm, valued, 1.5001),
                  std::domain_error);

  // p < 2 with identically vanishing gradient: |f'|^(p-2) blows up.
  const Params sub2 = make_params(0.0, 1.5, 3);
  const DistanceProfile ball = make_profile(make_ball(1.0), sub2);
  CHECK_THROWS_AS(
      radial_alpha_p_laplacian(ball, sub2, power_of_delta(ball, 0.0), 0.5),
      std::domain_error);
}

TEST_CASE("chain rule holds to second order in the step size") {
  struct Case {
    DomainSpec spec;
    Params prm;
    double nu;
    std::vector<double> radii;
  };
  const Case cases[] = {
      {make_ball(1.0), make_params(0.0, 2.0, 3), 0.5, {0.3, 0.5, 0.7}},
      {make_annulus(1.0, 2.0), make_params(1.0, 3.0, 3), 1.5, {1.2, 1.3, 1.7}},
  };
  for (const Case& c : cases) {
    const DistanceProfile profile = make_profile(c.spec, c.prm);
    const double d1 = chain_rule_check(profile, c.prm, c.nu, c.radii, 1e-3);
    const double d2 = chain_rule_check(profile, c.prm, c.nu, c.radii, 5e-4);
    if (d1 > 1e-12) {
      const double order = std::log2(d1 / d2);
      CAPTURE(d1, d2);
      CHECK(order > 1.9);
    }
  }
}

TEST_CASE("far-field power pairs act as sub/supersolutions for large radii") {
  const Params prm = make_params(0.0, 2.0, 3);
  const DistanceProfile ext = make_profile(make_exterior_ball(1.0), prm);
  const double nu = -0.5, beta = -1.2;

  double found_minus = 0.0, found_plus = 0.0;
  for (double R : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
    SignCheckOptions opt;
    opt.samples = 200;
    if (found_minus == 0.0) {
      const SignCheckReport rep = subsupersolution_sign_check(
          ext, prm, Location::Infinity, nu, beta, Branch::Minus, R, 10.0 * R, opt);
      CHECK(rep.hypothesis_ok);
      CHECK(rep.lambda_used == Catch::Approx(0.25));
      if (rep.sign_ok) found_minus = R;
    }
    if (found_plus == 0.0) {
      const SignCheckReport rep = subsupersolution_sign_check(
          ext, prm, Location::Infinity, nu, beta, Branch::Plus, R, 10.0 * R, opt);
      if (rep.sign_ok) found_plus = R;
    }
    if (found_minus > 0.0 && found_plus > 0.0) break;
  }
  CHECK(found_minus > 0.0);
  CHECK(found_minus <= 100.0);
  CHECK(found_plus > 0.0);
  CHECK(found_plus <= 100.0);
}

TEST_CASE("boundary power pairs: subsolution sign near the inner sphere") {
  const Params prm = make_params(0.0, 2.0, 3);
  const DistanceProfile ann = make_profile(make_annulus(1.0, 2.0), prm);
  const SignCheckReport rep = subsupersolution_sign_check(
      ann, prm, Location::Boundary, 0.5, 0.9, Branch::Plus, 1e-8, 1e-3);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.lambda_used == Catch::Approx(0.25));
  CHECK(rep.sign_ok);
  CHECK(rep.uniform_threshold == Catch::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("sign checks reject bad inputs and expose corrupted exponents") {
  const Params prm = make_params(0.0, 2.0, 3);
  const DistanceProfile ext = make_profile(make_exterior_ball(1.0), prm);
  // Hypothesis violations throw while enforcement is on.
  CHECK_THROWS_AS(subsupersolution_sign_check(ext, prm, Location::Infinity, -1.2,
                                              -0.5, Branch::Plus, 10.0, 100.0),
                  std::domain_error);
  // Switched off, a pair with nu outside the bracket evaluates and the
  // expected sign fails: corrupted exponents are detected, not masked.
  SignCheckOptions relaxed;
  relaxed.enforce_hypothesis = false;
  const SignCheckReport rep = subsupersolution_sign_check(
      ext, prm, Location::Infinity, -0.1, -0.5, Branch::Minus, 10.0, 100.0, relaxed);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK_FALSE(rep.sign_ok);

  // Minus candidates must stay positive on the window.
  const DistanceProfile ann = make_profile(make_annulus(1.0, 2.0), prm);
  CHECK_THROWS_AS(subsupersolution_sign_check(ann, prm, Location::Boundary, 0.9,
                                              0.5, Branch::Minus, 1e-6, 1e-2,
                                              relaxed),
                  std::domain_error);
  // Bad windows and far-field checks on bounded domains are rejected.
  CHECK_THROWS_AS(subsupersolution_sign_check(ann, prm, Location::Boundary, 0.5,
                                              0.9, Branch::Plus, 1e-2, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(subsupersolution_sign_check(ann, prm, Location::Infinity, -0.5,
                                              -1.2, Branch::Plus, 10.0, 100.0),
                  std::invalid_argument);
}

TEST_CASE("power test functions realize the quotient (eps/p)^p exactly") {
  // Divergent-integral case: both sides blow up at the same rate and the
  // quotient still converges to the closed form.
  const Params p2 = make_params(0.0, 2.0, 3);
  const DistanceProfile ball = make_profile(make_ball(1.0), p2);
  const QuotientResult q1 = power_test_quotient(ball, p2, 1.0);
  CHECK(q1.divergent);
  CHECK(q1.quotient == Catch::Approx(0.25).epsilon(1e-8));

  const DistanceProfile half = make_profile(make_interval(1.0), p2);
  const QuotientResult q2 = power_test_quotient(half, p2, 0.1);
  CHECK(q2.divergent);
  CHECK(q2.quotient == Catch::Approx(0.0025).epsilon(1e-8));

  // Convergent case: alpha + p - eps < 1 keeps both integrals finite.
  const Params neg = make_params(-2.0, 2.0, 3);
  const DistanceProfile ann = make_profile(make_annulus(1.0, 2.0), neg);
  const QuotientResult q3 = power_test_quotient(ann, neg, 0.5);
  CHECK_FALSE(q3.divergent);
  CHECK(q3.numerator > 0.0);
  CHECK(std::isfinite(q3.denominator));
  CHECK(q3.quotient == Catch::Approx(0.0625).epsilon(1e-8));

  CHECK_THROWS_AS(power_test_quotient(ball, p2, 0.0), std::invalid_argument);
  const DistanceProfile ext = make_profile(make_exterior_ball(1.0), p2);
  CHECK_THROWS_AS(power_test_quotient(ext, p2, 0.5), std::invalid_argument);
}

TEST_CASE("integrability probe classifies delta^(-a) correctly") {
  const Params prm = make_params(0.0, 2.0, 3);
  const DistanceProfile ball = make_profile(make_ball(1.0), prm);
  for (double a : {0.0, 0.25, 0.5, 0.9, 0.99}) {
    const ProbeResult res = integrability_probe(ball, a);
    CAPTURE(a);
    CHECK(res.convergent);
    CHECK(std::isfinite(res.value));
  }
  for (double a : {1.0, 1.1}) {
    const ProbeResult res = integrability_probe(ball, a);
    CAPTURE(a);
    CHECK_FALSE(res.convergent);
  }

  // a = 0 recovers volumes: |B_1| = 4 pi / 3, |B_2 \ B_1| = 28 pi / 3.
  CHECK(integrability_probe(ball, 0.0).value ==
        Catch::Approx(4.1887902047863905).epsilon(1e-6));
  const DistanceProfile ann = make_profile(make_annulus(1.0, 2.0), prm);
  CHECK(integrability_probe(ann, 0.0).value ==
        Catch::Approx(29.321531433504737).epsilon(1e-6));

  // Exterior probes integrate over the boundary collar only.
  const DistanceProfile ext = make_profile(make_exterior_ball(1.0), prm);
  CHECK(integrability_probe(ext, 0.5).convergent);
  CHECK_FALSE(integrability_probe(ext, 1.0).convergent);
  CHECK_THROWS_AS(integrability_probe(ball, -0.5), std::invalid_argument);
}
