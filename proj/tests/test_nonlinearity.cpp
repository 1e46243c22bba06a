#include "hartree/error.hpp"
#include "hartree/nonlinearity.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace hartree;

namespace {

const Point kMid{0.5, 0.0};

NonlinearitySpec cubic_declared(double r) {
  auto spec = builtin("power", 1, 3.0);
  spec.kind = "custom";
  spec.f = [](const Point&, double s) { return s * s * s; };
  spec.primitive = [](const Point&, double s) { return s * s * s * s / 4; };
  spec.sigma = [](const Point&, double s) { return s * s * s * s / 2; };
  spec.exponent = r;
  return spec;
}

}  // namespace

TEST_CASE("built-in primitives and sigma") {
  const auto power = builtin("power", 1, 3.0);
  CHECK(power.eval_sigma(kMid, 2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(power.eval_F(kMid, -2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(power.eval_f(kMid, -2.0) == doctest::Approx(-4.0).epsilon(1e-14));
  const auto loglike = builtin("loglike", 2);
  CHECK(loglike.eval_sigma({0.3, 0.7}, 1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  CHECK(loglike.eval_F(kMid, 1.0) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-14));
  for (const auto* name : {"power", "loglike", "zero"}) {
    const auto spec = builtin(name, 1);
    CHECK(spec.eval_sigma(kMid, 0.0) == 0.0);
    CHECK(spec.eval_f(kMid, 0.0) == 0.0);
  }
  // Small-argument branches join the closed forms smoothly.
  for (double s : {0.0316, 0.0317}) {
    const double x = s * s;
    CHECK(loglike.eval_sigma(kMid, s) == doctest::Approx(x - std::log1p(x)).epsilon(1e-9));
  }
}

TEST_CASE("built-in validation") {
  CHECK_THROWS_AS(builtin("power", 1, 2.0), ValidationError);
  CHECK_THROWS_AS(builtin("power", 2, 4.0), ValidationError);
  CHECK_NOTHROW(builtin("power", 2, 3.9));
  CHECK_NOTHROW(builtin("power", 1, 50.0));
  CHECK_THROWS_AS(builtin("power", 3), ValidationError);
  CHECK_THROWS(builtin("cubic", 1));
  CHECK(critical_exponent(2) == 4.0);
  CHECK(std::isinf(critical_exponent(1)));
}

TEST_CASE("built-ins satisfy every hypothesis") {
  const OperatorParams params{1.0, 0.5, 1.0};
  for (int d : {1, 2})
    for (const auto* name : {"power", "loglike"}) {
      const auto spec = builtin(name, d);
      CHECK(check_growth(spec, 7, 2000).verdict == Verdict::pass);
      CHECK(check_superquadratic(spec, 1e6).verdict == Verdict::pass);
      CHECK(check_quasimonotone(spec, 7, 2000).verdict == Verdict::pass);
      CHECK(check_small_s(spec, params).verdict == Verdict::pass);
    }
}

TEST_CASE("growth fails when the declared exponent is too small") {
  const auto report = check_growth(cubic_declared(2.5), 1, 1000);
  CHECK(report.verdict == Verdict::fail);
  CHECK(report.margin < 0.0);
  CHECK(std::abs(report.witness_s) > 1.0);
  CHECK(check_growth(cubic_declared(4.0), 1, 1000).verdict == Verdict::pass);
}

TEST_CASE("purely quadratic primitive is not superquadratic") {
  auto spec = builtin("power", 1, 3.0);
  const double theta = 0.3;
  spec.f = [theta](const Point&, double s) { return theta * s; };
  spec.primitive = [theta](const Point&, double s) { return 0.5 * theta * s * s; };
  spec.sigma = [](const Point&, double) { return 0.0; };
  CHECK(check_superquadratic(spec, 1e6).verdict == Verdict::fail);
  CHECK_THROWS_AS(check_superquadratic(spec, 1.0), ValidationError);
}

TEST_CASE("quasi-monotonicity detects a dip deeper than beta*") {
  auto spec = builtin("power", 1, 3.0);
  spec.sigma = [](const Point&, double s) {
    const double a = std::abs(s);
    return a - 2.0 * std::exp(-std::pow((a - 3.0) / 0.3, 2));
  };
  spec.beta_star = [](const Point&) { return 1.0; };
  const auto report = check_quasimonotone(spec, 3, 1000);
  CHECK(report.verdict == Verdict::fail);
  CHECK(std::abs(report.witness_t) == doctest::Approx(3.0).epsilon(0.2));
  CHECK(std::abs(report.witness_s) < std::abs(report.witness_t));
  spec.beta_star = [](const Point&) { return 2.0; };
  CHECK(check_quasimonotone(spec, 3, 1000).verdict == Verdict::pass);
}

TEST_CASE("small-s condition needs theta below the spectral gap") {
  auto spec = builtin("loglike", 1);
  spec.theta = [](const Point&) { return 0.01; };
  spec.theta_sup = 0.01;
  CHECK(check_small_s(spec, {1.0, 0.5, 1.0}).verdict == Verdict::pass);
  const auto report = check_small_s(spec, {1.0, 0.999, 1.0});
  CHECK(report.verdict == Verdict::fail);
  CHECK(report.margin == doctest::Approx(0.001 - 0.01));
  // A primitive growing like s^2 near 0 breaks the limsup bound.
  auto quad = builtin("power", 1, 3.0);
  quad.primitive = [](const Point&, double s) { return 0.3 * s * s; };
  CHECK(check_small_s(quad, {1.0, 0.5, 1.0}).verdict == Verdict::fail);
}

TEST_CASE("Ambrosetti-Rabinowitz scan") {
  SUBCASE("power holds at its own exponent") {
    const auto r = check_AR(builtin("power", 1, 3.0), 3.0, 1e6);
    CHECK(r.holds);
    CHECK(!r.witness);
    CHECK(r.scanned_up_to == doctest::Approx(1e6));
  }
  SUBCASE("loglike fails for mu = 2.1 with a bracketed witness") {
    const auto spec = builtin("loglike", 1);
    const auto r = check_AR(spec, 2.1, 1e300);
    REQUIRE(r.witness);
    CHECK(!r.holds);
    const double s = std::abs(*r.witness);
    CHECK(s == doctest::Approx(36315.5).epsilon(1e-4));
    CHECK(2.1 * spec.eval_F(r.witness_x, s) > s * spec.eval_f(r.witness_x, s) * (1 - 1e-9));
  }
  SUBCASE("loglike witnesses") {
    const auto spec = builtin("loglike", 1);
    CHECK(std::abs(*check_AR(spec, 3.0, 1e300).witness) == doctest::Approx(2.7527).epsilon(1e-4));
    CHECK(std::abs(*check_AR(spec, 2.01, 1e300).witness) == doctest::Approx(4.43196e43).epsilon(1e-4));
  }
  SUBCASE("a witness beyond double range is not found") {
    const auto r = check_AR(builtin("loglike", 1), 2.0001, 1e300);
    CHECK(r.holds);
    CHECK(r.scanned_up_to <= 1e300);
  }
  SUBCASE("exponent must exceed 2") {
    CHECK_THROWS_AS(check_AR(builtin("power", 1), 2.0, 1e6), ValidationError);
    CHECK_THROWS_AS(check_AR(builtin("power", 1), 3.0, 0.0), ValidationError);
  }
}

TEST_CASE("primitive consistency") {
  for (const auto* name : {"power", "loglike"}) {
    const auto r = check_consistency(builtin(name, 1), 11, 500);
    CHECK(r.max_derivative_error <= 1e-6);
    CHECK(r.max_sigma_error <= 1e-12);
    CHECK(r.max_origin_value == 0.0);
  }
}

TEST_CASE("weighted nonlinearity") {
  const auto base = builtin("power", 1, 3.0);
  const auto spec = weighted(base, [](const Point& x) { return 1.0 + x[0]; }, [](const Point&) { return 0.5; }, 2.0);
  CHECK(!spec.odd);
  CHECK(spec.eval_f({0.5, 0.0}, 2.0) == doctest::Approx(1.5 * 4.0));
  CHECK(spec.eval_f({0.5, 0.0}, -2.0) == doctest::Approx(-0.5 * 4.0));
  CHECK(check_consistency(spec, 3, 300).max_derivative_error <= 1e-6);
  CHECK(check_growth(spec, 3, 1000).verdict == Verdict::pass);
}

TEST_CASE("checkers are reproducible for a fixed seed") {
  const auto spec = builtin("loglike", 2);
  const auto a = check_growth(spec, 42, 500), b = check_growth(spec, 42, 500);
  CHECK(a.margin == b.margin);
  CHECK(a.witness_s == b.witness_s);
  const auto c = check_quasimonotone(spec, 42, 500), d = check_quasimonotone(spec, 42, 500);
  CHECK(c.margin == d.margin);
  CHECK(sample_seed(1, 2) == sample_seed(1, 2));
  CHECK(sample_seed(1, 2) != sample_seed(2, 1));
  CHECK(to_string(Verdict::inconclusive) == "inconclusive");
}
