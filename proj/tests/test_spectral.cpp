#include "hartree/error.hpp"
#include "hartree/sampling.hpp"
#include "hartree/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hartree;
using std::numbers::pi;

namespace {

SpectralField sample(const DomainSpec& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_field(d, rng);
}

std::vector<double> nodal(const DomainSpec& d, auto&& fn) {
  std::vector<double> v(d.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(d.node(j));
  return v;
}

}  // namespace

TEST_CASE("domain layout") {
  const DomainSpec line(1, 7), square(2, 3);
  CHECK(line.size() == 7);
  CHECK(square.size() == 9);
  CHECK(line.node(0)[0] == doctest::Approx(0.125));
  CHECK(square.node(5)[0] == doctest::Approx(0.5));   // row 1
  CHECK(square.node(5)[1] == doctest::Approx(0.75));  // column 2
  CHECK(square.mode(5) == std::array<std::size_t, 2>{2, 3});
  CHECK(square.eigenvalues()[5] == doctest::Approx(13 * pi * pi));
  CHECK_THROWS_AS(DomainSpec(3, 4), ValidationError);
  CHECK_THROWS_AS(DomainSpec(1, 0), ValidationError);
}

TEST_CASE("eigenvalues increase along each axis") {
  const DomainSpec square(2, 9);
  const auto ev = square.eigenvalues();
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j + 1 < 9; ++j) {
      CHECK(ev[i * 9 + j] < ev[i * 9 + j + 1]);
      CHECK(ev[j * 9 + i] < ev[(j + 1) * 9 + i]);
    }
}

TEST_CASE("eigenfunctions are discretely orthonormal") {
  const DomainSpec d(2, 8);
  double worst = 0.0;
  for (std::size_t a = 0; a < d.size(); a += 7)
    for (std::size_t b = 0; b < d.size(); b += 5) {
      double s = 0.0;
      for (std::size_t j = 0; j < d.size(); ++j) s += d.eigenfunction(a, d.node(j)) * d.eigenfunction(b, d.node(j));
      s *= d.weight();
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("to_spectral of sqrt2 sin(pi x) is the first unit vector") {
  const DomainSpec d(1, 63);
  const auto c = to_spectral(nodal(d, [](const Point& x) { return std::sqrt(2.0) * std::sin(pi * x[0]); }), d);
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-14);
  CHECK(to_spectral(std::vector<double>(63, 0.0), d).is_zero());
}

TEST_CASE("to_grid of a single mode") {
  const DomainSpec d(2, 15);
  const std::size_t flat = 2 * 15 + 4;  // k = (3, 5)
  const auto g = to_grid(SpectralField::eigenmode(d, flat));
  for (std::size_t j = 0; j < d.size(); ++j) {
    const auto x = d.node(j);
    CHECK(g[j] == doctest::Approx(2.0 * std::sin(3 * pi * x[0]) * std::sin(5 * pi * x[1])).epsilon(1e-13));
  }
}

TEST_CASE("transform round trip, Parseval and linearity") {
  for (const DomainSpec& d : {DomainSpec(1, 255), DomainSpec(2, 31)}) {
    const auto u = sample(d, 1), w = sample(d, 2);
    const auto grid = to_grid(u);
    const auto back = to_spectral(grid, d);
    double err = 0.0, scale = 0.0, nodal_l2 = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      err = std::max(err, std::abs(back[k] - u[k]));
      scale = std::max(scale, std::abs(u[k]));
      nodal_l2 += grid[k] * grid[k];
    }
    CHECK(err <= 1e-12 * scale);
    CHECK(nodal_l2 * d.weight() == doctest::Approx(l2_norm(u) * l2_norm(u)).epsilon(1e-10));
    const auto lhs = to_grid(2.0 * u + (-3.0) * w);
    const auto gw = to_grid(w);
    for (std::size_t j = 0; j < grid.size(); ++j) CHECK(lhs[j] == doctest::Approx(2 * grid[j] - 3 * gw[j]));
  }
}

TEST_CASE("to_spectral validates its input") {
  const DomainSpec d(1, 4);
  CHECK_THROWS_AS(to_spectral(std::vector<double>(5, 0.0), d), ValidationError);
  CHECK_THROWS_AS(to_spectral(std::vector<double>{0, NAN, 0, 0}, d), ValidationError);
  CHECK_THROWS_AS(SpectralField(d, std::vector<double>(3)), ValidationError);
}

TEST_CASE("operator symbol and quadratic form") {
  const DomainSpec d(1, 127);
  const auto phi1 = SpectralField::eigenmode(d, 0);
  CHECK(apply_sqrt_op(phi1, 1.0)[0] == doctest::Approx(3.296908309475615).epsilon(1e-14));
  const auto u = to_spectral(nodal(d, [](const Point& x) { return std::sin(pi * x[0]); }), d);
  CHECK(quadratic_form(u, 1.0) == doctest::Approx(std::sqrt(pi * pi + 1) / 2).epsilon(1e-13));
  CHECK(quadratic_form(u, 1.0) == doctest::Approx(1.648454154737808).epsilon(1e-13));
  CHECK(quadratic_form(SpectralField(d), 1.0) == 0.0);
  const auto w = sample(d, 4);
  CHECK(quadratic_form(3.0 * w, 1.0) == doctest::Approx(9.0 * quadratic_form(w, 1.0)));
  CHECK(apply_sqrt_op(SpectralField(d), 2.0).is_zero());
  CHECK_THROWS_AS(apply_sqrt_op(w, 0.0), ValidationError);
  CHECK_THROWS_AS(quadratic_form(w, -1.0), ValidationError);
}

TEST_CASE("large-mass limit of the operator") {
  const DomainSpec d(1, 31);
  const auto u = sample(d, 5);
  const double m = 1e8;
  auto scaled = apply_sqrt_op(u, m);
  scaled *= 1.0 / m;
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(scaled[k] == doctest::Approx(u[k]).epsilon(1e-6));
}

TEST_CASE("self-adjointness and the trace inequality") {
  const DomainSpec d(2, 31);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto u = sample(d, 2 * s), w = sample(d, 2 * s + 1);
    const double a = l2_inner(apply_sqrt_op(u, 1.3), w), b = l2_inner(u, apply_sqrt_op(w, 1.3));
    CHECK(std::abs(a - b) <= 1e-10 * q_norm(u, 1.3) * q_norm(w, 1.3));
    CHECK(1.3 * l2_norm(u) * l2_norm(u) <= quadratic_form(u, 1.3));
  }
}

TEST_CASE("extension evaluation") {
  const DomainSpec d(1, 63);
  const auto phi1 = SpectralField::eigenmode(d, 0);
  // sqrt(2) exp(-sqrt(pi^2+1)); single-mode closed form.
  CHECK(evaluate_extension(phi1, 1.0, {0.5, 0.0}, 1.0) == doctest::Approx(0.05232218977582031).epsilon(1e-12));
  const auto u = sample(d, 6);
  const auto g = to_grid(u);
  for (std::size_t j = 0; j < g.size(); j += 9) CHECK(evaluate_extension(u, 1.0, d.node(j), 0.0) == doctest::Approx(g[j]));
  CHECK(std::abs(evaluate_extension(u, 1.0, {0.0, 0.0}, 0.3)) < 1e-14);
  CHECK(std::abs(evaluate_extension(u, 1.0, {1.0, 0.0}, 0.0)) < 1e-13);
  CHECK_THROWS_AS(evaluate_extension(u, 1.0, {0.5, 0.0}, -0.1), ValidationError);
  CHECK_THROWS_AS(evaluate_extension(u, 1.0, {1.5, 0.0}, 0.1), ValidationError);
}

TEST_CASE("extension residual is second order and vanishes for u = 0") {
  const DomainSpec d(2, 15);
  const auto phi1 = SpectralField::eigenmode(d, 0);
  std::vector<CylinderPoint> pts{{{0.3, 0.4}, 0.2}, {{0.7, 0.5}, 0.6}, {{0.5, 0.5}, 1.0}};
  const auto a = extension_residual(phi1, 1.0, pts, 2e-2);
  const auto b = extension_residual(phi1, 1.0, pts, 1e-2);
  CHECK(a.pde / b.pde == doctest::Approx(4.0).epsilon(0.01));
  CHECK(a.neumann / b.neumann == doctest::Approx(2.0).epsilon(0.02));
  const auto z = extension_residual(SpectralField(d), 1.0, pts, 1e-2);
  CHECK(z.pde == 0.0);
  CHECK(z.neumann == 0.0);
  std::vector<CylinderPoint> outside{{{1.2, 0.5}, 0.5}};
  CHECK_THROWS_AS(extension_residual(phi1, 1.0, outside, 1e-2), ValidationError);
}

TEST_CASE("solitary wave") {
  const DomainSpec d(1, 31);
  const auto u = sample(d, 7);
  const auto g = to_grid(u);
  const double omega = 0.7;
  const auto at0 = solitary_wave(u, omega, 0.0);
  const auto period = solitary_wave(u, omega, 2 * pi / omega);
  const auto later = solitary_wave(u, omega, 3.21);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(at0[j].real() == g[j]);
    CHECK(at0[j].imag() == 0.0);
    CHECK(std::abs(period[j] - at0[j]) <= 1e-12 * std::abs(g[j]) + 1e-15);
    CHECK(std::abs(later[j]) == doctest::Approx(std::abs(g[j])).epsilon(1e-14));
  }
}

TEST_CASE("resample pads and truncates coefficients") {
  const DomainSpec d(2, 7);
  const auto u = sample(d, 8);
  const auto fine = resample(u, 15);
  CHECK(fine.domain().points() == 15);
  CHECK(fine[1 * 15 + 2] == u[1 * 7 + 2]);
  CHECK(fine[10 * 15 + 2] == 0.0);
  const auto back = resample(fine, 7);
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(back[k] == u[k]);
  // Point values of the continuous expansion are preserved.
  CHECK(evaluate_extension(fine, 1.0, {0.31, 0.77}, 0.0) == doctest::Approx(evaluate_extension(u, 1.0, {0.31, 0.77}, 0.0)));
}

TEST_CASE("field arithmetic rejects mixed domains") {
  SpectralField a(DomainSpec(1, 5)), b(DomainSpec(1, 6));
  CHECK_THROWS_AS(a += b, ValidationError);
  CHECK_THROWS_AS((void)q_inner(a, b, 1.0), ValidationError);
}
