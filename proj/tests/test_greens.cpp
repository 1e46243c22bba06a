#include "hartree/field_io.hpp"
#include "hartree/greens.hpp"
#include "hartree/sampling.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hartree;
using std::numbers::pi;

namespace {

SpectralField sin_pi(const DomainSpec& d) {
  std::vector<double> g(d.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::sin(pi * d.node(j)[0]);
  return to_spectral(g, d);
}

SpectralField sample(const DomainSpec& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_field(d, rng);
}

}  // namespace

TEST_CASE("potential of sin(pi x) matches the closed form") {
  const DomainSpec d(1, 255);
  const auto phi = to_grid(green_potential(sin_pi(d)).field);
  double worst = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) worst = std::max(worst, std::abs(phi[j] - oracle::green_sin(d.node(j)[0])));
  CHECK(worst <= 1e-8);
  CHECK(phi[127] == doctest::Approx(pi / 4 + 1 / pi).epsilon(1e-9));
  CHECK(phi[127] == doctest::Approx(1.1037080496).epsilon(1e-9));
}

TEST_CASE("quartic and trilinear forms of sin(pi x)") {
  const DomainSpec d(1, 255);
  const auto u = sin_pi(d);
  CHECK(hartree_quartic(u) == doctest::Approx(0.460743066664).epsilon(1e-9));
  CHECK(std::abs(hartree_quartic(u) - oracle::quartic_sin()) <= 1e-8);
  CHECK(hartree_trilinear(u, u, u) == doctest::Approx(hartree_quartic(u)).epsilon(1e-13));
}

TEST_CASE("zero inputs and homogeneity") {
  const DomainSpec d(2, 15);
  const auto u = sample(d, 1), w = sample(d, 2);
  CHECK(green_potential(SpectralField(d)).field.is_zero());
  CHECK(hartree_quartic(SpectralField(d)) == 0.0);
  CHECK(hartree_trilinear(u, w, SpectralField(d)) == 0.0);
  const auto base = green_potential(u).field;
  const auto scaled = green_potential(3.0 * u).field;
  for (std::size_t k = 0; k < base.size(); ++k) CHECK(scaled[k] == doctest::Approx(9.0 * base[k]).epsilon(1e-12));
  CHECK(hartree_quartic(2.0 * u) == doctest::Approx(16.0 * hartree_quartic(u)).epsilon(1e-12));
}

TEST_CASE("trilinear form is symmetric in its last two arguments") {
  const DomainSpec d(1, 63);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto v = sample(d, 3 * s), u = sample(d, 3 * s + 1), w = sample(d, 3 * s + 2);
    const double a = hartree_trilinear(v, u, w), b = hartree_trilinear(v, w, u);
    CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + 1e-300) + 1e-15);
  }
  CHECK_THROWS(hartree_trilinear(sample(d, 1), sample(DomainSpec(1, 31), 2), sample(d, 3)));
}

TEST_CASE("Green symmetry and nonnegativity") {
  for (const DomainSpec& d : {DomainSpec(1, 255), DomainSpec(2, 31)}) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto u = sample(d, 2 * s), w = sample(d, 2 * s + 1);
      const double a = hartree_trilinear(u, w, w), b = hartree_trilinear(w, u, u);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), std::abs(b)));
      CHECK(hartree_quartic(u) >= 0.0);
      const auto phi = to_grid(green_potential(u).field);
      double lo = 0.0, hi = 0.0;
      for (double p : phi) lo = std::min(lo, p), hi = std::max(hi, p);
      CHECK(lo >= -1e-10 * hi);
    }
  }
}

TEST_CASE("discrete Poisson residual") {
  const DomainSpec d(1, 127);
  const auto u = sample(d, 9);
  const auto phi = green_potential(u).field;
  auto u2 = to_grid(u);
  for (auto& x : u2) x *= x;
  const auto rho = to_spectral(u2, d);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double r = d.eigenvalues()[k] * phi[k] - 4 * pi * rho[k];
    num += r * r;
    den += 16 * pi * pi * rho[k] * rho[k];
  }
  CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("dealiased products approach the fine-grid projection") {
  const DomainSpec d(1, 31);
  std::vector<double> c(d.size(), 0.0);
  c[0] = 1.0;
  c[2] = 0.5;
  c[6] = 0.25;
  const SpectralField u(d, c);
  const auto plain = product_coefficients(u, u);
  const auto padded = product_coefficients(u, u, {true});
  const auto fine = resample(u, 1023);
  const auto ref_full = product_coefficients(fine, fine);
  const auto ref = resample(SpectralField(fine.domain(), ref_full), d.points());
  double e_plain = 0.0, e_padded = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    e_plain = std::max(e_plain, std::abs(plain[k] - ref[k]));
    e_padded = std::max(e_padded, std::abs(padded[k] - ref[k]));
  }
  CHECK(e_padded < e_plain);
  CHECK(hartree_quartic(sample(d, 4), {true}) >= 0.0);
}

TEST_CASE("potential serialization uses repr=potential") {
  const DomainSpec d(1, 7);
  const auto phi = green_potential(sample(d, 1));
  const auto text = format_field(phi.field, "potential");
  CHECK(text.rfind("HARTREE-FIELD v1; d=1; n=7; repr=potential\n", 0) == 0);
  const auto back = parse_field(text);
  CHECK(back.repr == "potential");
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(back.field[k] == phi.field[k]);
}
