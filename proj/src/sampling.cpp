#include "hartree/sampling.hpp"

#include "hartree/error.hpp"
#include "hartree/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hartree {

SpectralField random_field(const DomainSpec& domain, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> decay(0.5, 2.5);
  const double alpha = decay(rng);
  std::vector<double> coeffs(domain.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const auto m = domain.mode(k);
    const double k2 = static_cast<double>(m[0] * m[0] + m[1] * m[1]);
    coeffs[k] = gauss(rng) * std::pow(1.0 + k2, -0.5 * alpha);
  }
  return SpectralField(domain, std::move(coeffs));
}

double lp_norm(std::span<const double> values, const DomainSpec& domain, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw ValidationError("L^p norm needs p >= 1");
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(domain.weight() * sum, 1.0 / p);
}

EmpiricalConstant estimate_embedding_constant(const DomainSpec& domain, double mass, double q,
                                              std::uint64_t seed, std::size_t count) {
  const std::size_t modes = std::min<std::size_t>(domain.size(), 8);
  std::vector<double> ratios(modes + count, 0.0);
  const auto total = static_cast<std::ptrdiff_t>(ratios.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    SpectralField u(domain);
    if (idx < modes) {
      u = SpectralField::eigenmode(domain, idx);
    } else {
      std::mt19937_64 rng(sample_seed(seed, idx));
      u = random_field(domain, rng);
    }
    ratios[idx] = lp_norm(to_grid(u), domain, q) / q_norm(u, mass);
  }
  return {*std::max_element(ratios.begin(), ratios.end()), ratios.size()};
}

double hartree_ratio(const SpectralField& v, const SpectralField& u, const SpectralField& w,
                     double mass, GreenOptions options) {
  const double num = std::abs(hartree_trilinear(v, u, w, options));
  return num / (quadratic_form(v, mass) * std::sqrt(quadratic_form(u, mass) * quadratic_form(w, mass)));
}

EmpiricalConstant estimate_hartree_constant(const DomainSpec& domain, double mass,
                                            std::uint64_t seed, std::size_t count,
                                            GreenOptions options) {
  std::vector<double> ratios(count, 0.0);
  const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    std::mt19937_64 rng(sample_seed(seed, static_cast<std::uint64_t>(i)));
    const auto v = random_field(domain, rng);
    const auto u = random_field(domain, rng);
    const auto w = random_field(domain, rng);
    ratios[static_cast<std::size_t>(i)] = hartree_ratio(v, u, w, mass, options);
  }
  double best = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());

  // Projected ascent of H on the unit Q-sphere, started from the first mode.
  const auto symbol = sqrt_op_symbol(domain, mass);
  SpectralField u = SpectralField::eigenmode(domain, 0);
  u *= 1.0 / q_norm(u, mass);
  double value = hartree_quartic(u, options);
  double step = 1.0;
  for (int it = 0; it < 500 && step > 1e-14; ++it) {
    // Q-gradient of H: 4 (phi u)_k / sqrt(lambda_k + m^2)
    const auto phi = green_potential(u, options);
    auto grad = product_coefficients(phi.field, u, options);
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] *= 4.0 / symbol[k];
    SpectralField trial = u;
    trial.axpy(step, SpectralField(domain, grad));
    trial *= 1.0 / q_norm(trial, mass);
    const double trial_value = hartree_quartic(trial, options);
    if (trial_value > value) {
      const double gain = trial_value - value;
      u = std::move(trial);
      value = trial_value;
      step *= 2.0;
      if (gain <= 1e-15 * value) break;
    } else {
      step *= 0.5;
    }
  }
  best = std::max(best, value);
  return {best, count + 1};
}

}  // namespace hartree
