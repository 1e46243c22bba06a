#include "hartree/greens.hpp"

#include "hartree/error.hpp"

#include <cmath>
#include <numbers>

namespace hartree {
namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

// Grid with (n_p + 1) >= 3(n + 1)/2 so that products of n-mode fields are
// resolved without aliasing back into the first n modes.
std::size_t padded_points(std::size_t n) { return (3 * (n + 1) + 1) / 2 - 1; }

std::vector<double> potential_coefficients(std::span<const double> density_coeffs,
                                           const DomainSpec& domain) {
  const auto eig = domain.eigenvalues();
  std::vector<double> phi(density_coeffs.size());
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = four_pi * density_coeffs[k] / eig[k];
  return phi;
}

}  // namespace

std::vector<double> product_coefficients(const SpectralField& a, const SpectralField& b,
                                         GreenOptions options) {
  if (!(a.domain() == b.domain())) throw ValidationError("fields live on different domains");
  const auto& domain = a.domain();
  if (!options.dealias) {
    auto ga = to_grid(a);
    const auto gb = to_grid(b);
    for (std::size_t j = 0; j < ga.size(); ++j) ga[j] *= gb[j];
    const auto prod = to_spectral(ga, domain);
    return {prod.coefficients().begin(), prod.coefficients().end()};
  }
  const std::size_t fine = padded_points(domain.points());
  auto ga = to_grid(resample(a, fine));
  const auto gb = to_grid(resample(b, fine));
  for (std::size_t j = 0; j < ga.size(); ++j) ga[j] *= gb[j];
  const auto prod = resample(to_spectral(ga, DomainSpec(domain.dimension(), fine)), domain.points());
  return {prod.coefficients().begin(), prod.coefficients().end()};
}

PotentialField poisson_potential(std::span<const double> density, const DomainSpec& domain) {
  const auto rho = to_spectral(density, domain);
  return {SpectralField(domain, potential_coefficients(rho.coefficients(), domain))};
}

PotentialField green_potential(const SpectralField& u, GreenOptions options) {
  const auto rho = product_coefficients(u, u, options);
  return {SpectralField(u.domain(), potential_coefficients(rho, u.domain()))};
}

double hartree_quartic(const SpectralField& u, GreenOptions options) {
  const auto rho = product_coefficients(u, u, options);
  const auto eig = u.domain().eigenvalues();
  double sum = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) sum += four_pi * rho[k] * rho[k] / eig[k];
  return sum;
}

double hartree_trilinear(const SpectralField& v, const SpectralField& u, const SpectralField& w,
                         GreenOptions options) {
  if (!(v.domain() == u.domain()) || !(u.domain() == w.domain()))
    throw ValidationError("fields live on different domains");
  const auto phi = green_potential(v, options);
  const auto uw = product_coefficients(u, w, options);
  double sum = 0.0;
  for (std::size_t k = 0; k < uw.size(); ++k) sum += phi.field[k] * uw[k];
  return sum;
}

}  // namespace hartree
