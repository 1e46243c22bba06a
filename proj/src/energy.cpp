#include "hartree/energy.hpp"

#include "hartree/error.hpp"
#include "hartree/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hartree {
namespace {

constexpr double four_pi = 4.0 * std::numbers::pi;

double truncate(double value, Sign sign) noexcept {
  switch (sign) {
    case Sign::plus: return std::max(value, 0.0);
    case Sign::minus: return std::min(value, 0.0);
    case Sign::plain: break;
  }
  return value;
}

bool active(double value, Sign sign) noexcept {
  switch (sign) {
    case Sign::plus: return value > 0.0;
    case Sign::minus: return value < 0.0;
    case Sign::plain: break;
  }
  return true;
}

}  // namespace

std::string to_string(Sign s) {
  switch (s) {
    case Sign::plain: return "plain";
    case Sign::plus: return "plus";
    case Sign::minus: return "minus";
  }
  return "?";
}

void EnergyContext::validate() const {
  params.validate();
  if (nonlinearity.dimension != domain.dimension())
    throw ValidationError("nonlinearity dimension does not match the domain");
  if (!(params.omega + nonlinearity.theta_sup < params.mass)) {
    std::ostringstream msg;
    msg << "omega + theta_inf = " << params.omega + nonlinearity.theta_sup
        << " must be < m = " << params.mass;
    throw ValidationError(msg.str());
  }
}

EnergyContext EnergyContext::with_sign(Sign s) const {
  EnergyContext ctx = *this;
  ctx.sign = s;
  return ctx;
}

EnergyContext EnergyContext::on_domain(const DomainSpec& d) const {
  EnergyContext ctx = *this;
  ctx.domain = d;
  return ctx;
}

Evaluation evaluate(const SpectralField& u, const EnergyContext& ctx, bool with_gradient) {
  if (!(u.domain() == ctx.domain)) throw ValidationError("field and energy context use different domains");
  const auto& domain = ctx.domain;
  const auto& nl = ctx.nonlinearity;
  const double weight = domain.weight();
  const std::size_t size = domain.size();
  const auto symbol = sqrt_op_symbol(domain, ctx.params.mass);
  const auto eig = domain.eigenvalues();
  const auto coeffs = u.coefficients();

  const auto grid = to_grid(u);
  std::vector<double> trunc(size), density(size);
  for (std::size_t j = 0; j < size; ++j) {
    trunc[j] = truncate(grid[j], ctx.sign);
    density[j] = trunc[j] * trunc[j];
  }

  std::vector<double> rho;
  std::optional<SpectralField> trunc_field;
  if (ctx.green.dealias) {
    trunc_field = to_spectral(trunc, domain);
    rho = product_coefficients(*trunc_field, *trunc_field, ctx.green);
  } else {
    const auto r = to_spectral(density, domain);
    rho.assign(r.coefficients().begin(), r.coefficients().end());
  }
  std::vector<double> phi(size);
  for (std::size_t k = 0; k < size; ++k) phi[k] = four_pi * rho[k] / eig[k];

  EnergyParts parts;
  for (std::size_t k = 0; k < size; ++k) {
    parts.quadratic += symbol[k] * coeffs[k] * coeffs[k];
    parts.l2_squared += coeffs[k] * coeffs[k];
    parts.quartic += phi[k] * rho[k];
  }
  double prim = 0.0, sig = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    if (trunc[j] == 0.0) continue;
    const Point x = domain.node(j);
    prim += nl.primitive(x, trunc[j]);
    sig += nl.sigma(x, trunc[j]);
  }
  parts.primitive = weight * prim;
  parts.sigma_integral = weight * sig;
  const double lambda = ctx.params.lambda;
  parts.total = 0.5 * parts.quadratic - 0.5 * ctx.params.omega * parts.l2_squared -
                0.25 * lambda * parts.quartic - parts.primitive;

  Evaluation ev;
  ev.energy = parts.total;
  ev.parts = parts;
  if (!with_gradient) return ev;

  // Nodal reaction q = lambda <G,s^2> s + f(x,s) on the active set.
  std::vector<double> hartree_nodal;
  const SpectralField potential(domain, phi);
  if (ctx.green.dealias) {
    hartree_nodal = to_grid(SpectralField(domain, product_coefficients(potential, *trunc_field, ctx.green)));
  } else {
    hartree_nodal = to_grid(potential);
    for (std::size_t j = 0; j < size; ++j) hartree_nodal[j] *= trunc[j];
  }
  const double hartree_sign = ctx.fault == Fault::hartree_gradient_sign ? -1.0 : 1.0;
  std::vector<double> reaction(size);
  for (std::size_t j = 0; j < size; ++j) {
    if (!active(grid[j], ctx.sign)) continue;
    reaction[j] = hartree_sign * lambda * hartree_nodal[j] + nl.f(domain.node(j), trunc[j]);
  }
  const auto reaction_coeffs = to_spectral(reaction, domain);

  std::vector<double> grad(size);
  double dual2 = 0.0, l2 = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    const double dj = symbol[k] * coeffs[k] - ctx.params.omega * coeffs[k] - reaction_coeffs[k];
    grad[k] = dj / symbol[k];
    dual2 += dj * dj / symbol[k];
    l2 += dj * dj;
  }
  ev.gradient.emplace(domain, std::move(grad));
  ev.gradient_norm = std::sqrt(dual2);
  ev.residual = std::sqrt(l2);
  return ev;
}

double energy(const SpectralField& u, const EnergyContext& ctx) { return evaluate(u, ctx, false).energy; }

SpectralField gradient(const SpectralField& u, const EnergyContext& ctx) {
  return *evaluate(u, ctx, true).gradient;
}

double residual_stationary(const SpectralField& u, const EnergyContext& ctx) {
  return evaluate(u, ctx.with_sign(Sign::plain), true).residual;
}

LocalMinCertificate verify_local_min(const EnergyContext& ctx, double rho, std::size_t count,
                                     std::uint64_t seed) {
  ctx.validate();
  if (!(rho > 0.0)) throw ValidationError("certificate radius must be positive");
  if (count < 1) throw ValidationError("certificate needs at least one sample");
  const auto& domain = ctx.domain;
  const double mass = ctx.params.mass;

  // Low modes of both signs first, then random directions.
  const std::size_t modes = std::min<std::size_t>(domain.size(), 4);
  const std::size_t total = std::max(count, 2 * modes);
  std::vector<double> energies(total);
  const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    SpectralField u(domain);
    if (idx < 2 * modes) {
      u = SpectralField::eigenmode(domain, idx / 2);
      if (idx % 2 == 1) u *= -1.0;
    } else {
      std::mt19937_64 rng(sample_seed(seed, idx));
      u = random_field(domain, rng);
    }
    u *= rho / q_norm(u, mass);
    energies[idx] = energy(u, ctx);
  }

  LocalMinCertificate cert;
  cert.radius = rho;
  cert.samples = total;
  cert.min_sampled = *std::min_element(energies.begin(), energies.end());

  const auto small = check_small_s(ctx.nonlinearity, ctx.params);
  const double eps = small.value("epsilon");
  cert.c_epsilon = small.value("c_epsilon");
  const double r = ctx.nonlinearity.exponent;
  const std::size_t constant_samples = std::min<std::size_t>(count, 256);
  cert.embedding_constant = estimate_embedding_constant(domain, mass, r, seed, constant_samples).value;
  cert.hartree_constant = estimate_hartree_constant(domain, mass, seed, constant_samples, ctx.green).value;
  const double shift = ctx.params.omega + ctx.nonlinearity.theta_sup + eps;
  cert.c_tilde = 0.5 * (1.0 - std::max(0.0, shift) / mass);
  cert.lower_bound = cert.c_tilde * rho * rho -
                     0.25 * std::max(0.0, ctx.params.lambda) * cert.hartree_constant * std::pow(rho, 4) -
                     cert.c_epsilon * std::pow(cert.embedding_constant * rho, r);
  cert.holds = cert.min_sampled > 0.0;
  cert.bound_consistent = cert.min_sampled >= cert.lower_bound - 1e-12 * std::abs(cert.lower_bound);
  return cert;
}

bool has_required_sign(const SpectralField& v, Sign sign) {
  const auto grid = to_grid(v);
  double scale = 0.0;
  for (double g : grid) scale = std::max(scale, std::abs(g));
  const double tol = 1e-12 * scale;
  if (sign == Sign::minus) return std::all_of(grid.begin(), grid.end(), [tol](double g) { return g <= tol; });
  return std::all_of(grid.begin(), grid.end(), [tol](double g) { return g >= -tol; });
}

RayScan scan_ray(const SpectralField& v, const EnergyContext& ctx, double t_max) {
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");
  RayScan scan;
  constexpr int kSteps = 160;  // 2^-40 .. 1 in quarter octaves
  for (int i = 0; i <= kSteps; ++i) {
    const double t = t_max * std::exp2(-(kSteps - i) / 4.0);
    const double e = energy(t * v, ctx);
    scan.table.push_back({t, e});
    if (!scan.crossing && e < 0.0) scan.crossing = t;
  }
  return scan;
}

RayScan ray_divergence(const SpectralField& v, const EnergyContext& ctx, double t_max) {
  if (!(ctx.params.lambda > 0.0)) throw ValidationError("ray_divergence requires lambda > 0");
  if (v.is_zero()) throw ValidationError("ray direction must be nonzero");
  if (!has_required_sign(v, ctx.sign))
    throw ValidationError(ctx.sign == Sign::minus ? "ray direction must be <= 0 on the grid"
                                                  : "ray direction must be >= 0 on the grid");
  return scan_ray(v, ctx, t_max);
}

}  // namespace hartree
