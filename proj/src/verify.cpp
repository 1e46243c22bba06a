#include "hartree/verify.hpp"

#include "hartree/error.hpp"
#include "hartree/greens.hpp"
#include "hartree/sampling.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hartree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const DomainSpec& domain) {
  std::ostringstream out;
  out << "d=" << domain.dimension() << ", n=" << domain.points();
  return out.str();
}

PropertyResult result(std::string name, double worst, double limit, std::size_t samples, std::string detail,
                      bool smaller_is_better = true) {
  PropertyResult r;
  r.name = std::move(name);
  r.worst = worst;
  r.limit = limit;
  r.samples = samples;
  r.detail = std::move(detail);
  r.passed = std::isfinite(worst) && (smaller_is_better ? worst <= limit : worst >= limit);
  return r;
}

SpectralField field_at(const DomainSpec& domain, std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(sample_seed(seed, index));
  return random_field(domain, rng);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class F>
double parallel_max(std::size_t count, F&& body) {
  std::vector<double> out(count, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
  double worst = 0.0;
  for (double v : out) worst = std::isnan(v) ? kInf : std::max(worst, v);
  return worst;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

VerifyTolerances verify_tolerances(bool quick) {
  if (quick) return {31, 15, 1e-11, 1.8, 1e-4, 200, 1000, 100, 20};
  return {255, 63, 1e-12, 1.9, 1e-5, 1000, 10000, 1000, 100};
}

PropertyResult check_transform_roundtrip(const DomainSpec& domain, std::uint64_t seed, std::size_t count,
                                         double tol) {
  const double worst = parallel_max(count, [&](std::size_t i) {
    const auto u = field_at(domain, seed, i);
    const auto grid = to_grid(u);
    const auto back = to_spectral(grid, domain);
    double err = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) err = std::max(err, std::abs(back[k] - u[k]));
    return err / max_abs(u.coefficients());
  });
  return result("transform round trip", worst, tol, count, describe(domain) + ", max relative coefficient error");
}

PropertyResult check_parseval(const DomainSpec& domain, std::uint64_t seed, std::size_t count, double tol) {
  const double worst = parallel_max(count, [&](std::size_t i) {
    const auto u = field_at(domain, seed, i);
    const auto grid = to_grid(u);
    double nodal = 0.0;
    for (double g : grid) nodal += g * g;
    nodal *= domain.weight();
    const double spectral = l2_norm(u) * l2_norm(u);
    return std::abs(nodal - spectral) / spectral;
  });
  return result("Parseval identity", worst, tol, count, describe(domain) + ", |w sum u^2 - sum c^2| / sum c^2");
}

PropertyResult check_operator_eigen(const DomainSpec& domain, double mass, double tol) {
  const std::size_t modes = std::min<std::size_t>(domain.size(), 10);
  double worst = 0.0;
  for (std::size_t k = 0; k < modes; ++k) {
    const auto phi = SpectralField::eigenmode(domain, k);
    const double expected = std::sqrt(domain.eigenvalues()[k] + mass * mass);
    const auto image = to_grid(apply_sqrt_op(phi, mass));
    const auto base = to_grid(phi);
    double err = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j) err = std::max(err, std::abs(image[j] - expected * base[j]));
    worst = std::max(worst, err / (expected * max_abs(base)));
  }
  return result("operator on eigenfunctions", worst, tol, modes, describe(domain) + ", first modes, nodal relative error");
}

PropertyResult check_self_adjoint(const DomainSpec& domain, double mass, std::uint64_t seed, std::size_t count,
                                  double tol) {
  const double worst = parallel_max(count, [&](std::size_t i) {
    const auto u = field_at(domain, seed, 2 * i);
    const auto v = field_at(domain, seed, 2 * i + 1);
    const double a = l2_inner(apply_sqrt_op(u, mass), v);
    const double b = l2_inner(u, apply_sqrt_op(v, mass));
    return std::abs(a - b) / std::max(q_norm(u, mass) * q_norm(v, mass), 1e-300);
  });
  return result("self-adjointness", worst, tol, count, describe(domain) + ", |<Au,v> - <u,Av>| / (|u|_Q |v|_Q)");
}

PropertyResult check_trace_inequality(const DomainSpec& domain, double mass, std::uint64_t seed,
                                      std::size_t count) {
  std::vector<double> ratio(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = field_at(domain, seed, static_cast<std::size_t>(i));
    const double l2 = l2_norm(u);
    ratio[static_cast<std::size_t>(i)] = mass * l2 * l2 / quadratic_form(u, mass);
  }
  const auto violations = static_cast<double>(std::count_if(ratio.begin(), ratio.end(), [](double r) { return r > 1.0; }));
  std::ostringstream detail;
  detail << describe(domain) << ", max m|u|^2/Q = " << *std::max_element(ratio.begin(), ratio.end());
  return result("trace inequality", violations, 0.0, count, detail.str());
}

PropertyResult check_extension_energy(const DomainSpec& domain, double mass, std::uint64_t seed,
                                      std::size_t count) {
  const auto symbol = sqrt_op_symbol(domain, mass);
  boost::math::quadrature::exp_sinh<double> integrator;
  double worst_identity = 0.0, worst_gap = kInf;
  for (std::size_t i = 0; i < count; ++i) {
    const auto u = field_at(domain, seed, i);
    const double q = quadratic_form(u, mass);
    // Optimal profile exp(-mu_k y) and a perturbed competitor exp(-a_k y).
    std::mt19937_64 rng(sample_seed(seed ^ 0x5eedu, i));
    std::uniform_real_distribution<double> spread(0.5, 1.5);
    std::vector<double> rate(u.size());
    for (auto& a : rate) a = spread(rng);
    const auto density = [&](double y, bool optimal) {
      double sum = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double mu = symbol[k];
        const double a = optimal ? mu : mu * rate[k];
        sum += u[k] * u[k] * (mu * mu + a * a) * std::exp(-2.0 * a * y);
      }
      return sum;
    };
    const double optimal = integrator.integrate([&](double y) { return density(y, true); }, 0.0, kInf);
    const double other = integrator.integrate([&](double y) { return density(y, false); }, 0.0, kInf);
    worst_identity = std::max(worst_identity, std::abs(optimal - q) / q);
    worst_gap = std::min(worst_gap, (other - q) / q);

    // Single mode against the decay rates mu_k +- 0.1.
    std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
    const std::size_t k = pick(rng);
    const double mu = symbol[k];
    for (double eps : {0.1, -0.1}) {
      const double a = mu + eps;
      const double single = integrator.integrate(
          [&](double y) { return (mu * mu + a * a) * std::exp(-2.0 * a * y); }, 0.0, kInf);
      worst_gap = std::min(worst_gap, (single - mu) / mu);
    }
  }
  std::ostringstream detail;
  detail << describe(domain) << ", |E(ext) - Q|/Q; smallest relative excess of a competitor = " << worst_gap;
  auto r = result("extension energy", worst_identity, 1e-9, count, detail.str());
  r.passed = r.passed && worst_gap >= 0.0;
  return r;
}

PropertyResult check_extension_order(const DomainSpec& domain, double mass, std::size_t samples,
                                     double min_order) {
  const auto u = SpectralField::eigenmode(domain, 0);
  std::vector<CylinderPoint> points;
  std::mt19937_64 rng(sample_seed(7, domain.points()));
  std::uniform_real_distribution<double> base(0.1, 0.9), height(0.05, 1.0);
  for (std::size_t i = 0; i < samples; ++i) {
    CylinderPoint p;
    for (int a = 0; a < domain.dimension(); ++a) p.x[static_cast<std::size_t>(a)] = base(rng);
    p.y = height(rng);
    points.push_back(p);
  }
  const double h = 1e-2;
  const auto coarse = extension_residual(u, mass, points, h);
  const auto fine = extension_residual(u, mass, points, h / 2);
  const double pde_order = std::log2(coarse.pde / fine.pde);
  const double trace_order = std::log2(coarse.neumann / fine.neumann);
  std::ostringstream detail;
  detail << describe(domain) << ", PDE residual " << coarse.pde << " -> " << fine.pde << " (order " << pde_order
         << "), Neumann error " << coarse.neumann << " -> " << fine.neumann << " (order " << trace_order << ")";
  auto r = result("extension residual order", pde_order, min_order, samples, detail.str(), false);
  r.passed = r.passed && trace_order >= 0.9;
  return r;
}

PropertyResult check_green_symmetry(const DomainSpec& domain, std::uint64_t seed, std::size_t count, double tol) {
  const double worst = parallel_max(count, [&](std::size_t i) {
    const auto a = to_grid(field_at(domain, seed, 2 * i));
    const auto b = to_grid(field_at(domain, seed, 2 * i + 1));
    const auto pa = to_grid(poisson_potential(a, domain).field);
    const auto pb = to_grid(poisson_potential(b, domain).field);
    double ab = 0.0, ba = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      ab += pa[j] * b[j];
      ba += a[j] * pb[j];
      scale += std::abs(pa[j] * b[j]) + std::abs(a[j] * pb[j]);
    }
    return std::abs(ab - ba) / scale;
  });
  return result("Green symmetry", worst, tol, count, describe(domain) + ", |<Ga,b> - <a,Gb>| relative");
}

PropertyResult check_potential_sign(const DomainSpec& domain, std::uint64_t seed, std::size_t count) {
  const double worst = parallel_max(count, [&](std::size_t i) {
    const auto phi = to_grid(green_potential(field_at(domain, seed, i)).field);
    const double lo = *std::min_element(phi.begin(), phi.end());
    return std::max(0.0, -lo) / max_abs(phi);
  });
  return result("potential nonnegativity", worst, 1e-13, count,
                describe(domain) + ", largest negative nodal potential relative to its max");
}

PropertyResult check_hartree_constant(const DomainSpec& domain, double mass, std::uint64_t seed,
                                      std::size_t triples, std::size_t fresh) {
  const auto estimate = estimate_hartree_constant(domain, mass, seed, triples);
  const std::uint64_t fresh_seed = sample_seed(seed, 0xf7e5);
  std::vector<double> ratio(fresh);
  const auto n = static_cast<std::ptrdiff_t>(fresh);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    ratio[idx] = hartree_ratio(field_at(domain, fresh_seed, 3 * idx), field_at(domain, fresh_seed, 3 * idx + 1),
                               field_at(domain, fresh_seed, 3 * idx + 2), mass);
  }
  const double top = *std::max_element(ratio.begin(), ratio.end());
  const auto exceed = static_cast<double>(
      std::count_if(ratio.begin(), ratio.end(), [&](double r) { return r > estimate.value; }));
  std::ostringstream detail;
  detail << describe(domain) << ", C_G = " << estimate.value << " from " << triples
         << " triples; largest fresh ratio " << top;
  return result("Hartree constant", exceed, 0.0, fresh, detail.str());
}

PropertyResult check_w_inequality(const DomainSpec& domain, std::uint64_t seed, std::size_t count) {
  if (domain.dimension() != 1) throw ValidationError("the W-kernel ratio is tabulated in 1D only");
  const double r = 2.0, p = 4.0 / 3.0;
  const double w_norm = std::numbers::pi * std::pow(2.0, 1.0 / r);
  const double worst = parallel_max(count, [&](std::size_t i) {
    const auto a = to_grid(field_at(domain, seed, 2 * i));
    const auto b = to_grid(field_at(domain, seed, 2 * i + 1));
    const auto pa = to_grid(poisson_potential(a, domain).field);
    double pair = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) pair += pa[j] * b[j];
    pair *= domain.weight();
    return std::abs(pair) / (w_norm * lp_norm(a, domain, p) * lp_norm(b, domain, p));
  });
  return result("W-kernel bound", worst, 1.0, count,
                describe(domain) + ", |int <G,a> b| / (|W|_2 |a|_{4/3} |b|_{4/3}), W = pi 1_{|z|<1}");
}

PropertyResult check_embedding(const DomainSpec& domain, double mass, std::uint64_t seed, std::size_t count) {
  const std::vector<double> exponents = domain.dimension() == 1 ? std::vector<double>{2.0, 2.5, 4.0}
                                                                : std::vector<double>{2.0, 3.0, 4.0};
  const DomainSpec finer(domain.dimension(), 2 * (domain.points() + 1) - 1);
  double drift = 0.0;
  std::ostringstream detail;
  detail << describe(domain) << ", S_q:";
  bool bounded = true;
  for (double q : exponents) {
    const auto a = estimate_embedding_constant(domain, mass, q, seed, count);
    const auto b = estimate_embedding_constant(finer, mass, q, sample_seed(seed, 1), count);
    drift = std::max(drift, std::abs(a.value - b.value) / a.value);
    detail << " q=" << q << ": " << a.value << " (finer grid " << b.value << ")";
    if (q == 2.0) bounded = a.value <= (1.0 + 1e-12) / std::sqrt(mass);
  }
  detail << "; S_2 <= m^(-1/2): " << (bounded ? "yes" : "no");
  auto r = result("embedding constants", drift, 0.05, count * exponents.size(), detail.str());
  r.passed = r.passed && bounded;
  return r;
}

PropertyResult check_gradient(const EnergyContext& ctx, std::uint64_t seed, std::size_t count, double tol) {
  const double mass = ctx.params.mass;
  const double worst = parallel_max(count, [&](std::size_t i) {
    auto u = field_at(ctx.domain, seed, 2 * i);
    auto v = field_at(ctx.domain, seed, 2 * i + 1);
    u *= 1.5 / q_norm(u, mass);
    v *= 1.0 / q_norm(v, mass);
    const auto ev = evaluate(u, ctx);
    const double analytic = q_inner(*ev.gradient, v, mass);
    const double h = 1e-5;
    const double fd = (energy(u + h * v, ctx) - energy(u - h * v, ctx)) / (2.0 * h);
    return std::abs(fd - analytic) / std::max(ev.gradient_norm, 1e-300);
  });
  std::ostringstream detail;
  detail << describe(ctx.domain) << ", " << ctx.nonlinearity.kind << ", sign " << to_string(ctx.sign)
         << (ctx.green.dealias ? ", dealiased" : "") << ", |FD - <g,v>_Q| / |g|_Q";
  return result("gradient consistency", worst, tol, count, detail.str());
}

PropertyResult check_nonlinearity(const NonlinearitySpec& spec, std::uint64_t seed, std::size_t count) {
  const auto c = check_consistency(spec, seed, count);
  std::ostringstream detail;
  detail << spec.kind << ", dF/ds error " << c.max_derivative_error << ", sigma identity error " << c.max_sigma_error
         << ", |f(x,0)| " << c.max_origin_value;
  auto r = result("reaction-term consistency", c.max_derivative_error, 1e-6, count, detail.str());
  r.passed = r.passed && c.max_sigma_error <= 1e-12 && c.max_origin_value == 0.0;
  return r;
}

VerifyReport run_verify(const VerifyOptions& options) {
  const auto tol = verify_tolerances(options.quick);
  const auto seed = options.seed;
  const double mass = 1.0;
  const DomainSpec line(1, tol.points_1d), square(2, tol.points_2d);
  VerifyReport report;
  auto& out = report.properties;
  for (const auto& domain : {line, square}) {
    out.push_back(check_transform_roundtrip(domain, seed, 20, tol.roundoff));
    out.push_back(check_parseval(domain, seed, 20, tol.roundoff));
    out.push_back(check_operator_eigen(domain, mass, tol.roundoff));
    out.push_back(check_self_adjoint(domain, mass, seed, 100, tol.roundoff));
    out.push_back(check_trace_inequality(domain, mass, seed, tol.fields));
    out.push_back(check_extension_energy(domain, mass, seed, 10));
    out.push_back(check_extension_order(domain, mass, 100, tol.extension_order));
    out.push_back(check_green_symmetry(domain, seed, tol.fields, tol.roundoff));
    out.push_back(check_potential_sign(domain, seed, tol.fields));
    out.push_back(check_embedding(domain, mass, seed, 64));
  }
  out.push_back(check_hartree_constant(line, mass, seed, tol.triples, tol.fresh));
  out.push_back(check_hartree_constant(square, mass, seed, tol.triples / 10, tol.fresh / 10));
  out.push_back(check_w_inequality(line, seed, tol.fields));

  const OperatorParams params{mass, 0.5, 1.0};
  for (const char* kind : {"power", "loglike", "zero"}) {
    out.push_back(check_nonlinearity(builtin(kind, 1), seed, 1000));
    for (Sign sign : {Sign::plain, Sign::plus, Sign::minus}) {
      EnergyContext ctx{line, params, builtin(kind, 1), sign};
      ctx.fault = options.fault;
      out.push_back(check_gradient(ctx, seed, tol.directions, tol.gradient));
    }
  }
  EnergyContext planar{square, params, builtin("loglike", 2), Sign::plus};
  planar.fault = options.fault;
  out.push_back(check_gradient(planar, seed, tol.directions / 4, tol.gradient));
  planar.green.dealias = true;
  out.push_back(check_gradient(planar, seed, tol.directions / 4, tol.gradient));
  return report;
}

}  // namespace hartree
