#pragma once

// Energy functionals on the trace space with the extension quadratic form Q_m:
//
//   J(u)   = Q_m(u)/2 - (omega/2)|u|_2^2 - (lambda/4) int <G,u^2> u^2 - int F(x,u)
//   J_+(u) = same, with the Hartree and F terms evaluated at u^+ = max(u,0)
//   J_-(u) = same, with the Hartree and F terms evaluated at -u^- = min(u,0)
//
// Integrals use the nodal quadrature of the transforms, and gradients are the
// exact derivatives of that discrete energy, represented in the Q_m metric.

#include "hartree/greens.hpp"
#include "hartree/nonlinearity.hpp"
#include "hartree/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hartree {

enum class Sign { plain, plus, minus };
std::string to_string(Sign s);

/// Deliberate faults for mutation testing of the verification suite.
enum class Fault { none, hartree_gradient_sign };

struct EnergyContext {
  DomainSpec domain;
  OperatorParams params;
  NonlinearitySpec nonlinearity;
  Sign sign = Sign::plain;
  GreenOptions green{};
  Fault fault = Fault::none;

  /// m > 0, matching dimensions, and omega + theta_inf < m.
  void validate() const;
  EnergyContext with_sign(Sign s) const;
  EnergyContext on_domain(const DomainSpec& d) const;
};

struct EnergyParts {
  double quadratic = 0.0;       // Q_m(u)
  double l2_squared = 0.0;      // |u|_2^2
  double quartic = 0.0;         // int <G,s^2> s^2
  double primitive = 0.0;       // int F(x,s)
  double sigma_integral = 0.0;  // int sigma(x,s)
  double total = 0.0;
};

struct Evaluation {
  double energy = 0.0;
  EnergyParts parts;
  /// Q-metric Riesz representative of J'(u); empty when not requested.
  std::optional<SpectralField> gradient;
  /// ||J'(u)||_* = ||gradient||_Q.
  double gradient_norm = 0.0;
  /// L2 norm of the coefficients of J'(u).
  double residual = 0.0;
};

Evaluation evaluate(const SpectralField& u, const EnergyContext& ctx, bool with_gradient = true);
double energy(const SpectralField& u, const EnergyContext& ctx);
SpectralField gradient(const SpectralField& u, const EnergyContext& ctx);

/// || sqrt(-Lap+m^2) u - omega u - lambda <G,u^2> u - f(x,u) ||_{L2}.
double residual_stationary(const SpectralField& u, const EnergyContext& ctx);

struct LocalMinCertificate {
  double radius = 0.0;
  std::size_t samples = 0;
  double min_sampled = 0.0;
  /// c~ rho^2 - (lambda/4) C_G rho^4 - C_eps S_r^r rho^r.
  double lower_bound = 0.0;
  double c_tilde = 0.0;
  double hartree_constant = 0.0;
  double c_epsilon = 0.0;
  double embedding_constant = 0.0;
  bool holds = false;             // min_sampled > 0
  bool bound_consistent = false;  // min_sampled >= lower_bound
};

/// Samples J_sign on the sphere ||u||_Q = rho. Throws ValidationError when
/// omega + theta_inf >= m.
LocalMinCertificate verify_local_min(const EnergyContext& ctx, double rho, std::size_t count,
                                     std::uint64_t seed);

struct RayPoint {
  double t = 0.0;
  double energy = 0.0;
};

struct RayScan {
  std::vector<RayPoint> table;
  /// First tabulated t with J(t v) < 0.
  std::optional<double> crossing;
};

/// J_sign(t v) on a geometric grid of t in [t_max 2^-40, t_max]. No
/// precondition on lambda.
RayScan scan_ray(const SpectralField& v, const EnergyContext& ctx, double t_max);

/// As scan_ray, requiring lambda > 0 and v of the sign selected by ctx
/// (v >= 0 for plain/plus, v <= 0 for minus).
RayScan ray_divergence(const SpectralField& v, const EnergyContext& ctx, double t_max);

/// Grid values of v have the sign required by ctx.sign (up to roundoff).
bool has_required_sign(const SpectralField& v, Sign sign);

}  // namespace hartree
