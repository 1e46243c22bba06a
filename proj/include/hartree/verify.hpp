#pragma once

// Property suite over the numerical kernels: transforms, operator, extension,
// Green potential, functional inequalities, gradients and reaction terms.

#include "hartree/energy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hartree {

struct VerifyOptions {
  /// n = 31 in 1D (15 in 2D) with fewer samples and looser tolerances.
  bool quick = false;
  std::uint64_t seed = 20240601;
  Fault fault = Fault::none;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  /// Worst observed statistic and the limit it is compared against.
  double worst = 0.0;
  double limit = 0.0;
  std::size_t samples = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool all_passed() const;
};

/// Tolerances used by the suite, exposed for reporting.
struct VerifyTolerances {
  std::size_t points_1d, points_2d;
  double roundoff;          // transforms, Parseval, self-adjointness, symmetry
  double extension_order;   // minimal observed PDE-residual order
  double gradient;          // directional finite differences
  std::size_t fields;       // random fields for the inequality checks
  std::size_t triples;      // C_G estimation triples
  std::size_t fresh;        // fresh C_G test triples
  std::size_t directions;   // finite-difference directions per case
};
VerifyTolerances verify_tolerances(bool quick);

VerifyReport run_verify(const VerifyOptions& options);

PropertyResult check_transform_roundtrip(const DomainSpec& domain, std::uint64_t seed, std::size_t count, double tol);
PropertyResult check_parseval(const DomainSpec& domain, std::uint64_t seed, std::size_t count, double tol);
PropertyResult check_operator_eigen(const DomainSpec& domain, double mass, double tol);
PropertyResult check_self_adjoint(const DomainSpec& domain, double mass, std::uint64_t seed, std::size_t count,
                                  double tol);
/// m |u|_2^2 <= Q_m(u); passes with zero violations.
PropertyResult check_trace_inequality(const DomainSpec& domain, double mass, std::uint64_t seed,
                                      std::size_t count);
/// Extension energy by quadrature in y equals Q_m(u); other exponential profiles cost more.
PropertyResult check_extension_energy(const DomainSpec& domain, double mass, std::uint64_t seed, std::size_t count);
/// Observed order of the PDE residual and of the Neumann trace error for u = phi_1.
PropertyResult check_extension_order(const DomainSpec& domain, double mass, std::size_t samples,
                                     double min_order);
PropertyResult check_green_symmetry(const DomainSpec& domain, std::uint64_t seed, std::size_t count, double tol);
PropertyResult check_potential_sign(const DomainSpec& domain, std::uint64_t seed, std::size_t count);
PropertyResult check_hartree_constant(const DomainSpec& domain, double mass, std::uint64_t seed,
                                      std::size_t triples, std::size_t fresh);
/// |int <G,a> b| / (|W|_r |a|_p |b|_q) with W = pi 1_{|z|<1}, r = 2, p = q = 4/3 (1D only).
PropertyResult check_w_inequality(const DomainSpec& domain, std::uint64_t seed, std::size_t count);
PropertyResult check_embedding(const DomainSpec& domain, double mass, std::uint64_t seed, std::size_t count);
/// Central differences of J along random directions against <J'(u), v>_Q.
PropertyResult check_gradient(const EnergyContext& ctx, std::uint64_t seed, std::size_t count, double tol);
PropertyResult check_nonlinearity(const NonlinearitySpec& spec, std::uint64_t seed, std::size_t count);

}  // namespace hartree
