#pragma once

// Random test fields and empirical constants of the embedding and Hartree
// inequalities:
//   |u|_q <= S_q sqrt(Q(u)),
//   |int <G,v^2> u w| <= C_G Q(v) sqrt(Q(u) Q(w)).

#include "hartree/greens.hpp"
#include "hartree/spectral.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace hartree {

/// Gaussian coefficients with a random algebraic decay (1 + |k|^2)^{-alpha/2},
/// alpha drawn from [0.5, 2.5]; both smooth and rough fields occur.
SpectralField random_field(const DomainSpec& domain, std::mt19937_64& rng);

/// Quadrature L^p norm of nodal values; p = +inf gives the max norm.
double lp_norm(std::span<const double> values, const DomainSpec& domain, double p);

struct EmpiricalConstant {
  double value = 0.0;
  std::size_t samples = 0;
};

/// max |u|_q / sqrt(Q(u)) over the low eigenmodes and `count` random fields.
EmpiricalConstant estimate_embedding_constant(const DomainSpec& domain, double mass, double q,
                                              std::uint64_t seed, std::size_t count);

/// Ratio |int <G,v^2> u w| / (Q(v) sqrt(Q(u)Q(w))) for one triple.
double hartree_ratio(const SpectralField& v, const SpectralField& u, const SpectralField& w,
                     double mass, GreenOptions options = {});

/// max ratio over `count` random triples, then sharpened by projected ascent
/// of H(u)/Q(u)^2 (which bounds every triple ratio by Cauchy-Schwarz for the
/// positive form (a,b) -> int <G,a> b).
EmpiricalConstant estimate_hartree_constant(const DomainSpec& domain, double mass,
                                            std::uint64_t seed, std::size_t count,
                                            GreenOptions options = {});

}  // namespace hartree
