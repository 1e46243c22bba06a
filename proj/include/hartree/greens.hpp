#pragma once

// Hartree potential phi = <G, u^2>, where G is the Dirichlet Green function
// of -Laplacian on the box: -Lap phi = 4 pi u^2, phi = 0 on the boundary.
// The solve is diagonal in the sine basis, phi_k = 4 pi (u^2)_k / lambda_k.

#include "hartree/spectral.hpp"

#include <span>
#include <vector>

namespace hartree {

struct GreenOptions {
  /// Form pointwise products on a 3/2-padded grid before projecting back.
  bool dealias = false;
};

/// A SpectralField known to be a Hartree potential.
struct PotentialField {
  SpectralField field;
};

/// Sine coefficients of the pointwise product a*b.
std::vector<double> product_coefficients(const SpectralField& a, const SpectralField& b,
                                         GreenOptions options = {});

/// Potential sourced by an arbitrary nodal density rho: -Lap phi = 4 pi rho.
PotentialField poisson_potential(std::span<const double> density, const DomainSpec& domain);

PotentialField green_potential(const SpectralField& u, GreenOptions options = {});

/// int <G,u^2> u^2 dx (no lambda/4 prefactor).
double hartree_quartic(const SpectralField& u, GreenOptions options = {});

/// int <G,v^2> u w dx.
double hartree_trilinear(const SpectralField& v, const SpectralField& u, const SpectralField& w,
                         GreenOptions options = {});

}  // namespace hartree
