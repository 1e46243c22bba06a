#pragma once

// Fields on the unit box (0,1)^d, d in {1,2}, with homogeneous Dirichlet data,
// represented in the L2-orthonormal sine eigenbasis of -Laplacian:
//
//   phi_k(x) = 2^{d/2} prod_i sin(k_i pi x_i),   lambda_k = pi^2 |k|^2,
//
// sampled on the interior grid x_j = j/(n+1), j = 1..n, with quadrature
// weight (n+1)^{-d}. Multi-indices and grid nodes are both stored in
// lexicographic (row-major) order.

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hartree {

using Point = std::array<double, 2>;

class DomainSpec {
public:
  DomainSpec(int dimension, std::size_t points);

  int dimension() const noexcept { return dimension_; }
  std::size_t points() const noexcept { return points_; }
  std::size_t size() const noexcept { return dimension_ == 1 ? points_ : points_ * points_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(points_ + 1); }
  double weight() const noexcept { return dimension_ == 1 ? spacing() : spacing() * spacing(); }

  /// 1-based multi-index of coefficient `flat`.
  std::array<std::size_t, 2> mode(std::size_t flat) const noexcept;
  /// Coordinates of grid node `flat`; unused trailing entries are zero.
  Point node(std::size_t flat) const noexcept;
  /// Dirichlet eigenvalues pi^2 |k|^2 in coefficient order.
  std::span<const double> eigenvalues() const noexcept { return *eigenvalues_; }
  double eigenfunction(std::size_t flat, const Point& x) const noexcept;
  bool contains(const Point& x, bool closed = true) const noexcept;

  friend bool operator==(const DomainSpec& a, const DomainSpec& b) noexcept {
    return a.dimension_ == b.dimension_ && a.points_ == b.points_;
  }

private:
  int dimension_;
  std::size_t points_;
  std::shared_ptr<const std::vector<double>> eigenvalues_;
};

/// Parameters of sqrt(-Lap + m^2) u - omega u - lambda <G,u^2> u = f(x,u).
struct OperatorParams {
  double mass = 1.0;
  double omega = 0.0;
  double lambda = 0.0;

  /// Throws ValidationError unless mass > 0 and all entries are finite.
  void validate() const;
};

class SpectralField {
public:
  explicit SpectralField(DomainSpec domain);
  SpectralField(DomainSpec domain, std::vector<double> coefficients);

  /// The single normalized eigenfunction with coefficient index `flat`.
  static SpectralField eigenmode(const DomainSpec& domain, std::size_t flat);

  const DomainSpec& domain() const noexcept { return domain_; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  double operator[](std::size_t k) const { return coefficients_[k]; }
  bool is_zero() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale) noexcept;
  /// this += scale * other
  SpectralField& axpy(double scale, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

private:
  void check_same_domain(const SpectralField& other) const;

  DomainSpec domain_;
  std::vector<double> coefficients_;
};

SpectralField to_spectral(std::span<const double> values, const DomainSpec& domain);
std::vector<double> to_grid(const SpectralField& field);

/// sqrt(lambda_k + m^2) in coefficient order.
std::vector<double> sqrt_op_symbol(const DomainSpec& domain, double mass);
SpectralField apply_sqrt_op(const SpectralField& field, double mass);

/// Q_m(u) = sum_k sqrt(lambda_k + m^2) c_k^2, the energy of the optimal
/// extension to the half-cylinder.
double quadratic_form(const SpectralField& u, double mass);
double q_inner(const SpectralField& u, const SpectralField& w, double mass);
double q_norm(const SpectralField& u, double mass);
double l2_inner(const SpectralField& u, const SpectralField& w);
double l2_norm(const SpectralField& u);

/// v(x,y) = sum_k c_k exp(-sqrt(lambda_k + m^2) y) phi_k(x).
double evaluate_extension(const SpectralField& u, double mass, const Point& x, double y);

struct CylinderPoint {
  Point x{};
  double y = 0.0;
};

struct ExtensionResidual {
  /// max |-Lap_h v + m^2 v| over samples (centered differences, step h).
  double pde = 0.0;
  /// max |(v(x,0) - v(x,h))/h - (sqrt(-Lap+m^2) u)(x)| over sample bases.
  double neumann = 0.0;
};

ExtensionResidual extension_residual(const SpectralField& u, double mass,
                                     std::span<const CylinderPoint> samples, double step);

/// psi(x,t) = exp(-i omega t) u(x) on the grid.
std::vector<std::complex<double>> solitary_wave(const SpectralField& u, double omega, double t);

/// Same function on a grid with `points` nodes per axis: coefficients are
/// zero-padded (or truncated when coarsening).
SpectralField resample(const SpectralField& u, std::size_t points);

}  // namespace hartree
