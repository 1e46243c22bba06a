#include "hartree/spectral.hpp"

#include "hartree/error.hpp"
#include "hartree/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hartree {
namespace {

constexpr double pi = std::numbers::pi;

// Per-axis sin(k pi x) for k = 1..n.
std::vector<double> axis_sines(std::size_t n, double x) {
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = std::sin(pi * static_cast<double>(k + 1) * x);
  return s;
}

double extension_unchecked(const SpectralField& u, std::span<const double> symbol, const Point& x,
                           double y) {
  const auto& domain = u.domain();
  const std::size_t n = domain.points();
  const auto coeffs = u.coefficients();
  const auto s1 = axis_sines(n, x[0]);
  double sum = 0.0;
  if (domain.dimension() == 1) {
    for (std::size_t k = 0; k < n; ++k) sum += coeffs[k] * std::exp(-symbol[k] * y) * s1[k];
    return std::numbers::sqrt2 * sum;
  }
  const auto s2 = axis_sines(n, x[1]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t k = a * n + b;
      sum += coeffs[k] * std::exp(-symbol[k] * y) * s1[a] * s2[b];
    }
  return 2.0 * sum;
}

}  // namespace

DomainSpec::DomainSpec(int dimension, std::size_t points) : dimension_(dimension), points_(points) {
  if (dimension != 1 && dimension != 2)
    throw ValidationError("domain dimension must be 1 or 2, got " + std::to_string(dimension));
  if (points < 1) throw ValidationError("domain needs at least one grid point per axis");
  std::vector<double> eig(size());
  for (std::size_t flat = 0; flat < eig.size(); ++flat) {
    const auto k = mode(flat);
    double k2 = static_cast<double>(k[0] * k[0]);
    if (dimension == 2) k2 += static_cast<double>(k[1] * k[1]);
    eig[flat] = pi * pi * k2;
  }
  eigenvalues_ = std::make_shared<const std::vector<double>>(std::move(eig));
}

std::array<std::size_t, 2> DomainSpec::mode(std::size_t flat) const noexcept {
  if (dimension_ == 1) return {flat + 1, 0};
  return {flat / points_ + 1, flat % points_ + 1};
}

Point DomainSpec::node(std::size_t flat) const noexcept {
  const double h = spacing();
  if (dimension_ == 1) return {static_cast<double>(flat + 1) * h, 0.0};
  return {static_cast<double>(flat / points_ + 1) * h, static_cast<double>(flat % points_ + 1) * h};
}

double DomainSpec::eigenfunction(std::size_t flat, const Point& x) const noexcept {
  const auto k = mode(flat);
  double value = std::numbers::sqrt2 * std::sin(pi * static_cast<double>(k[0]) * x[0]);
  if (dimension_ == 2) value *= std::numbers::sqrt2 * std::sin(pi * static_cast<double>(k[1]) * x[1]);
  return value;
}

bool DomainSpec::contains(const Point& x, bool closed) const noexcept {
  for (int i = 0; i < dimension_; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    if (!std::isfinite(xi)) return false;
    if (closed ? (xi < 0.0 || xi > 1.0) : (xi <= 0.0 || xi >= 1.0)) return false;
  }
  return true;
}

void OperatorParams::validate() const {
  if (!std::isfinite(mass) || !std::isfinite(omega) || !std::isfinite(lambda))
    throw ValidationError("operator parameters must be finite");
  if (mass <= 0.0) throw ValidationError("mass must be strictly positive");
}

SpectralField::SpectralField(DomainSpec domain)
    : domain_(std::move(domain)), coefficients_(domain_.size(), 0.0) {}

SpectralField::SpectralField(DomainSpec domain, std::vector<double> coefficients)
    : domain_(std::move(domain)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != domain_.size())
    throw ValidationError("coefficient count " + std::to_string(coefficients_.size()) +
                          " does not match domain size " + std::to_string(domain_.size()));
}

SpectralField SpectralField::eigenmode(const DomainSpec& domain, std::size_t flat) {
  if (flat >= domain.size()) throw ValidationError("eigenmode index out of range");
  SpectralField f(domain);
  f.coefficients_[flat] = 1.0;
  return f;
}

bool SpectralField::is_zero() const noexcept {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](double c) { return c == 0.0; });
}

void SpectralField::check_same_domain(const SpectralField& other) const {
  if (!(domain_ == other.domain_)) throw ValidationError("fields live on different domains");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_same_domain(other);
  for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] += other.coefficients_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  check_same_domain(other);
  for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] -= other.coefficients_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) noexcept {
  for (auto& c : coefficients_) c *= scale;
  return *this;
}

SpectralField& SpectralField::axpy(double scale, const SpectralField& other) {
  check_same_domain(other);
  for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] += scale * other.coefficients_[k];
  return *this;
}

SpectralField to_spectral(std::span<const double> values, const DomainSpec& domain) {
  if (values.size() != domain.size())
    throw ValidationError("grid field has " + std::to_string(values.size()) + " values, expected " +
                          std::to_string(domain.size()));
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
    throw ValidationError("grid field contains non-finite values");
  std::vector<double> coeffs(values.size());
  kernels::parallel::sine_transform(values, coeffs, domain.dimension(), domain.points());
  const double axis_scale = std::numbers::sqrt2 * domain.spacing();
  const double scale = domain.dimension() == 1 ? axis_scale : axis_scale * axis_scale;
  for (auto& c : coeffs) c *= scale;
  return SpectralField(domain, std::move(coeffs));
}

std::vector<double> to_grid(const SpectralField& field) {
  const auto& domain = field.domain();
  std::vector<double> values(field.size());
  kernels::parallel::sine_transform(field.coefficients(), values, domain.dimension(), domain.points());
  const double scale = domain.dimension() == 1 ? std::numbers::sqrt2 : 2.0;
  for (auto& v : values) v *= scale;
  return values;
}

std::vector<double> sqrt_op_symbol(const DomainSpec& domain, double mass) {
  if (!(mass > 0.0)) throw ValidationError("mass must be strictly positive");
  const auto eig = domain.eigenvalues();
  std::vector<double> symbol(eig.size());
  for (std::size_t k = 0; k < eig.size(); ++k) symbol[k] = std::sqrt(eig[k] + mass * mass);
  return symbol;
}

SpectralField apply_sqrt_op(const SpectralField& field, double mass) {
  const auto symbol = sqrt_op_symbol(field.domain(), mass);
  std::vector<double> out(field.coefficients().begin(), field.coefficients().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= symbol[k];
  return SpectralField(field.domain(), std::move(out));
}

double q_inner(const SpectralField& u, const SpectralField& w, double mass) {
  if (!(u.domain() == w.domain())) throw ValidationError("fields live on different domains");
  const auto symbol = sqrt_op_symbol(u.domain(), mass);
  double sum = 0.0;
  for (std::size_t k = 0; k < symbol.size(); ++k) sum += symbol[k] * u[k] * w[k];
  return sum;
}

double quadratic_form(const SpectralField& u, double mass) { return q_inner(u, u, mass); }

double q_norm(const SpectralField& u, double mass) { return std::sqrt(quadratic_form(u, mass)); }

double l2_inner(const SpectralField& u, const SpectralField& w) {
  if (!(u.domain() == w.domain())) throw ValidationError("fields live on different domains");
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) sum += u[k] * w[k];
  return sum;
}

double l2_norm(const SpectralField& u) { return std::sqrt(l2_inner(u, u)); }

double evaluate_extension(const SpectralField& u, double mass, const Point& x, double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw ValidationError("extension height must be >= 0");
  if (!u.domain().contains(x)) throw ValidationError("extension point outside the closed domain");
  return extension_unchecked(u, sqrt_op_symbol(u.domain(), mass), x, y);
}

ExtensionResidual extension_residual(const SpectralField& u, double mass,
                                     std::span<const CylinderPoint> samples, double step) {
  if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive");
  const auto symbol = sqrt_op_symbol(u.domain(), mass);
  const int d = u.domain().dimension();
  const SpectralField lifted = apply_sqrt_op(u, mass);
  const auto ext = [&](const Point& x, double y) { return extension_unchecked(u, symbol, x, y); };
  const double h2 = step * step;

  ExtensionResidual result;
  for (const auto& s : samples) {
    if (!u.domain().contains(s.x, false) || !(s.y > 0.0) || !std::isfinite(s.y))
      throw ValidationError("extension sample outside the open half-cylinder");
    const double centre = ext(s.x, s.y);
    double laplacian = (ext(s.x, s.y + step) - 2.0 * centre + ext(s.x, s.y - step)) / h2;
    for (int axis = 0; axis < d; ++axis) {
      Point plus = s.x, minus = s.x;
      plus[static_cast<std::size_t>(axis)] += step;
      minus[static_cast<std::size_t>(axis)] -= step;
      laplacian += (ext(plus, s.y) - 2.0 * centre + ext(minus, s.y)) / h2;
    }
    result.pde = std::max(result.pde, std::abs(-laplacian + mass * mass * centre));

    const double flux = (ext(s.x, 0.0) - ext(s.x, step)) / step;
    const double target = extension_unchecked(lifted, symbol, s.x, 0.0);
    result.neumann = std::max(result.neumann, std::abs(flux - target));
  }
  return result;
}

std::vector<std::complex<double>> solitary_wave(const SpectralField& u, double omega, double t) {
  const auto values = to_grid(u);
  const std::complex<double> phase = std::polar(1.0, -omega * t);
  std::vector<std::complex<double>> psi(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) psi[j] = phase * values[j];
  return psi;
}

SpectralField resample(const SpectralField& u, std::size_t points) {
  const DomainSpec target(u.domain().dimension(), points);
  std::vector<double> coeffs(target.size(), 0.0);
  const std::size_t keep = std::min(points, u.domain().points());
  if (target.dimension() == 1) {
    std::copy_n(u.coefficients().begin(), keep, coeffs.begin());
  } else {
    const std::size_t n_old = u.domain().points();
    for (std::size_t a = 0; a < keep; ++a)
      for (std::size_t b = 0; b < keep; ++b) coeffs[a * points + b] = u[a * n_old + b];
  }
  return SpectralField(target, std::move(coeffs));
}

}  // namespace hartree
