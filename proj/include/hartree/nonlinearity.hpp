#pragma once

// Reaction terms f(x,s), their primitives F(x,s) = int_0^s f(x,t) dt and
// sigma(x,s) = f(x,s) s - 2 F(x,s), together with sampled checkers for the
// growth, superquadraticity, quasi-monotonicity and small-s hypotheses and
// for the Ambrosetti-Rabinowitz condition.
//
// Checkers are seeded scans; a finite scan cannot prove a limit, so verdicts
// can be inconclusive.

#include "hartree/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hartree {

using PointwiseFn = std::function<double(const Point& x, double s)>;
using WeightFn = std::function<double(const Point& x)>;

struct NonlinearitySpec {
  std::string kind;
  int dimension = 1;
  PointwiseFn f;
  PointwiseFn primitive;  // F
  PointwiseFn sigma;

  // Hi: |f(x,s)| <= a(x) + c |s|^{r-1}
  double exponent = 3.0;
  double growth_c = 1.0;
  WeightFn growth_a;
  // Hiii: sigma(x,s) <= sigma(x,t) + beta*(x) for 0 <= s <= t or t <= s <= 0
  WeightFn beta_star;
  // Hiv: limsup_{s->0} F(x,s)/s^2 <= theta(x)/2
  WeightFn theta;
  double theta_sup = 0.0;
  double growth_a_sup = 0.0;

  bool claims_ar = false;
  double ar_exponent = 0.0;
  /// f(x,-s) == -f(x,s) for all x, s.
  bool odd = true;

  double eval_f(const Point& x, double s) const { return f(x, s); }
  double eval_F(const Point& x, double s) const { return primitive(x, s); }
  double eval_sigma(const Point& x, double s) const { return sigma(x, s); }
  bool is_zero() const noexcept { return kind == "zero"; }
};

/// Upper end 2N/(N-1) of the admissible growth exponents; +inf for N = 1.
double critical_exponent(int dimension);

/// Built-in specs: "power" (uses `r`), "loglike", "zero".
NonlinearitySpec builtin(const std::string& name, int dimension, double r = 3.0);

/// f(x,s) = w_+(x) f0(x,s) for s > 0 and w_-(x) f0(x,s) for s < 0.
/// Weights must be nonnegative and bounded by `weight_sup`.
NonlinearitySpec weighted(const NonlinearitySpec& base, WeightFn positive, WeightFn negative,
                          double weight_sup);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct HypothesisReport {
  std::string hypothesis;
  Verdict verdict = Verdict::inconclusive;
  Point witness_x{};
  double witness_s = 0.0;
  double witness_t = 0.0;
  /// Worst normalized margin; negative means violated.
  double margin = 0.0;
  std::string detail;
  /// Measured constants, in insertion order.
  std::vector<std::pair<std::string, double>> values;

  double value(const std::string& key) const;
};

HypothesisReport check_growth(const NonlinearitySpec& spec, std::uint64_t seed, std::size_t count);
HypothesisReport check_superquadratic(const NonlinearitySpec& spec, double s_max);
HypothesisReport check_quasimonotone(const NonlinearitySpec& spec, std::uint64_t seed,
                                     std::size_t count);
HypothesisReport check_small_s(const NonlinearitySpec& spec, const OperatorParams& params);

struct ARReport {
  double mu = 0.0;
  bool holds = true;
  std::optional<double> witness;
  Point witness_x{};
  /// Largest |s| at which both sides were finite.
  double scanned_up_to = 0.0;
};

/// Scans 0 < mu F(x,s) <= s f(x,s) for 1e-6 <= |s| <= s_max.
ARReport check_AR(const NonlinearitySpec& spec, double mu, double s_max);

struct ConsistencyReport {
  double max_derivative_error = 0.0;  // relative |dF/ds - f|
  double max_sigma_error = 0.0;       // relative |sigma - (f s - 2F)|
  double max_origin_value = 0.0;      // |f(x,0)|
};

ConsistencyReport check_consistency(const NonlinearitySpec& spec, std::uint64_t seed,
                                    std::size_t count);

/// Deterministic per-sample seed derived from (seed, index).
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace hartree
