#include "hartree/nonlinearity.hpp"

#include "hartree/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace hartree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

WeightFn constant(double value) {
  return [value](const Point&) { return value; };
}

// (1+x) ln(1+x) - x, accurate for small x.
double loglike_primitive_core(double x) {
  if (x < 1e-3) {
    double term = x;
    double sum = 0.0;
    for (int k = 2; k <= 10; ++k) {
      term *= -x;
      sum += term / static_cast<double>(k * (k - 1));
    }
    return -sum;
  }
  return (1.0 + x) * std::log1p(x) - x;
}

// x - ln(1+x), accurate for small x.
double loglike_sigma_core(double x) {
  if (x < 1e-3) {
    double term = -x;
    double sum = 0.0;
    for (int k = 2; k <= 12; ++k) {
      term *= -x;
      sum += term / static_cast<double>(k);
    }
    return sum;
  }
  return x - std::log1p(x);
}

// Points of a regular lattice strictly inside the box, `per_axis` per axis.
std::vector<Point> lattice(int dimension, std::size_t per_axis) {
  std::vector<Point> pts;
  const double h = 1.0 / static_cast<double>(per_axis + 1);
  for (std::size_t i = 1; i <= per_axis; ++i) {
    if (dimension == 1) {
      pts.push_back({static_cast<double>(i) * h, 0.0});
      continue;
    }
    for (std::size_t j = 1; j <= per_axis; ++j)
      pts.push_back({static_cast<double>(i) * h, static_cast<double>(j) * h});
  }
  return pts;
}

Point random_point(std::mt19937_64& rng, int dimension) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point x{unit(rng), 0.0};
  if (dimension == 2) x[1] = unit(rng);
  return x;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> grid;
  const double a = std::log10(lo), b = std::log10(hi);
  const int steps = std::max(1, static_cast<int>(std::ceil((b - a) * per_decade)));
  for (int i = 0; i <= steps; ++i) grid.push_back(std::pow(10.0, a + (b - a) * i / steps));
  return grid;
}

// Index of the smallest margin; ties go to the lowest index.
std::size_t worst_index(const std::vector<double>& margins) {
  return static_cast<std::size_t>(std::min_element(margins.begin(), margins.end()) - margins.begin());
}

}  // namespace

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 of the combined key
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double critical_exponent(int dimension) {
  if (dimension <= 1) return kInf;
  return 2.0 * dimension / (dimension - 1.0);
}

NonlinearitySpec builtin(const std::string& name, int dimension, double r) {
  if (dimension != 1 && dimension != 2) throw ValidationError("nonlinearity dimension must be 1 or 2");
  NonlinearitySpec spec;
  spec.kind = name;
  spec.dimension = dimension;
  spec.theta = constant(0.0);
  spec.beta_star = constant(0.0);
  if (name == "power") {
    if (!(r > 2.0 && r < critical_exponent(dimension))) {
      std::ostringstream msg;
      msg << "power exponent r=" << r << " outside (2, " << critical_exponent(dimension) << ")";
      throw ValidationError(msg.str());
    }
    spec.f = [r](const Point&, double s) { return std::pow(std::abs(s), r - 2.0) * s; };
    spec.primitive = [r](const Point&, double s) { return std::pow(std::abs(s), r) / r; };
    spec.sigma = [r](const Point&, double s) { return (1.0 - 2.0 / r) * std::pow(std::abs(s), r); };
    spec.exponent = r;
    spec.growth_c = 1.0;
    spec.growth_a = constant(0.0);
    spec.claims_ar = true;
    spec.ar_exponent = r;
  } else if (name == "loglike") {
    spec.f = [](const Point&, double s) { return s * std::log1p(s * s); };
    spec.primitive = [](const Point&, double s) { return 0.5 * loglike_primitive_core(s * s); };
    spec.sigma = [](const Point&, double s) { return loglike_sigma_core(s * s); };
    spec.exponent = 3.0;
    spec.growth_c = 1.0;
    spec.growth_a = constant(1.0);
    spec.growth_a_sup = 1.0;
  } else if (name == "zero") {
    spec.f = [](const Point&, double) { return 0.0; };
    spec.primitive = spec.f;
    spec.sigma = spec.f;
    spec.exponent = 3.0;
    spec.growth_c = 1.0;
    spec.growth_a = constant(0.0);
  } else {
    throw ValidationError("unknown nonlinearity kind '" + name + "'");
  }
  return spec;
}

NonlinearitySpec weighted(const NonlinearitySpec& base, WeightFn positive, WeightFn negative,
                          double weight_sup) {
  if (!(weight_sup >= 0.0)) throw ValidationError("weight bound must be nonnegative");
  NonlinearitySpec spec = base;
  spec.kind = base.kind + "-weighted";
  const auto pick = [positive, negative](const Point& x, double s) {
    return s > 0.0 ? positive(x) : (s < 0.0 ? negative(x) : 0.0);
  };
  spec.f = [f = base.f, pick](const Point& x, double s) { return pick(x, s) * f(x, s); };
  spec.primitive = [F = base.primitive, pick](const Point& x, double s) { return pick(x, s) * F(x, s); };
  spec.sigma = [sg = base.sigma, pick](const Point& x, double s) { return pick(x, s) * sg(x, s); };
  spec.growth_a = [a = base.growth_a, weight_sup](const Point& x) { return weight_sup * a(x); };
  spec.growth_a_sup = base.growth_a_sup * weight_sup;
  spec.growth_c = base.growth_c * weight_sup;
  spec.theta = [t = base.theta, weight_sup](const Point& x) { return weight_sup * t(x); };
  spec.theta_sup = base.theta_sup * weight_sup;
  spec.beta_star = [b = base.beta_star, weight_sup](const Point& x) { return weight_sup * b(x); };
  spec.odd = false;
  return spec;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double HypothesisReport::value(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw std::out_of_range("hypothesis report has no value '" + key + "'");
}

HypothesisReport check_growth(const NonlinearitySpec& spec, std::uint64_t seed, std::size_t count) {
  if (count < 1) throw ValidationError("check_growth needs at least one sample");
  const double r = spec.exponent, c = spec.growth_c;
  std::vector<double> margins(count);
  std::vector<Point> xs(count);
  std::vector<double> ss(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(sample_seed(seed, static_cast<std::uint64_t>(i)));
    const Point x = random_point(rng, spec.dimension);
    std::uniform_real_distribution<double> expo(-6.0, 6.0);
    const double mag = std::pow(10.0, expo(rng));
    const double s = (rng() & 1U) ? mag : -mag;
    const double a = spec.growth_a(x);
    const double f_bound = a + c * std::pow(mag, r - 1.0);
    const double F_bound = a * mag + (c / r) * std::pow(mag, r);
    const double f_margin = (f_bound - std::abs(spec.f(x, s))) / std::max(f_bound, 1e-300);
    const double F_margin = (F_bound - std::abs(spec.primitive(x, s))) / std::max(F_bound, 1e-300);
    const auto k = static_cast<std::size_t>(i);
    margins[k] = std::min(f_margin, F_margin);
    xs[k] = x;
    ss[k] = s;
  }
  const std::size_t w = worst_index(margins);
  HypothesisReport report;
  report.hypothesis = "Hi (growth)";
  report.margin = margins[w];
  report.witness_x = xs[w];
  report.witness_s = ss[w];
  report.verdict = margins[w] >= -1e-12 ? Verdict::pass : Verdict::fail;
  std::ostringstream detail;
  detail << "|f| <= a + c|s|^(r-1) and |F| <= a|s| + (c/r)|s|^r with r=" << r << ", c=" << c
         << " on " << count << " samples, |s| in [1e-6,1e6]";
  report.detail = detail.str();
  report.values = {{"r", r}, {"c", c}, {"a_sup", spec.growth_a_sup}};
  return report;
}

HypothesisReport check_superquadratic(const NonlinearitySpec& spec, double s_max) {
  if (!(s_max > 1.0)) throw ValidationError("check_superquadratic needs S_max > 1");
  const auto xs = lattice(spec.dimension, spec.dimension == 1 ? 17 : 7);
  constexpr double kMinIncrement = 0.1;  // per decade of s
  HypothesisReport report;
  report.hypothesis = "Hii (superquadratic)";
  std::vector<double> ratios;
  std::vector<double> levels;
  for (double s = 10.0; s <= s_max * (1.0 + 1e-12); s *= 10.0) {
    double lowest = kInf;
    Point arg{};
    for (const auto& x : xs)
      for (double sg : {s, -s}) {
        const double q = spec.primitive(x, sg) / (sg * sg);
        if (q < lowest) {
          lowest = q;
          arg = x;
        }
      }
    if (!std::isfinite(lowest)) break;
    ratios.push_back(lowest);
    levels.push_back(s);
    if (ratios.size() == 1) report.witness_x = arg;
  }
  if (ratios.size() < 2) {
    report.verdict = Verdict::inconclusive;
    report.detail = "fewer than two decades scanned";
    return report;
  }
  double min_increment = kInf;
  bool increasing = true;
  for (std::size_t j = 1; j < ratios.size(); ++j) {
    const double inc = ratios[j] - ratios[j - 1];
    if (inc < min_increment) {
      min_increment = inc;
      report.witness_s = levels[j];
    }
    if (inc <= 1e-12 * std::max(1.0, std::abs(ratios[j]))) increasing = false;
  }
  report.margin = min_increment;
  report.verdict = !increasing ? Verdict::fail
                               : (min_increment >= kMinIncrement ? Verdict::pass : Verdict::inconclusive);
  std::ostringstream detail;
  detail << "min_x F(x,s)/s^2 along s=10..." << levels.back() << ": first " << ratios.front()
         << ", last " << ratios.back() << ", smallest per-decade increase " << min_increment
         << " (threshold " << kMinIncrement << ")";
  report.detail = detail.str();
  report.values = {{"first_ratio", ratios.front()}, {"last_ratio", ratios.back()},
                   {"min_increment", min_increment}};
  return report;
}

HypothesisReport check_quasimonotone(const NonlinearitySpec& spec, std::uint64_t seed,
                                     std::size_t count) {
  if (count < 1) throw ValidationError("check_quasimonotone needs at least one sample");
  struct Sample {
    double margin;
    Point x;
    double s, t;
  };
  const auto violation_margin = [&](const Point& x, double s, double t) {
    const double ss = spec.sigma(x, s), st = spec.sigma(x, t);
    const double slack = 1e-12 * std::max({1.0, std::abs(ss), std::abs(st)});
    return st + spec.beta_star(x) + slack - ss;
  };

  std::vector<Sample> samples(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(sample_seed(seed, static_cast<std::uint64_t>(i)));
    const Point x = random_point(rng, spec.dimension);
    std::uniform_real_distribution<double> expo(-3.0, 6.0), unit(0.0, 1.0);
    double t = std::pow(10.0, expo(rng));
    double s = t * unit(rng);
    if (rng() & 1U) {
      t = -t;
      s = -s;
    }
    samples[static_cast<std::size_t>(i)] = {violation_margin(x, s, t), x, s, t};
  }

  // Structured scan: for each lattice x, compare every grid value with the
  // running maximum of sigma over smaller |s| on the same side.
  const auto grid = log_grid(1e-4, 1e6, 50);
  for (const auto& x : lattice(spec.dimension, spec.dimension == 1 ? 9 : 3)) {
    for (double side : {1.0, -1.0}) {
      double best_s = 0.0, best_sigma = spec.sigma(x, 0.0);
      for (double mag : grid) {
        const double t = side * mag;
        samples.push_back({violation_margin(x, best_s, t), x, best_s, t});
        const double st = spec.sigma(x, t);
        if (st > best_sigma) {
          best_sigma = st;
          best_s = t;
        }
      }
    }
  }

  std::size_t w = 0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].margin < samples[w].margin) w = i;
  HypothesisReport report;
  report.hypothesis = "Hiii (quasi-monotone sigma)";
  report.margin = samples[w].margin;
  report.witness_x = samples[w].x;
  report.witness_s = samples[w].s;
  report.witness_t = samples[w].t;
  report.verdict = report.margin >= 0.0 ? Verdict::pass : Verdict::fail;
  std::ostringstream detail;
  detail << "sigma(x,s) <= sigma(x,t) + beta*(x) on " << count << " random pairs plus a log-grid scan";
  report.detail = detail.str();
  return report;
}

HypothesisReport check_small_s(const NonlinearitySpec& spec, const OperatorParams& params) {
  HypothesisReport report;
  report.hypothesis = "Hiv (small s)";
  const double gap = params.mass - params.omega;
  const auto xs = lattice(spec.dimension, spec.dimension == 1 ? 9 : 3);

  // limsup F/s^2 <= theta/2: sup over 0 < |s| <= delta for shrinking delta.
  // A positive excess that decays like a power of delta still has limsup 0.
  double excess = -kInf;
  std::vector<double> excesses;
  for (double delta = 1e-1; delta >= 1e-8 * (1.0 - 1e-9); delta *= 0.1) {
    excess = -kInf;
    for (const auto& x : xs) {
      const double half_theta = 0.5 * spec.theta(x);
      for (double mag : log_grid(delta * 1e-3, delta, 20))
        for (double s : {mag, -mag}) {
          const double e = spec.primitive(x, s) / (s * s) - half_theta;
          if (e > excess) {
            excess = e;
            report.witness_x = x;
            report.witness_s = s;
          }
        }
    }
    excesses.push_back(excess);
  }
  bool decaying = excesses.size() >= 4;
  for (std::size_t k = excesses.size() - 4; decaying && k + 1 < excesses.size(); ++k)
    if (!(excesses[k] > 0.0) || !(excesses[k + 1] < excesses[k] * std::pow(10.0, -0.05))) decaying = false;
  const bool limsup_ok = excess <= 1e-6 || decaying;

  // Joined bound F <= (theta+eps)/2 s^2 + C_eps |s|^r with C_eps = |a|_inf/delta^{r-1} + c/r.
  const double eps = gap - spec.theta_sup > 0.0 ? 0.5 * (gap - spec.theta_sup) : 0.1;
  double delta = 0.0;
  const auto scan = log_grid(1e-8, 1.0, 40);
  for (double cand = 1.0; cand >= 1e-6; cand *= 0.5) {
    bool ok = true;
    for (const auto& x : xs) {
      const double bound_coeff = 0.5 * (spec.theta(x) + eps);
      for (double mag : scan) {
        if (mag >= cand) break;
        for (double s : {mag, -mag})
          if (spec.primitive(x, s) > bound_coeff * s * s) ok = false;
      }
    }
    if (ok) {
      delta = cand;
      break;
    }
  }
  const double r = spec.exponent;
  bool joined_ok = delta > 0.0;
  double c_eps = kInf;
  if (joined_ok) {
    c_eps = spec.growth_a_sup / std::pow(delta, r - 1.0) + spec.growth_c / r;
    for (const auto& x : xs)
      for (double mag : log_grid(1e-6, 1e6, 20))
        for (double s : {mag, -mag}) {
          const double bound = 0.5 * (spec.theta(x) + eps) * s * s + c_eps * std::pow(mag, r);
          if (spec.primitive(x, s) > bound * (1.0 + 1e-12)) joined_ok = false;
        }
  }

  const bool gap_ok = spec.theta_sup < gap;
  report.margin = gap - spec.theta_sup;
  report.verdict = (limsup_ok && joined_ok && gap_ok) ? Verdict::pass : Verdict::fail;
  std::ostringstream detail;
  detail << "theta_inf=" << spec.theta_sup << " vs m-omega=" << gap
         << "; sup F/s^2 - theta/2 near 0: " << excess << "; eps=" << eps << ", delta=" << delta
         << ", C_eps=" << c_eps;
  if (!gap_ok) detail << " [theta_inf >= m - omega]";
  if (!limsup_ok) detail << " [limsup exceeds theta/2]";
  if (!joined_ok) detail << " [joined bound violated]";
  report.detail = detail.str();
  report.values = {{"theta_sup", spec.theta_sup}, {"epsilon", eps}, {"delta", delta},
                   {"c_epsilon", c_eps}, {"limsup_excess", excess}};
  return report;
}

ARReport check_AR(const NonlinearitySpec& spec, double mu, double s_max) {
  if (!(mu > 2.0)) throw ValidationError("Ambrosetti-Rabinowitz exponent must exceed 2");
  if (!(s_max > 1e-6)) throw ValidationError("check_AR needs S_max > 1e-6");
  ARReport report;
  report.mu = mu;
  const auto xs = lattice(spec.dimension, spec.dimension == 1 ? 5 : 3);

  // Violation of 0 < mu F <= s f.
  const auto violates = [&](const Point& x, double s) -> std::optional<bool> {
    const double F = spec.primitive(x, s), sf = s * spec.f(x, s);
    if (!std::isfinite(F) || !std::isfinite(sf)) return std::nullopt;
    return !(mu * F > 0.0) || mu * F > sf * (1.0 + 1e-12);
  };

  const auto grid = log_grid(1e-6, s_max, 50);
  double prev = 0.0;
  for (double mag : grid) {
    bool finite = true;
    for (const auto& x : xs)
      for (double side : {1.0, -1.0}) {
        const auto v = violates(x, side * mag);
        if (!v) {
          finite = false;
          continue;
        }
        if (!*v) continue;
        // Bisect in log|s| between the last clean grid value and this one.
        double lo = prev, hi = mag;
        if (lo > 0.0) {
          for (int it = 0; it < 80; ++it) {
            const double mid = std::sqrt(lo * hi);
            const auto vm = violates(x, side * mid);
            if (vm && *vm) hi = mid;
            else lo = mid;
          }
        }
        if (!report.witness || hi < std::abs(*report.witness)) {
          report.witness = side * hi;
          report.witness_x = x;
        }
      }
    if (!finite) break;
    report.scanned_up_to = mag;
    if (report.witness) break;
    prev = mag;
  }
  report.holds = !report.witness.has_value();
  return report;
}

ConsistencyReport check_consistency(const NonlinearitySpec& spec, std::uint64_t seed,
                                    std::size_t count) {
  ConsistencyReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-2.0, 3.0);
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = random_point(rng, spec.dimension);
    const double mag = std::pow(10.0, expo(rng));
    const double s = (rng() & 1U) ? mag : -mag;
    const double h = 1e-4 * mag;
    const double fd = (spec.primitive(x, s + h) - spec.primitive(x, s - h)) / (2.0 * h);
    const double f = spec.f(x, s), F = spec.primitive(x, s);
    const double scale_f = std::max(std::abs(f), 1e-300);
    report.max_derivative_error = std::max(report.max_derivative_error, std::abs(fd - f) / scale_f);
    const double scale_sigma = std::max({std::abs(f * s), std::abs(2.0 * F), 1e-300});
    report.max_sigma_error =
        std::max(report.max_sigma_error, std::abs(spec.sigma(x, s) - (f * s - 2.0 * F)) / scale_sigma);
    report.max_origin_value = std::max(report.max_origin_value, std::abs(spec.f(x, 0.0)));
  }
  return report;
}

}  // namespace hartree
