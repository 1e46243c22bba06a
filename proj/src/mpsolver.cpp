#include "hartree/mpsolver.hpp"

#include "hartree/error.hpp"
#include "hartree/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hartree {
namespace {

constexpr double kTieTolerance = 1e-12;

double product_of(double q_norm, double gradient_norm) { return (1.0 + q_norm) * gradient_norm; }

SpectralField default_seed(const EnergyContext& ctx) {
  auto v = SpectralField::eigenmode(ctx.domain, 0);
  if (ctx.sign == Sign::minus) v *= -1.0;
  return v;
}

std::vector<double> path_energies(const std::vector<SpectralField>& nodes, const EnergyContext& ctx) {
  std::vector<double> out(nodes.size());
  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = energy(nodes[i], ctx);
  return out;
}

// Highest interior node; the lowest index wins among near-ties.
std::size_t max_node(const std::vector<double>& energies) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < energies.size(); ++i) top = std::max(top, energies[i]);
  const double slack = kTieTolerance * std::max(1.0, std::abs(top));
  for (std::size_t i = 1; i + 1 < energies.size(); ++i)
    if (energies[i] >= top - slack) return i;
  return 1;
}

// Equal Q-arc-length spacing along the polygon through `nodes`.
std::vector<SpectralField> reparametrize(const std::vector<SpectralField>& nodes, double mass) {
  const std::size_t count = nodes.size();
  std::vector<double> arc(count, 0.0);
  for (std::size_t i = 1; i < count; ++i) arc[i] = arc[i - 1] + q_norm(nodes[i] - nodes[i - 1], mass);
  const double total = arc.back();
  std::vector<SpectralField> out;
  out.reserve(count);
  out.push_back(nodes.front());
  std::size_t seg = 1;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(count - 1);
    while (seg + 1 < count && arc[seg] < target) ++seg;
    const double len = arc[seg] - arc[seg - 1];
    const double s = len > 0.0 ? std::clamp((target - arc[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back((1.0 - s) * nodes[seg - 1] + s * nodes[seg]);
  }
  out.push_back(nodes.back());
  return out;
}

SpectralField normalized(SpectralField v, double mass) {
  const double norm = q_norm(v, mass);
  if (!(norm > 0.0)) throw ValidationError("cannot normalize a zero field");
  return v *= 1.0 / norm;
}

// Central difference of the Q-gradient along a unit direction.
SpectralField hessian_times(const SpectralField& u, const SpectralField& tau, const EnergyContext& ctx,
                            double step) {
  auto plus = gradient(u + step * tau, ctx);
  plus -= gradient(u - step * tau, ctx);
  return plus *= 0.5 / step;
}

struct LocalStage {
  SpectralField u;
  Evaluation eval;
  std::size_t iterations = 0;
  bool converged = false;
  std::string message;
};

bool criteria_met(const Evaluation& ev, double q, double tol) {
  return product_of(q, ev.gradient_norm) <= tol && ev.residual <= 10.0 * tol;
}

LocalStage saddle_refinement(const EnergyContext& ctx, SpectralField u, SpectralField tau,
                             const SolveConfig& config, std::size_t budget, std::size_t first_iteration,
                             CeramiMonitor& monitor) {
  const double mass = ctx.params.mass;
  LocalStage stage{u, evaluate(u, ctx), 0, false, {}};
  tau = normalized(std::move(tau), mass);
  double q = q_norm(stage.u, mass);
  double merit = product_of(q, stage.eval.gradient_norm);
  monitor.observe(stage.u, stage.eval, 2, mass);

  int power_steps = 8;
  while (stage.iterations < budget) {
    if (criteria_met(stage.eval, q, config.tolerance)) {
      stage.converged = true;
      return stage;
    }
    const double fd_step = 1e-5 * std::max(1.0, q);
    double kappa = 0.0;
    for (int p = 0; p < power_steps; ++p) {
      const auto h_tau = hessian_times(stage.u, tau, ctx, fd_step);
      kappa = q_inner(h_tau, tau, mass);
      if (p + 1 < power_steps) tau = normalized(tau - h_tau, mass);
    }
    power_steps = 2;

    const auto& g = *stage.eval.gradient;
    const double g_tau = q_inner(g, tau, mass);
    SpectralField step = -1.0 * g;
    step.axpy(g_tau, tau);
    // Newton along the unstable direction; plain ascent if the curvature sign is lost.
    step.axpy(kappa < 0.0 ? -g_tau / kappa : g_tau, tau);

    bool accepted = false;
    double alpha = 1.0;
    for (int h = 0; h <= config.max_halvings; ++h, alpha *= 0.5) {
      auto trial = stage.u;
      trial.axpy(alpha, step);
      auto ev = evaluate(trial, ctx);
      const double q_trial = q_norm(trial, mass);
      const double m_trial = product_of(q_trial, ev.gradient_norm);
      if (m_trial < merit) {
        stage.u = std::move(trial);
        stage.eval = std::move(ev);
        q = q_trial;
        merit = m_trial;
        accepted = true;
        break;
      }
    }
    ++stage.iterations;
    CeramiRecord rec;
    rec.iteration = first_iteration + stage.iterations;
    rec.stage = 2;
    rec.energy = stage.eval.energy;
    rec.q_norm = q;
    rec.gradient_norm = stage.eval.gradient_norm;
    rec.product = merit;
    rec.sigma_integral = stage.eval.parts.sigma_integral;
    rec.quartic = stage.eval.parts.quartic;
    if (accepted) monitor.observe(rec);
    if (!accepted) {
      stage.converged = criteria_met(stage.eval, q, config.tolerance);
      if (!stage.converged) stage.message = "saddle refinement stalled: no step reduces the Cerami product";
      return stage;
    }
  }
  stage.converged = criteria_met(stage.eval, q, config.tolerance);
  if (!stage.converged) stage.message = "iteration cap reached";
  return stage;
}

SolveResult finish(SolveResult result, const EnergyContext& ctx, const CeramiMonitor& monitor) {
  result.diagnostics = monitor.finish();
  result.report.sign = ctx.sign;
  summarize(result.solution, ctx, result.report);
  result.report.within_theorem = ctx.params.lambda > 0.0;
  return result;
}

SolveResult geometry_failure(const EnergyContext& ctx, std::string message) {
  SolveResult result{SpectralField(ctx.domain), {}, {}, {}};
  result.report.sign = ctx.sign;
  result.report.status = SolveStatus::geometry_failure;
  result.report.message = std::move(message);
  result.report.within_theorem = ctx.params.lambda > 0.0;
  return result;
}

}  // namespace

void SolveConfig::validate() const {
  if (path_nodes < 3) throw ValidationError("path needs at least 3 nodes");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (max_iterations < 1) throw ValidationError("max_iterations must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ValidationError("armijo_c must lie in (0,1)");
  if (!(initial_step > 0.0)) throw ValidationError("initial_step must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive and finite");
  if (!(rho > 0.0)) throw ValidationError("rho must be positive");
  if (certificate_samples < 1) throw ValidationError("certificate_samples must be positive");
  if (!(refine_switch > 0.0)) throw ValidationError("refine_switch must be positive");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::unconverged: return "unconverged";
    case SolveStatus::geometry_failure: return "geometry_failure";
  }
  return "?";
}

void CeramiMonitor::observe(const SpectralField& u, const Evaluation& ev, int stage, double mass) {
  CeramiRecord rec;
  rec.iteration = records_.empty() ? 0 : records_.back().iteration + 1;
  rec.stage = stage;
  rec.energy = ev.energy;
  rec.q_norm = q_norm(u, mass);
  rec.gradient_norm = ev.gradient_norm;
  rec.product = product_of(rec.q_norm, rec.gradient_norm);
  rec.sigma_integral = ev.parts.sigma_integral;
  rec.quartic = ev.parts.quartic;
  records_.push_back(rec);
}

void CeramiMonitor::observe(const CeramiRecord& record) { records_.push_back(record); }

CeramiDiagnostics CeramiMonitor::finish() const {
  CeramiDiagnostics d;
  d.records = records_;
  if (records_.empty()) return d;
  const auto& first = records_.front();
  d.sigma_min = d.sigma_max = first.sigma_integral;
  d.quartic_min = d.quartic_max = first.quartic;
  d.energy_min = d.energy_max = first.energy;
  for (const auto& r : records_) {
    d.sigma_min = std::min(d.sigma_min, r.sigma_integral);
    d.sigma_max = std::max(d.sigma_max, r.sigma_integral);
    d.quartic_min = std::min(d.quartic_min, r.quartic);
    d.quartic_max = std::max(d.quartic_max, r.quartic);
    d.energy_min = std::min(d.energy_min, r.energy);
    d.energy_max = std::max(d.energy_max, r.energy);
  }
  d.final_product = records_.back().product;
  std::size_t start = records_.size() - 1;
  while (start > 0 && records_[start - 1].product >= records_[start].product) --start;
  d.monotone_tail_start = start;

  constexpr std::size_t window = 5;
  if (records_.size() >= window) {
    const std::size_t from = records_.size() - window;
    bool growing = true;
    for (std::size_t i = from + 1; i < records_.size(); ++i)
      growing = growing && records_[i].q_norm > records_[i - 1].q_norm &&
                records_[i].product > records_[i - 1].product;
    d.divergence_flag = growing;
  }
  return d;
}

CeramiDiagnostics cerami_monitor(std::span<const SpectralField> iterates, const EnergyContext& ctx) {
  CeramiMonitor monitor;
  for (const auto& u : iterates) monitor.observe(u, evaluate(u, ctx), 0, ctx.params.mass);
  return monitor.finish();
}

void summarize(const SpectralField& u, const EnergyContext& ctx, SolveReport& report) {
  const double mass = ctx.params.mass;
  const auto ev = evaluate(u, ctx);
  report.critical_value = ev.energy;
  report.gradient_norm = ev.gradient_norm;
  report.q_norm = q_norm(u, mass);
  report.cerami_product = product_of(report.q_norm, ev.gradient_norm);
  report.residual = residual_stationary(u, ctx);
  report.metric_constant = ev.gradient_norm > 0.0 ? report.residual / ev.gradient_norm : 0.0;

  const auto grid = to_grid(u);
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  report.grid_min = *lo;
  report.grid_max = *hi;
  std::vector<double> wrong(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    wrong[j] = ctx.sign == Sign::minus ? std::max(grid[j], 0.0) : std::min(grid[j], 0.0);
  report.negative_part_norm = ctx.sign == Sign::plain ? 0.0 : q_norm(to_spectral(wrong, u.domain()), mass);
  report.l1 = lp_norm(grid, u.domain(), 1.0);
  report.l2 = lp_norm(grid, u.domain(), 2.0);
  report.l4 = lp_norm(grid, u.domain(), 4.0);
  report.linf = lp_norm(grid, u.domain(), std::numeric_limits<double>::infinity());
}

Endpoint find_endpoint(const EnergyContext& ctx, const SpectralField& v0, const SolveConfig& config) {
  if (v0.is_zero()) throw ValidationError("ray seed must be nonzero");
  if (!has_required_sign(v0, ctx.sign))
    throw ValidationError(ctx.sign == Sign::minus ? "ray seed must be <= 0 on the grid"
                                                  : "ray seed must be >= 0 on the grid");
  Endpoint out;
  out.scan = scan_ray(v0, ctx, config.t_max);
  if (!out.scan.crossing) return out;

  double hi = *out.scan.crossing;
  double lo = 0.0;
  for (std::size_t i = 1; i < out.scan.table.size(); ++i)
    if (out.scan.table[i].t == hi) lo = out.scan.table[i - 1].t;
  while (hi - lo > 1e-6 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (energy(mid * v0, ctx) < 0.0 ? hi : lo) = mid;
  }
  out.status = SolveStatus::converged;
  out.t = hi;
  out.field = hi * v0;
  out.energy = energy(*out.field, ctx);
  return out;
}

SolveResult mountain_pass(const EnergyContext& ctx, const SolveConfig& config) {
  config.validate();
  ctx.validate();
  const double mass = ctx.params.mass;

  const auto cert = verify_local_min(ctx, config.rho, config.certificate_samples, config.seed);
  if (!cert.holds) return geometry_failure(ctx, "no strict local minimum at 0 on the sampled sphere");
  const auto v0 = normalized(config.seed_field.value_or(default_seed(ctx)), mass);
  const auto endpoint = find_endpoint(ctx, v0, config);
  if (endpoint.status != SolveStatus::converged)
    return geometry_failure(ctx, "energy stays nonnegative along the seed ray up to t_max");

  CeramiMonitor monitor;
  PathState path;
  const std::size_t count = config.path_nodes;
  for (std::size_t i = 0; i < count; ++i)
    path.nodes.push_back((static_cast<double>(i) / static_cast<double>(count - 1)) * *endpoint.field);
  path.energies = path_energies(path.nodes, ctx);

  // Global stage: deform the path by lowering its highest node.
  std::size_t sweeps = 0, stalled = 0;
  double alpha = config.initial_step;
  double best_top = std::numeric_limits<double>::infinity();
  while (sweeps < config.max_iterations) {
    const std::size_t i = max_node(path.energies);
    path.max_index = i;
    const auto ev = evaluate(path.nodes[i], ctx);
    const double q = q_norm(path.nodes[i], mass);
    monitor.observe(path.nodes[i], ev, 1, mass);
    if (product_of(q, ev.gradient_norm) <= config.refine_switch || stalled >= config.stall_sweeps) break;

    // Steepest descent across the path: the tangential part would only slide the node along it.
    auto g = *ev.gradient;
    const auto tangent = path.nodes[i + 1] - path.nodes[i - 1];
    if (!tangent.is_zero()) {
      const auto t = normalized(tangent, mass);
      g.axpy(-q_inner(g, t, mass), t);
    }
    const double slope = q_inner(g, g, mass);
    alpha = std::min(config.initial_step, 2.0 * alpha);
    bool moved = false;
    for (int h = 0; h <= config.max_halvings; ++h, alpha *= 0.5) {
      auto trial = path.nodes[i];
      trial.axpy(-alpha, g);
      const double e = energy(trial, ctx);
      if (e <= ev.energy - config.armijo_c * alpha * slope) {
        path.nodes[i] = std::move(trial);
        path.energies[i] = e;
        moved = true;
        break;
      }
    }
    ++sweeps;
    const auto interior_top = [](const std::vector<double>& e) {
      return *std::max_element(e.begin() + 1, e.end() - 1);
    };
    const double top_before = interior_top(path.energies);
    auto candidate = reparametrize(path.nodes, mass);
    auto candidate_energies = path_energies(candidate, ctx);
    if (interior_top(candidate_energies) <= top_before + kTieTolerance * std::max(1.0, std::abs(top_before))) {
      path.nodes = std::move(candidate);
      path.energies = std::move(candidate_energies);
    }
    const double top = interior_top(path.energies);
    path.max_energy_history.push_back(top);
    stalled = (!moved || top > best_top - 1e-14 * std::max(1.0, std::abs(best_top))) ? stalled + 1 : 0;
    best_top = std::min(best_top, top);
  }
  path.max_index = max_node(path.energies);

  // Local stage from the highest node, unstable direction seeded by the path tangent.
  const std::size_t i = path.max_index;
  auto tangent = path.nodes[i + 1] - path.nodes[i - 1];
  if (tangent.is_zero()) tangent = path.nodes[i];
  const std::size_t budget = config.max_iterations - std::min(config.max_iterations, sweeps);
  const std::size_t first = monitor.records().empty() ? 0 : monitor.records().back().iteration;
  auto local = saddle_refinement(ctx, path.nodes[i], std::move(tangent), config, budget, first, monitor);

  SolveResult result{std::move(local.u), {}, {}, std::move(path)};
  result.report.status = local.converged ? SolveStatus::converged : SolveStatus::unconverged;
  result.report.message = local.converged ? "converged" : local.message;
  result.report.sweeps = sweeps;
  result.report.refinement_iterations = local.iterations;
  result.report.eta_estimate = cert.min_sampled;
  result.report.eta_lower_bound = cert.lower_bound;
  result.report.path_energies = result.path.energies;
  return finish(std::move(result), ctx, monitor);
}

SolveResult refine_critical_point(const EnergyContext& ctx, const SpectralField& start,
                                  const SolveConfig& config, std::optional<SpectralField> direction) {
  config.validate();
  ctx.validate();
  if (!(start.domain() == ctx.domain)) throw ValidationError("start field and context use different domains");
  if (start.is_zero()) throw ValidationError("refinement needs a nonzero start field");
  CeramiMonitor monitor;
  auto local = saddle_refinement(ctx, start, direction.value_or(start), config, config.max_iterations, 0, monitor);
  SolveResult result{std::move(local.u), {}, {}, {}};
  result.report.status = local.converged ? SolveStatus::converged : SolveStatus::unconverged;
  result.report.message = local.converged ? "converged" : local.message;
  result.report.refinement_iterations = local.iterations;
  return finish(std::move(result), ctx, monitor);
}

SignedSolutions solve_both_signs(const EnergyContext& ctx, const SolveConfig& config) {
  SignedSolutions out{mountain_pass(ctx.with_sign(Sign::plus), config),
                      mountain_pass(ctx.with_sign(Sign::minus), config), 0.0};
  const auto plus = to_grid(out.plus.solution);
  const auto minus = to_grid(out.minus.solution);
  for (std::size_t j = 0; j < plus.size(); ++j)
    out.mirror_asymmetry = std::max(out.mirror_asymmetry, std::abs(plus[j] + minus[j]));
  return out;
}

DriftReport refine_and_compare(const SpectralField& u0, const EnergyContext& ctx, const SolveConfig& config) {
  if (!(u0.domain() == ctx.domain)) throw ValidationError("field and context use different domains");
  DriftReport out;
  if (u0.is_zero()) {
    if (ctx.params.lambda == 0.0 && ctx.nonlinearity.is_zero()) {
      out.converged = true;
      return out;
    }
    throw ValidationError("zero field is not a mountain-pass critical point");
  }
  const DomainSpec fine(ctx.domain.dimension(), 2 * (ctx.domain.points() + 1) - 1);
  const auto fine_ctx = ctx.on_domain(fine);
  const auto seed = resample(u0, fine.points());
  auto refined = refine_critical_point(fine_ctx, seed, config, seed);

  const double coarse_energy = energy(u0, ctx);
  out.energy_drift = std::abs(refined.report.critical_value - coarse_energy);
  out.l2_drift = l2_norm(refined.solution - seed) / l2_norm(seed);
  const auto coarse_grid = to_grid(u0);
  const double inf = std::numeric_limits<double>::infinity();
  const double coarse_linf = lp_norm(coarse_grid, ctx.domain, inf);
  out.linf_drift = std::abs(refined.report.linf - coarse_linf) / coarse_linf;
  out.converged = refined.report.status == SolveStatus::converged;
  refined.report.drift_energy = out.energy_drift;
  refined.report.drift_l2 = out.l2_drift;
  refined.report.drift_linf = out.linf_drift;
  out.refined = std::move(refined);
  return out;
}

}  // namespace hartree
