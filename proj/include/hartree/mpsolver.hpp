#pragma once

// Mountain-pass critical points of J_+ / J_-.
//
// Global stage: a path from 0 to an endpoint e with J(e) < 0 is deformed by
// Armijo steepest descent (Q metric) of its highest node, with arc-length
// re-parametrization after every sweep. Local stage: once the path stalls,
// the highest node is driven to the saddle by ascent along the
// negative-curvature direction (tracked by power iteration on finite
// differences of the gradient) and descent in the complement, with the
// Cerami product (1 + ||u||) ||J'(u)|| as merit function.

#include "hartree/energy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hartree {

struct SolveConfig {
  std::size_t path_nodes = 41;
  /// Stop when (1 + ||u||_Q) ||J'(u)||_* <= tolerance.
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;
  double armijo_c = 1e-4;
  double initial_step = 1.0;
  int max_halvings = 40;
  double t_max = 1e3;
  std::uint64_t seed = 1;
  /// Radius of the sphere sampled by the local-minimum certificate.
  double rho = 0.1;
  std::size_t certificate_samples = 256;
  /// Leave the global stage once the Cerami product is below this value.
  double refine_switch = 1e-3;
  /// Leave the global stage after this many sweeps without max-energy progress.
  std::size_t stall_sweeps = 200;
  /// Ray direction; defaults to +phi_1 (plus/plain) or -phi_1 (minus).
  std::optional<SpectralField> seed_field;

  void validate() const;
};

enum class SolveStatus { converged, unconverged, geometry_failure };
std::string to_string(SolveStatus s);

struct CeramiRecord {
  std::size_t iteration = 0;
  int stage = 1;  // 1 path deformation, 2 saddle refinement
  double energy = 0.0;
  double q_norm = 0.0;
  double gradient_norm = 0.0;
  double product = 0.0;
  double sigma_integral = 0.0;
  double quartic = 0.0;
};

struct CeramiDiagnostics {
  std::vector<CeramiRecord> records;
  double sigma_min = 0.0, sigma_max = 0.0;
  double quartic_min = 0.0, quartic_max = 0.0;
  double energy_min = 0.0, energy_max = 0.0;
  double final_product = 0.0;
  /// First index of the longest non-increasing tail of the product series.
  std::size_t monotone_tail_start = 0;
  /// ||u_n|| grows monotonically over the tail while J stays bounded.
  bool divergence_flag = false;
};

/// Streams iterates and accumulates Cerami-sequence quantities.
class CeramiMonitor {
public:
  void observe(const SpectralField& u, const Evaluation& ev, int stage, double mass);
  void observe(const CeramiRecord& record);
  CeramiDiagnostics finish() const;
  const std::vector<CeramiRecord>& records() const noexcept { return records_; }

private:
  std::vector<CeramiRecord> records_;
};

CeramiDiagnostics cerami_monitor(std::span<const SpectralField> iterates, const EnergyContext& ctx);

struct PathState {
  std::vector<SpectralField> nodes;
  std::vector<double> energies;
  std::size_t max_index = 0;
  /// Highest node energy after each deformation sweep.
  std::vector<double> max_energy_history;
};

struct SolveReport {
  Sign sign = Sign::plus;
  SolveStatus status = SolveStatus::unconverged;
  std::string message;
  double critical_value = 0.0;
  double gradient_norm = 0.0;
  double cerami_product = 0.0;
  double residual = 0.0;
  /// residual / gradient_norm: measured metric-equivalence constant.
  double metric_constant = 0.0;
  std::size_t sweeps = 0;
  std::size_t refinement_iterations = 0;
  double grid_min = 0.0, grid_max = 0.0;
  double q_norm = 0.0;
  double negative_part_norm = 0.0;  // ||u^-||_Q for plus, ||u^+||_Q for minus
  double l1 = 0.0, l2 = 0.0, l4 = 0.0, linf = 0.0;
  double eta_estimate = 0.0;
  double eta_lower_bound = 0.0;
  bool within_theorem = true;  // lambda > 0
  std::vector<double> path_energies;
  std::optional<double> drift_energy, drift_l2, drift_linf;
};

struct SolveResult {
  SpectralField solution;
  SolveReport report;
  CeramiDiagnostics diagnostics;
  PathState path;
};

struct Endpoint {
  SolveStatus status = SolveStatus::geometry_failure;
  std::optional<SpectralField> field;
  double t = 0.0;
  double energy = 0.0;
  RayScan scan;
};

/// e = t* v0 with J_sign(e) < 0; t* is the first grid crossing refined by bisection.
Endpoint find_endpoint(const EnergyContext& ctx, const SpectralField& v0, const SolveConfig& config);

SolveResult mountain_pass(const EnergyContext& ctx, const SolveConfig& config);

/// Local stage only, started at `start`. `direction` seeds the
/// negative-curvature estimate (defaults to `start`).
SolveResult refine_critical_point(const EnergyContext& ctx, const SpectralField& start,
                                  const SolveConfig& config,
                                  std::optional<SpectralField> direction = std::nullopt);

struct SignedSolutions {
  SolveResult plus;
  SolveResult minus;
  /// max_j |u_plus(x_j) + u_minus(x_j)|
  double mirror_asymmetry = 0.0;
};

SignedSolutions solve_both_signs(const EnergyContext& ctx, const SolveConfig& config);

struct DriftReport {
  double energy_drift = 0.0;  // |J_2n - J_n|
  double l2_drift = 0.0;      // relative L2 distance
  double linf_drift = 0.0;    // relative change of |u|_inf
  bool converged = false;
  std::optional<SolveResult> refined;
};

/// Re-solves on the grid with 2(n+1)-1 points, seeded by the spectral prolongation of u0.
DriftReport refine_and_compare(const SpectralField& u0, const EnergyContext& ctx, const SolveConfig& config);

/// Fills the solution-dependent fields of a report.
void summarize(const SpectralField& u, const EnergyContext& ctx, SolveReport& report);

}  // namespace hartree
