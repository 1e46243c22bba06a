#pragma once

#include "hartree/energy.hpp"
#include "hartree/mpsolver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hartree {

struct NonlinearityChoice {
  std::string kind = "loglike";
  double r = 3.0;
};

/// One flat JSON object; every key is optional and unknown keys are rejected.
///
///   dimension, points, mass, omega, lambda,
///   nonlinearity: {"kind": "loglike"} | {"kind": "power", "r": 3} | {"kind": "zero"},
///   path_nodes, tolerance, max_iterations, armijo_c, t_max, seed, rho,
///   output, dealias
struct RunConfig {
  int dimension = 1;
  std::size_t points = 255;
  OperatorParams params{1.0, 0.5, 1.0};
  NonlinearityChoice nonlinearity;
  SolveConfig solver;
  std::string output;
  bool dealias = false;

  /// Checks everything except omega + theta_inf < m, which only solve-like
  /// modes require (see EnergyContext::validate).
  void validate() const;
  EnergyContext context() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical form with every key except `output` present, in fixed order.
nlohmann::ordered_json to_json(const RunConfig& config);
/// 64-bit FNV-1a of the compact canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace hartree
