#pragma once

// Command implementations behind the `hartree` executable.

#include "hartree/config.hpp"
#include "hartree/mpsolver.hpp"
#include "hartree/nonlinearity.hpp"
#include "hartree/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hartree::app {

enum class ExitCode : int { ok = 0, validation = 2, geometry = 3, nonconvergence = 4, io = 5 };

std::string version();
std::string fftw_version();

/// $HARTREE_OUTPUT_ROOT if set, otherwise "runs".
std::filesystem::path default_output_root();
/// `output` from the config if given, otherwise <root>/run-<config hash>.
std::filesystem::path output_directory(const RunConfig& config, const std::filesystem::path& root);

struct Outcome {
  ExitCode code = ExitCode::ok;
  /// One-line JSON object describing a failure; empty on success.
  std::string reason;
};

std::string reason_json(ExitCode code, const std::string& status, const std::string& message);

struct SolveOutcome : Outcome {
  std::filesystem::path directory;
  std::optional<SignedSolutions> solutions;
};

/// Solves for both signs and writes u_plus.field, u_minus.field,
/// report_{plus,minus}.json, diagnostics_{plus,minus}.csv and manifest.json.
SolveOutcome run_solve(const RunConfig& config, const std::filesystem::path& directory);

struct HypothesisTable {
  std::vector<HypothesisReport> rows;  // Hi, Hii, Hiii, Hiv
  std::vector<ARReport> ar;
  Verdict ar_verdict = Verdict::inconclusive;

  std::string render() const;
};

/// A-R is tested at mu = r for specs that claim it and at mu in {2.01, 2.1, 3} otherwise.
HypothesisTable run_hypotheses(const RunConfig& config);

std::string render(const VerifyReport& report);

/// profile.csv, path_energy.csv and ray.csv next to the solve artifacts.
std::vector<std::filesystem::path> export_plot_data(const std::filesystem::path& directory);

enum class SweepParam { lambda, omega, mass };
SweepParam parse_sweep_param(const std::string& name);

struct SweepRow {
  double value = 0.0;
  ExitCode code = ExitCode::ok;
  double j_plus = 0.0, j_minus = 0.0;
  std::filesystem::path directory;
};

/// One solve per value in <root>/<param>=<value>, plus <root>/sweep.csv.
std::vector<SweepRow> run_sweep(const RunConfig& base, SweepParam param, const std::vector<double>& values,
                                const std::filesystem::path& root);

}  // namespace hartree::app
