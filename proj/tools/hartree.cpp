#include "hartree/app.hpp"
#include "hartree/error.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using hartree::app::ExitCode;

int fail(ExitCode code, const std::string& status, const std::string& message) {
  std::cerr << hartree::app::reason_json(code, status, message) << '\n';
  return static_cast<int>(code);
}

int solve(const std::string& config_path, const std::string& output) {
  auto config = hartree::load_config(config_path);
  if (!output.empty()) config.output = output;
  const auto dir = hartree::app::output_directory(config, hartree::app::default_output_root());
  const auto outcome = hartree::app::run_solve(config, dir);
  if (outcome.solutions) {
    const auto& s = *outcome.solutions;
    std::cout << "artifacts: " << dir.string() << '\n';
    for (const auto* r : {&s.plus.report, &s.minus.report})
      std::cout << to_string(r->sign) << ": " << to_string(r->status) << "  J=" << r->critical_value
                << "  |J'|=" << r->gradient_norm << "  residual=" << r->residual << "  min=" << r->grid_min
                << "  max=" << r->grid_max << '\n';
    std::cout << "mirror asymmetry: " << s.mirror_asymmetry << '\n';
  }
  if (outcome.code != ExitCode::ok) std::cerr << outcome.reason << '\n';
  return static_cast<int>(outcome.code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Bound states of the pseudo-relativistic Hartree equation on the unit box"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", hartree::app::version());

  std::string config_path, output, dir, param, mutate;
  bool quick = false;
  std::uint64_t seed = hartree::VerifyOptions{}.seed;
  std::vector<double> values;

  auto* solve_cmd = cli.add_subcommand("solve", "find the positive and the negative solution");
  solve_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  solve_cmd->add_option("--output", output, "artifact directory (overrides the config)");

  auto* verify_cmd = cli.add_subcommand("verify", "run the property suite");
  verify_cmd->add_flag("--quick", quick, "coarse grids and fewer samples");
  verify_cmd->add_option("--seed", seed, "sampling seed");
  verify_cmd->add_option("--mutate", mutate, "inject a deliberate fault")->check(CLI::IsMember({"hartree-gradient-sign"}));

  auto* hyp_cmd = cli.add_subcommand("hypotheses", "tabulate the hypothesis checks for the configured reaction term");
  hyp_cmd->add_option("--config", config_path, "JSON run configuration")->required();

  auto* export_cmd = cli.add_subcommand("export", "write plot tables for a finished solve");
  export_cmd->add_option("--dir", dir, "artifact directory")->required();

  auto* sweep_cmd = cli.add_subcommand("sweep", "solve for several values of one parameter");
  sweep_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  sweep_cmd->add_option("--param", param, "lambda, omega or mass")->required();
  sweep_cmd->add_option("--values", values, "comma-separated parameter values")->required()->delimiter(',');
  sweep_cmd->add_option("--output", output, "sweep root directory");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }

  try {
    if (*solve_cmd) return solve(config_path, output);
    if (*verify_cmd) {
      hartree::VerifyOptions options;
      options.quick = quick;
      options.seed = seed;
      if (!mutate.empty()) options.fault = hartree::Fault::hartree_gradient_sign;
      const auto report = hartree::run_verify(options);
      std::cout << hartree::app::render(report);
      if (!report.all_passed()) return fail(ExitCode::validation, "verify_failed", "one or more properties failed");
      return 0;
    }
    if (*hyp_cmd) {
      std::cout << hartree::app::run_hypotheses(hartree::load_config(config_path)).render();
      return 0;
    }
    if (*export_cmd) {
      for (const auto& p : hartree::app::export_plot_data(dir)) std::cout << p.string() << '\n';
      return 0;
    }
    if (*sweep_cmd) {
      const auto config = hartree::load_config(config_path);
      const auto which = hartree::app::parse_sweep_param(param);
      const auto root = output.empty() ? hartree::app::default_output_root() / ("sweep-" + param) : std::filesystem::path(output);
      const auto rows = hartree::app::run_sweep(config, which, values, root);
      int worst = 0;
      for (const auto& r : rows) {
        std::cout << param << '=' << r.value << "  exit=" << static_cast<int>(r.code) << "  J+=" << r.j_plus
                  << "  J-=" << r.j_minus << '\n';
        if (worst == 0) worst = static_cast<int>(r.code);
      }
      std::cout << "summary: " << (root / "sweep.csv").string() << '\n';
      return worst;
    }
  } catch (const hartree::ValidationError& e) {
    return fail(ExitCode::validation, "validation_error", e.what());
  } catch (const hartree::IoError& e) {
    return fail(ExitCode::io, "io_error", e.what());
  }
  return 0;
}
