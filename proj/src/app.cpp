#include "hartree/app.hpp"

#include "hartree/error.hpp"
#include "hartree/field_io.hpp"
#include "hartree/greens.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace hartree::app {
namespace fs = std::filesystem;
namespace {

using ordered_json = nlohmann::ordered_json;

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const ordered_json& doc) { write_text(path, doc.dump(2) + "\n"); }

ordered_json read_json(const fs::path& path) {
  try {
    return ordered_json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

ExitCode code_for(const SignedSolutions& s) {
  const auto a = s.plus.report.status, b = s.minus.report.status;
  if (a == SolveStatus::geometry_failure || b == SolveStatus::geometry_failure) return ExitCode::geometry;
  if (a != SolveStatus::converged || b != SolveStatus::converged) return ExitCode::nonconvergence;
  return ExitCode::ok;
}

std::string status_name(ExitCode code) {
  switch (code) {
    case ExitCode::ok: return "ok";
    case ExitCode::validation: return "validation_error";
    case ExitCode::geometry: return "geometry_failure";
    case ExitCode::nonconvergence: return "unconverged";
    case ExitCode::io: return "io_error";
  }
  return "?";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string version() { return "0.1.0"; }
std::string fftw_version() { return ::fftw_version; }

fs::path default_output_root() {
  if (const char* env = std::getenv("HARTREE_OUTPUT_ROOT"); env && *env) return env;
  return "runs";
}

fs::path output_directory(const RunConfig& config, const fs::path& root) {
  if (!config.output.empty()) return config.output;
  return root / ("run-" + config_hash(config));
}

std::string reason_json(ExitCode code, const std::string& status, const std::string& message) {
  nlohmann::ordered_json j;
  j["exit_code"] = static_cast<int>(code);
  j["status"] = status;
  j["reason"] = message;
  return j.dump();
}

SolveOutcome run_solve(const RunConfig& config, const fs::path& directory) {
  SolveOutcome out;
  out.directory = directory;
  try {
    const auto ctx = config.context();
    ctx.validate();
    auto solutions = solve_both_signs(ctx, config.solver);

    ensure_directory(directory);
    write_field(directory / "u_plus.field", solutions.plus.solution);
    write_field(directory / "u_minus.field", solutions.minus.solution);
    auto plus = report_to_json(solutions.plus.report);
    auto minus = report_to_json(solutions.minus.report);
    plus["mirror_asymmetry"] = solutions.mirror_asymmetry;
    minus["mirror_asymmetry"] = solutions.mirror_asymmetry;
    write_json(directory / "report_plus.json", plus);
    write_json(directory / "report_minus.json", minus);
    write_text(directory / "diagnostics_plus.csv", diagnostics_csv(solutions.plus.diagnostics));
    write_text(directory / "diagnostics_minus.csv", diagnostics_csv(solutions.minus.diagnostics));

    ordered_json manifest;
    manifest["version"] = version();
    manifest["fftw_version"] = fftw_version();
    manifest["config_hash"] = config_hash(config);
    manifest["config"] = to_json(config);
    manifest["artifacts"] = {"u_plus.field",         "u_minus.field",        "report_plus.json",
                             "report_minus.json",    "diagnostics_plus.csv", "diagnostics_minus.csv"};
    manifest["status"] = {{"plus", to_string(solutions.plus.report.status)},
                          {"minus", to_string(solutions.minus.report.status)}};
    write_json(directory / "manifest.json", manifest);

    out.code = code_for(solutions);
    if (out.code != ExitCode::ok) {
      const auto& bad = solutions.plus.report.status != SolveStatus::converged ? solutions.plus : solutions.minus;
      out.reason = reason_json(out.code, status_name(out.code), to_string(bad.report.sign) + ": " + bad.report.message);
    }
    out.solutions = std::move(solutions);
  } catch (const ValidationError& e) {
    out.code = ExitCode::validation;
    out.reason = reason_json(out.code, status_name(out.code), e.what());
  } catch (const IoError& e) {
    out.code = ExitCode::io;
    out.reason = reason_json(out.code, status_name(out.code), e.what());
  }
  return out;
}

std::string HypothesisTable::render() const {
  std::ostringstream out;
  out << pad("hypothesis", 28) << pad("verdict", 14) << "detail\n";
  for (const auto& r : rows) out << pad(r.hypothesis, 28) << pad(to_string(r.verdict), 14) << r.detail << '\n';
  std::ostringstream detail;
  for (const auto& a : ar) {
    detail << "mu=" << a.mu << ": ";
    if (a.witness)
      detail << "fails at s=" << std::setprecision(6) << *a.witness << "; ";
    else
      detail << "holds up to |s|=" << a.scanned_up_to << "; ";
  }
  out << pad("A-R", 28) << pad(ar_verdict == Verdict::pass ? "holds" : ar_verdict == Verdict::fail ? "fails" : "inconclusive", 14)
      << detail.str() << '\n';
  return out.str();
}

HypothesisTable run_hypotheses(const RunConfig& config) {
  config.validate();
  const auto spec = builtin(config.nonlinearity.kind, config.dimension, config.nonlinearity.r);
  const auto seed = config.solver.seed;
  HypothesisTable table;
  table.rows.push_back(check_growth(spec, seed, 10000));
  table.rows.push_back(check_superquadratic(spec, 1e6));
  table.rows.push_back(check_quasimonotone(spec, seed, 10000));
  table.rows.push_back(check_small_s(spec, config.params));

  const std::vector<double> exponents =
      spec.claims_ar ? std::vector<double>{spec.ar_exponent} : std::vector<double>{2.01, 2.1, 3.0};
  bool any_holds = false, all_witnessed = true;
  for (double mu : exponents) {
    table.ar.push_back(check_AR(spec, mu, 1e300));
    any_holds = any_holds || table.ar.back().holds;
    all_witnessed = all_witnessed && table.ar.back().witness.has_value();
  }
  table.ar_verdict = any_holds ? Verdict::pass : (all_witnessed ? Verdict::fail : Verdict::inconclusive);
  return table;
}

std::string render(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& p : report.properties)
    out << (p.passed ? "PASS " : "FAIL ") << pad(p.name, 28) << " worst=" << std::setprecision(4) << p.worst
        << " limit=" << p.limit << " samples=" << p.samples << "  " << p.detail << '\n';
  const auto failed = std::count_if(report.properties.begin(), report.properties.end(),
                                    [](const PropertyResult& p) { return !p.passed; });
  out << report.properties.size() - static_cast<std::size_t>(failed) << " passed, " << failed << " failed\n";
  return out.str();
}

std::vector<fs::path> export_plot_data(const fs::path& directory) {
  for (const char* name : {"manifest.json", "u_plus.field", "u_minus.field", "report_plus.json", "report_minus.json"})
    if (!fs::exists(directory / name)) throw IoError("missing artifact " + (directory / name).string());

  const auto manifest = read_json(directory / "manifest.json");
  const auto config = parse_config(nlohmann::json::parse(manifest.at("config").dump()));
  const auto u_plus = read_field(directory / "u_plus.field").field;
  const auto u_minus = read_field(directory / "u_minus.field").field;
  const auto ctx = config.context();
  const auto& domain = u_plus.domain();
  if (!(domain == ctx.domain) || !(u_minus.domain() == ctx.domain))
    throw IoError("field files do not match the manifest grid");

  std::vector<fs::path> written;
  const auto plus = to_grid(u_plus), minus = to_grid(u_minus);
  const auto phi = to_grid(green_potential(u_plus, ctx.green).field);
  std::string profile = domain.dimension() == 1 ? "x,u_plus,u_minus,phi\n" : "x1,x2,field,value\n";
  for (std::size_t j = 0; j < domain.size(); ++j) {
    const auto x = domain.node(j);
    if (domain.dimension() == 1) {
      profile += format_double(x[0]) + ',' + format_double(plus[j]) + ',' + format_double(minus[j]) + ',' +
                 format_double(phi[j]) + '\n';
    } else {
      const std::string at = format_double(x[0]) + ',' + format_double(x[1]) + ',';
      profile += at + "u_plus," + format_double(plus[j]) + '\n';
      profile += at + "u_minus," + format_double(minus[j]) + '\n';
      profile += at + "phi," + format_double(phi[j]) + '\n';
    }
  }
  write_text(directory / "profile.csv", profile);
  written.push_back(directory / "profile.csv");

  const auto ep = read_json(directory / "report_plus.json").at("path_energies").get<std::vector<double>>();
  const auto em = read_json(directory / "report_minus.json").at("path_energies").get<std::vector<double>>();
  std::string path = "node,J_plus,J_minus\n";
  for (std::size_t i = 0; i < std::max(ep.size(), em.size()); ++i) {
    path += std::to_string(i) + ',' + (i < ep.size() ? format_double(ep[i]) : "") + ',' +
            (i < em.size() ? format_double(em[i]) : "") + '\n';
  }
  write_text(directory / "path_energy.csv", path);
  written.push_back(directory / "path_energy.csv");

  auto seed = SpectralField::eigenmode(domain, 0);
  seed *= 1.0 / q_norm(seed, ctx.params.mass);
  const auto ray_plus = scan_ray(seed, ctx.with_sign(Sign::plus), config.solver.t_max);
  const auto ray_minus = scan_ray(-seed, ctx.with_sign(Sign::minus), config.solver.t_max);
  std::string ray = "t,J_plus,J_minus\n";
  for (std::size_t i = 0; i < ray_plus.table.size(); ++i)
    ray += format_double(ray_plus.table[i].t) + ',' + format_double(ray_plus.table[i].energy) + ',' +
           format_double(ray_minus.table[i].energy) + '\n';
  write_text(directory / "ray.csv", ray);
  written.push_back(directory / "ray.csv");
  return written;
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "lambda") return SweepParam::lambda;
  if (name == "omega") return SweepParam::omega;
  if (name == "mass") return SweepParam::mass;
  throw ValidationError("unknown sweep parameter '" + name + "' (expected lambda, omega or mass)");
}

std::vector<SweepRow> run_sweep(const RunConfig& base, SweepParam param, const std::vector<double>& values,
                                const fs::path& root) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  const std::string name = param == SweepParam::lambda ? "lambda" : param == SweepParam::omega ? "omega" : "mass";
  ensure_directory(root);
  std::vector<SweepRow> rows(values.size());
  const auto count = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    auto config = base;
    auto& target = param == SweepParam::lambda ? config.params.lambda
                   : param == SweepParam::omega ? config.params.omega
                                                : config.params.mass;
    target = values[k];
    config.output.clear();
    auto& row = rows[k];
    row.value = values[k];
    row.directory = root / (name + "=" + format_double(values[k]));
    const auto outcome = run_solve(config, row.directory);
    row.code = outcome.code;
    if (outcome.solutions) {
      row.j_plus = outcome.solutions->plus.report.critical_value;
      row.j_minus = outcome.solutions->minus.report.critical_value;
    }
  }
  std::string csv = name + ",exit_code,J_plus,J_minus,directory\n";
  for (const auto& r : rows)
    csv += format_double(r.value) + ',' + std::to_string(static_cast<int>(r.code)) + ',' + format_double(r.j_plus) +
           ',' + format_double(r.j_minus) + ',' + r.directory.filename().string() + '\n';
  write_text(root / "sweep.csv", csv);
  return rows;
}

}  // namespace hartree::app
