#include "hartree/app.hpp"
#include "hartree/config.hpp"
#include "hartree/energy.hpp"
#include "hartree/error.hpp"
#include "hartree/field_io.hpp"
#include "hartree/sampling.hpp"

#include <doctest.h>
#include <omp.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

using namespace hartree;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hartree-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig small_config(int d = 1) {
  RunConfig c;
  c.dimension = d;
  c.points = d == 1 ? 63 : 15;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HARTREE_EXE + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("field files round trip bit for bit") {
  std::mt19937_64 rng(3);
  for (const DomainSpec& d : {DomainSpec(1, 31), DomainSpec(2, 7)}) {
    const auto u = random_field(d, rng);
    for (auto enc : {Encoding::text, Encoding::binary}) {
      const auto back = parse_field(format_field(u, "spectral", enc));
      CHECK(back.encoding == enc);
      CHECK(back.repr == "spectral");
      CHECK(back.field.domain() == d);
      for (std::size_t k = 0; k < u.size(); ++k) CHECK(back.field[k] == u[k]);
    }
  }
  CHECK(format_field(SpectralField(DomainSpec(1, 3)), "spectral", Encoding::binary)
            .rfind("HARTREE-FIELD v1; d=1; n=3; repr=spectral; enc=f64le\n", 0) == 0);
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("malformed field files are rejected") {
  CHECK_THROWS(parse_field(""));
  CHECK_THROWS(parse_field("HARTREE-FIELD v2; d=1; n=1; repr=spectral\n1\n"));
  CHECK_THROWS(parse_field("HARTREE-FIELD v1; d=3; n=1; repr=spectral\n1\n"));
  CHECK_THROWS(parse_field("HARTREE-FIELD v1; d=1; n=2; repr=spectral\n1\n"));
  CHECK_THROWS(parse_field("HARTREE-FIELD v1; d=1; n=1; repr=grid\n1\n"));
  CHECK_THROWS(parse_field("HARTREE-FIELD v1; d=1; n=1; repr=spectral\nabc\n"));
  CHECK_THROWS(parse_field("HARTREE-FIELD v1; d=1; n=1; repr=spectral; enc=f64le\n1234"));
  CHECK_NOTHROW(parse_field("HARTREE-FIELD v1; d=1; n=1; repr=potential\n1.5\n"));
  CHECK_THROWS_AS(read_field("/nonexistent/dir/u.field"), IoError);
}

TEST_CASE("configuration parsing") {
  const auto c = parse_config(nlohmann::json::parse(R"({"dimension":2,"points":31,"omega":0.25,
      "nonlinearity":{"kind":"power","r":3.5},"tolerance":1e-9,"dealias":true})"));
  CHECK(c.dimension == 2);
  CHECK(c.points == 31);
  CHECK(c.params.omega == 0.25);
  CHECK(c.nonlinearity.kind == "power");
  CHECK(c.nonlinearity.r == 3.5);
  CHECK(c.solver.tolerance == 1e-9);
  CHECK(c.dealias);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"dimensions":2})")), ValidationError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"nonlinearity":{"kind":"power","q":3}})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"points":"many"})")), ValidationError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"([1,2])")), ValidationError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"mass":0})")).validate(), ValidationError);
}

TEST_CASE("configuration hash") {
  const auto a = small_config();
  auto b = a;
  b.output = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.params.lambda = 2.0;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(parse_config(nlohmann::json::parse(to_json(a).dump()))) == config_hash(a));
  CHECK(app::output_directory(a, "root") == fs::path("root") / ("run-" + config_hash(a)));
  CHECK(app::output_directory(b, "root") == fs::path("elsewhere"));
}

TEST_CASE("solve writes its artifacts") {
  TempDir tmp("solve");
  const auto config = small_config();
  const auto out = app::run_solve(config, tmp.path / "run");
  REQUIRE(out.code == app::ExitCode::ok);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path / "run")) ++files;
  CHECK(files == 7);

  const auto report = nlohmann::json::parse(read_text(tmp.path / "run" / "report_plus.json"));
  const auto u = read_field(tmp.path / "run" / "u_plus.field").field;
  const auto ctx = config.context().with_sign(Sign::plus);
  CHECK(std::abs(residual_stationary(u, ctx) - report.at("residual_stationary").get<double>()) <= 1e-12);
  CHECK(report.at("status") == "converged");
  CHECK(report.at("critical_value").get<double>() == energy(u, ctx));

  const auto manifest = nlohmann::json::parse(read_text(tmp.path / "run" / "manifest.json"));
  CHECK(manifest.at("config_hash") == config_hash(config));
  CHECK(manifest.at("version") == app::version());
  const auto csv = read_text(tmp.path / "run" / "diagnostics_plus.csv");
  CHECK(csv.rfind("iteration,J,gradnorm,cerami_product,sigma_integral,quartic_integral\n", 0) == 0);
}

TEST_CASE("artifacts do not depend on the thread count") {
  TempDir tmp("threads");
  const auto config = small_config();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  REQUIRE(app::run_solve(config, tmp.path / "one").code == app::ExitCode::ok);
  omp_set_num_threads(4);
  REQUIRE(app::run_solve(config, tmp.path / "four").code == app::ExitCode::ok);
  omp_set_num_threads(saved);
  for (const char* name : {"u_plus.field", "u_minus.field", "report_plus.json", "report_minus.json",
                           "diagnostics_plus.csv", "diagnostics_minus.csv", "manifest.json"})
    CHECK(read_text(tmp.path / "one" / name) == read_text(tmp.path / "four" / name));
}

TEST_CASE("solve failures map to exit codes") {
  TempDir tmp("fail");
  auto config = small_config();
  config.params.omega = config.params.mass;
  CHECK(app::run_solve(config, tmp.path / "a").code == app::ExitCode::validation);
  config = small_config();
  config.params.lambda = 0.0;
  config.nonlinearity.kind = "zero";
  const auto geo = app::run_solve(config, tmp.path / "b");
  CHECK(geo.code == app::ExitCode::geometry);
  CHECK(nlohmann::json::parse(geo.reason).at("status").is_string());
  CHECK(app::reason_json(app::ExitCode::io, "io", "x").find('\n') == std::string::npos);
}

TEST_CASE("plot data export") {
  TempDir tmp("export");
  SUBCASE("one dimension") {
    REQUIRE(app::run_solve(small_config(), tmp.path / "run").code == app::ExitCode::ok);
    const auto files = app::export_plot_data(tmp.path / "run");
    CHECK(files.size() == 3);
    const auto profile = read_text(tmp.path / "run" / "profile.csv");
    CHECK(profile.rfind("x,u_plus,u_minus,phi\n", 0) == 0);
    CHECK(line_count(profile) == 63 + 1);
    CHECK(read_text(tmp.path / "run" / "path_energy.csv").rfind("node,J_plus,J_minus\n", 0) == 0);
    CHECK(read_text(tmp.path / "run" / "ray.csv").rfind("t,J_plus,J_minus\n", 0) == 0);
  }
  SUBCASE("two dimensions use the long format") {
    REQUIRE(app::run_solve(small_config(2), tmp.path / "run").code == app::ExitCode::ok);
    app::export_plot_data(tmp.path / "run");
    const auto profile = read_text(tmp.path / "run" / "profile.csv");
    CHECK(profile.rfind("x1,x2,field,value\n", 0) == 0);
    CHECK(line_count(profile) == 3 * 15 * 15 + 1);
  }
  SUBCASE("missing artifacts") {
    fs::create_directories(tmp.path / "empty");
    CHECK_THROWS_AS(app::export_plot_data(tmp.path / "empty"), IoError);
  }
}

TEST_CASE("parameter sweep") {
  TempDir tmp("sweep");
  const auto rows = app::run_sweep(small_config(), app::SweepParam::lambda, {0.5, 1.0, 2.0}, tmp.path);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.code == app::ExitCode::ok);
  CHECK(rows[0].j_plus > rows[1].j_plus);
  CHECK(rows[1].j_plus > rows[2].j_plus);
  CHECK(fs::exists(tmp.path / "lambda=1" / "manifest.json"));
  CHECK(line_count(read_text(tmp.path / "sweep.csv")) == 4);
  CHECK(app::parse_sweep_param("omega") == app::SweepParam::omega);
  CHECK_THROWS_AS(app::parse_sweep_param("points"), ValidationError);
  CHECK_THROWS_AS(app::run_sweep(small_config(), app::SweepParam::mass, {}, tmp.path), ValidationError);
}

TEST_CASE("hypothesis table") {
  const auto table = app::run_hypotheses(small_config());
  CHECK(table.rows.size() == 4);
  for (const auto& r : table.rows) CHECK(r.verdict == Verdict::pass);
  CHECK(table.ar.size() == 3);
  CHECK(table.ar_verdict == Verdict::fail);
  CHECK(table.render().find("Hiii") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  TempDir tmp("cli");
  const auto write = [&](const std::string& name, const std::string& body) {
    write_text(tmp.path / name, body);
    return (tmp.path / name).string();
  };
  const auto ok = write("ok.json", R"({"points":31})");
  CHECK(run_cli("solve --config " + ok + " --output " + (tmp.path / "run").string()) == 0);
  CHECK(run_cli("export --dir " + (tmp.path / "run").string()) == 0);
  CHECK(run_cli("hypotheses --config " + ok) == 0);
  CHECK(run_cli("solve --config " + write("gap.json", R"({"points":31,"omega":1})")) == 2);
  CHECK(run_cli("solve --config " + write("key.json", R"({"pionts":31})")) == 2);
  CHECK(run_cli("solve --config " + write("r.json", R"({"nonlinearity":{"kind":"power","r":2}})")) == 2);
  CHECK(run_cli("solve --config " +
                write("geo.json", R"({"points":31,"lambda":0,"nonlinearity":{"kind":"zero"}})") + " --output " +
                (tmp.path / "geo").string()) == 3);
  fs::create_directories(tmp.path / "empty");
  CHECK(run_cli("export --dir " + (tmp.path / "empty").string()) == 5);
  CHECK(run_cli("solve --config " + (tmp.path / "missing.json").string()) == 5);
  CHECK(run_cli("verify --quick") == 0);
  CHECK(run_cli("verify --quick --mutate hartree-gradient-sign") != 0);
  CHECK(run_cli("sweep --config " + ok + " --param lambda --values 0.5,1 --output " + (tmp.path / "sw").string()) ==
        0);
}
