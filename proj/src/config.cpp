#include "hartree/config.hpp"

#include "hartree/error.hpp"
#include "hartree/field_io.hpp"

#include <cstdio>
#include <set>

namespace hartree {
namespace {

using nlohmann::json;

template <class T>
T get(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& doc, const char* key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ValidationError(std::string("config key '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

void RunConfig::validate() const {
  if (dimension != 1 && dimension != 2) throw ValidationError("dimension must be 1 or 2");
  if (points < 1) throw ValidationError("points must be positive");
  params.validate();
  solver.validate();
  (void)builtin(nonlinearity.kind, dimension, nonlinearity.r);
}

EnergyContext RunConfig::context() const {
  validate();
  EnergyContext ctx{DomainSpec(dimension, points), params, builtin(nonlinearity.kind, dimension, nonlinearity.r)};
  ctx.green.dealias = dealias;
  return ctx;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {
      "dimension", "points", "mass", "omega", "lambda", "nonlinearity", "path_nodes", "tolerance",
      "max_iterations", "armijo_c", "t_max", "seed", "rho", "output", "dealias"};
  for (const auto& item : doc.items())
    if (!known.contains(item.key())) throw ValidationError("unknown config key '" + item.key() + "'");

  RunConfig c;
  c.dimension = get(doc, "dimension", c.dimension);
  c.points = get_count(doc, "points", c.points);
  c.params.mass = get(doc, "mass", c.params.mass);
  c.params.omega = get(doc, "omega", c.params.omega);
  c.params.lambda = get(doc, "lambda", c.params.lambda);
  if (doc.contains("nonlinearity")) {
    const auto& nl = doc.at("nonlinearity");
    if (!nl.is_object()) throw ValidationError("nonlinearity must be an object such as {\"kind\": \"loglike\"}");
    for (const auto& item : nl.items())
      if (item.key() != "kind" && item.key() != "r")
        throw ValidationError("unknown nonlinearity key '" + item.key() + "'");
    c.nonlinearity.kind = get<std::string>(nl, "kind", c.nonlinearity.kind);
    c.nonlinearity.r = get(nl, "r", c.nonlinearity.r);
  }
  c.solver.path_nodes = get_count(doc, "path_nodes", c.solver.path_nodes);
  c.solver.tolerance = get(doc, "tolerance", c.solver.tolerance);
  c.solver.max_iterations = get_count(doc, "max_iterations", c.solver.max_iterations);
  c.solver.armijo_c = get(doc, "armijo_c", c.solver.armijo_c);
  c.solver.t_max = get(doc, "t_max", c.solver.t_max);
  c.solver.seed = get_count(doc, "seed", c.solver.seed);
  c.solver.rho = get(doc, "rho", c.solver.rho);
  c.output = get<std::string>(doc, "output", c.output);
  c.dealias = get(doc, "dealias", c.dealias);
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  const auto text = read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["dimension"] = c.dimension;
  j["points"] = c.points;
  j["mass"] = c.params.mass;
  j["omega"] = c.params.omega;
  j["lambda"] = c.params.lambda;
  j["nonlinearity"] = {{"kind", c.nonlinearity.kind}, {"r", c.nonlinearity.r}};
  j["path_nodes"] = c.solver.path_nodes;
  j["tolerance"] = c.solver.tolerance;
  j["max_iterations"] = c.solver.max_iterations;
  j["armijo_c"] = c.solver.armijo_c;
  j["t_max"] = c.solver.t_max;
  j["seed"] = c.solver.seed;
  j["rho"] = c.solver.rho;
  j["dealias"] = c.dealias;
  return j;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : to_json(config).dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hartree
