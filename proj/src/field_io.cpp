#include "hartree/field_io.hpp"

#include "hartree/error.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hartree {
namespace {

constexpr std::string_view kMagic = "HARTREE-FIELD v1";

std::string header(const DomainSpec& domain, const std::string& repr, Encoding encoding) {
  std::ostringstream out;
  out << kMagic << "; d=" << domain.dimension() << "; n=" << domain.points() << "; repr=" << repr;
  if (encoding == Encoding::binary) out << "; enc=f64le";
  return out.str();
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out = (out << 8) | ((bits >> (8 * i)) & 0xffu);
    return out;
  }
  return bits;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ValidationError("malformed number in field file: " + std::string(text));
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw ValidationError("cannot format number");
  return std::string(buf, ptr);
}

std::string format_field(const SpectralField& field, const std::string& repr, Encoding encoding) {
  if (repr != "spectral" && repr != "potential") throw ValidationError("unknown field representation: " + repr);
  std::string out = header(field.domain(), repr, encoding);
  out += '\n';
  if (encoding == Encoding::text) {
    for (double c : field.coefficients()) {
      out += format_double(c);
      out += '\n';
    }
    return out;
  }
  for (double c : field.coefficients()) {
    const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(c));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.append(bytes, 8);
  }
  return out;
}

FieldFile parse_field(const std::string& bytes) {
  const auto eol = bytes.find('\n');
  if (eol == std::string::npos) throw ValidationError("field file has no header line");
  const std::string_view head(bytes.data(), eol);
  if (head.substr(0, kMagic.size()) != kMagic) throw ValidationError("not a field file");

  int dimension = 0;
  std::size_t points = 0;
  std::string repr;
  Encoding encoding = Encoding::text;
  std::size_t pos = kMagic.size();
  while (pos < head.size()) {
    auto next = head.find(';', pos);
    if (next == std::string_view::npos) next = head.size();
    const auto item = trim(head.substr(pos, next - pos));
    pos = next + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ValidationError("malformed field header entry: " + std::string(item));
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "d") {
      dimension = static_cast<int>(parse_double(value));
    } else if (key == "n") {
      points = static_cast<std::size_t>(parse_double(value));
    } else if (key == "repr") {
      repr = value;
    } else if (key == "enc") {
      if (value != "f64le") throw ValidationError("unsupported field encoding: " + std::string(value));
      encoding = Encoding::binary;
    } else {
      throw ValidationError("unknown field header key: " + std::string(key));
    }
  }
  if (repr != "spectral" && repr != "potential") throw ValidationError("field header lacks a valid repr");
  const DomainSpec domain(dimension, points);
  std::vector<double> coeffs;
  coeffs.reserve(domain.size());

  const std::string_view body(bytes.data() + eol + 1, bytes.size() - eol - 1);
  if (encoding == Encoding::binary) {
    if (body.size() != 8 * domain.size()) throw ValidationError("binary field body has the wrong length");
    for (std::size_t k = 0; k < domain.size(); ++k) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, body.data() + 8 * k, 8);
      coeffs.push_back(std::bit_cast<double>(to_little_endian(bits)));
    }
  } else {
    std::size_t at = 0;
    while (at < body.size()) {
      auto end = body.find('\n', at);
      if (end == std::string_view::npos) end = body.size();
      const auto line = trim(body.substr(at, end - at));
      at = end + 1;
      if (!line.empty()) coeffs.push_back(parse_double(line));
    }
    if (coeffs.size() != domain.size()) throw ValidationError("field file has the wrong number of coefficients");
  }
  return {SpectralField(domain, std::move(coeffs)), repr, encoding};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

void write_field(const std::filesystem::path& path, const SpectralField& field, Encoding encoding) {
  write_text(path, format_field(field, "spectral", encoding));
}

void write_potential(const std::filesystem::path& path, const PotentialField& potential, Encoding encoding) {
  write_text(path, format_field(potential.field, "potential", encoding));
}

FieldFile read_field(const std::filesystem::path& path) { return parse_field(read_text(path)); }

nlohmann::ordered_json report_to_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["sign"] = to_string(r.sign);
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["critical_value"] = r.critical_value;
  j["gradient_norm"] = r.gradient_norm;
  j["cerami_product"] = r.cerami_product;
  j["residual_stationary"] = r.residual;
  j["metric_constant"] = r.metric_constant;
  j["sweeps"] = r.sweeps;
  j["refinement_iterations"] = r.refinement_iterations;
  j["grid_min"] = r.grid_min;
  j["grid_max"] = r.grid_max;
  j["q_norm"] = r.q_norm;
  j["wrong_sign_part_norm"] = r.negative_part_norm;
  j["lp_norms"] = {{"1", r.l1}, {"2", r.l2}, {"4", r.l4}, {"inf", r.linf}};
  j["eta_estimate"] = r.eta_estimate;
  j["eta_lower_bound"] = r.eta_lower_bound;
  j["within_theorem"] = r.within_theorem;
  j["path_energies"] = r.path_energies;
  j["drift"] = nullptr;
  if (r.drift_energy)
    j["drift"] = {{"energy", *r.drift_energy}, {"l2", r.drift_l2.value_or(0.0)}, {"linf", r.drift_linf.value_or(0.0)}};
  return j;
}

std::string diagnostics_csv(const CeramiDiagnostics& d) {
  std::string out = "iteration,J,gradnorm,cerami_product,sigma_integral,quartic_integral\n";
  for (const auto& r : d.records) {
    out += std::to_string(r.iteration);
    for (double v : {r.energy, r.gradient_norm, r.product, r.sigma_integral, r.quartic}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hartree
