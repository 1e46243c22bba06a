#pragma once

// Artifact formats.
//
// Field file: one header line
//   HARTREE-FIELD v1; d=<d>; n=<n>; repr=<spectral|potential>[; enc=f64le]
// then the coefficients in lexicographic multi-index order, either as
// shortest round-trip decimal text (one per line) or, with enc=f64le, as raw
// little-endian IEEE doubles.

#include "hartree/greens.hpp"
#include "hartree/mpsolver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hartree {

enum class Encoding { text, binary };

struct FieldFile {
  SpectralField field;
  std::string repr;  // "spectral" or "potential"
  Encoding encoding = Encoding::text;
};

std::string format_field(const SpectralField& field, const std::string& repr = "spectral",
                         Encoding encoding = Encoding::text);
FieldFile parse_field(const std::string& bytes);

void write_field(const std::filesystem::path& path, const SpectralField& field,
                 Encoding encoding = Encoding::text);
void write_potential(const std::filesystem::path& path, const PotentialField& potential,
                     Encoding encoding = Encoding::text);
FieldFile read_field(const std::filesystem::path& path);

nlohmann::ordered_json report_to_json(const SolveReport& report);
/// Columns: iteration, J, gradnorm, cerami_product, sigma_integral, quartic_integral.
std::string diagnostics_csv(const CeramiDiagnostics& diagnostics);

std::string read_text(const std::filesystem::path& path);
/// Writes `bytes` exactly; throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& bytes);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace hartree
