#pragma once

// CSV ingestion and emission. The first row of every file is the exact schema
// header; lines starting with '#' after the header are metadata comments and
// are skipped on read. Emitted files carry the config digest and the list of
// assumed parameters as such comments.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "patchlum/errors.hpp"

namespace patchlum {

struct MeasurementTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // column-major
    std::string source;

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    std::span<const double> column(std::string_view name) const;
};

// Known schema headers (exact strings).
namespace schema {
inline constexpr const char* reflectivity = "energy_meV,reflectivity";
inline constexpr const char* spectrum = "energy_meV,intensity";
inline constexpr const char* stark = "bias_V,peak_meV";
inline constexpr const char* iv = "bias_V,current_mA";
inline constexpr const char* li = "current_mA,power_uW";
inline constexpr const char* flux = "J_kA_cm2,flux_norm";
inline constexpr const char* map = "x_mm,y_mm,intensity";
}  // namespace schema

// Strict parse: header must equal expected_header byte for byte; every cell
// must be a finite number. Errors carry row/column positions.
MeasurementTable ingest_csv(const std::filesystem::path& path,
                            std::string_view expected_header);

// Writes header, one '#' metadata line per entry, then the rows with
// shortest round-trip float formatting.
void write_csv(const std::filesystem::path& path, std::string_view header,
               std::span<const std::vector<double>> columns,
               const std::vector<std::string>& metadata);

}  // namespace patchlum
