#include "patchlum/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "patchlum/format.hpp"

namespace patchlum {

std::span<const double> MeasurementTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return data[i];
    }
    throw ValidationError("MeasurementTable: no column named '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col,
                  const std::filesystem::path& path) {
    double value{};
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    bool trailing_junk = false;
    for (const char* c = ptr; c < end; ++c) {
        if (*c != ' ' && *c != '\t' && *c != '\r') trailing_junk = true;
    }
    if (ec != std::errc{} || trailing_junk || !std::isfinite(value)) {
        throw ValidationError(path.string() + ": unparsable cell at row " +
                              std::to_string(row) + ", column " + std::to_string(col + 1));
    }
    return value;
}

}  // namespace

MeasurementTable ingest_csv(const std::filesystem::path& path,
                            std::string_view expected_header) {
    std::ifstream file(path);
    if (!file) {
        throw ValidationError("ingest_csv: cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(file, line)) {
        throw ValidationError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header) {
        throw ValidationError(path.string() + ": header mismatch (expected '" +
                              std::string(expected_header) + "', found '" + line + "')");
    }

    MeasurementTable table;
    table.source = path.string();
    table.columns = split(line);
    table.data.resize(table.columns.size());

    std::size_t row = 1;
    while (std::getline(file, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') continue;  // metadata comment
        const std::vector<std::string> cells = split(line);
        if (cells.size() != table.columns.size()) {
            throw ValidationError(path.string() + ": row " + std::to_string(row) +
                                  " has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(table.columns.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            table.data[c].push_back(parse_cell(cells[c], row, c, path));
        }
    }
    return table;
}

void write_csv(const std::filesystem::path& path, std::string_view header,
               std::span<const std::vector<double>> columns,
               const std::vector<std::string>& metadata) {
    if (columns.empty()) throw ValidationError("write_csv: no columns");
    const std::size_t rows = columns.front().size();
    for (const auto& column : columns) {
        if (column.size() != rows) {
            throw ValidationError("write_csv: column length mismatch");
        }
    }
    std::ofstream file(path, std::ios::binary);  // '\n' endings everywhere
    if (!file) {
        throw ValidationError("write_csv: cannot open '" + path.string() + "' for writing");
    }
    file << header << '\n';
    for (const auto& entry : metadata) file << "# " << entry << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) file << ',';
            file << format_double(columns[c][r]);
        }
        file << '\n';
    }
    if (!file) {
        throw ValidationError("write_csv: write failed for '" + path.string() + "'");
    }
}

}  // namespace patchlum
