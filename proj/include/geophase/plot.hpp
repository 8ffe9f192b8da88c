// plot.hpp — minimal CSV reader and self-contained SVG line plots

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace geophase {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // -1 when absent
    int column(const std::string& name) const;
};

// Comma-separated, no quoting (the sweep writer never emits commas in cells).
CsvTable read_csv(std::istream& is);

// Unit label for a result column ("rad", "energy", ...), empty when dimensionless.
std::string column_unit(const std::string& column);

// One polyline per y column per distinct `level` value (if that column
// exists).  Throws Error(InvalidInput) naming the available columns when a
// column is missing, or when the table has no data rows.
std::string render_svg(const CsvTable& table, const std::string& x_column,
                       const std::vector<std::string>& y_columns);

void emit_plot(const std::filesystem::path& csv_path, const std::string& x_column,
               const std::vector<std::string>& y_columns, const std::filesystem::path& svg_path);

} // namespace geophase
