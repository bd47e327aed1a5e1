#pragma once

#include <string>
#include <vector>

namespace dml {

// Round-trip decimal formatting (17 significant digits) so that emitted
// numbers compare exactly against recomputed ones.
std::string format_double(double v);

// Minimal CSV table with a fixed header; all cells are doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string to_string() const;
    void write(const std::string& path) const;
    static CsvTable read(const std::string& path);

    std::vector<double> column(const std::string& name) const;
};

}  // namespace dml
