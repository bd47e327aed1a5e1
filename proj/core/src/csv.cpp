#include "dml/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dml {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << header[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_string();
}

CsvTable CsvTable::read(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(f, line))
        throw std::runtime_error("empty CSV file " + path);
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("malformed CSV cell \"" + cell +
                                         "\" in " + path);
            }
        }
        if (row.size() != t.header.size())
            throw std::runtime_error("malformed CSV row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) {
            std::vector<double> out(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][c];
            return out;
        }
    }
    throw std::invalid_argument("no CSV column named \"" + name + "\"");
}

}  // namespace dml
