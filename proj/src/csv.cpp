#include "wfrac/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wfrac {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& rows) {
    for (const auto& row : rows)
        if (row.size() != headers.size()) throw std::invalid_argument("write_csv: ragged row");
    for (std::size_t i = 0; i < headers.size(); ++i) os << (i ? "," : "") << headers[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
        os << '\n';
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(f, headers, rows);
    f.flush();
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wfrac
