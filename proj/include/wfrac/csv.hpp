#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wfrac {

// 17 significant digits, round-trip exact for doubles
std::string format_real(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& rows);
// throws std::runtime_error naming the path on I/O failure
void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& rows);

}  // namespace wfrac
