#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wfrac {

struct VerifyCase {
    std::string id;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool relative = true;  // which error the tolerance applies to
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::string suite;
    std::vector<VerifyCase> cases;
    bool pass = true;
};

// conjugation, semigroup, eigenfunction, presets, laplace, convolution, fde
const std::vector<std::string>& suite_names();

// "all" runs every suite; tol replaces every case tolerance when given
std::vector<VerificationReport> run_suite(const std::string& name, std::optional<double> tol = std::nullopt);

}  // namespace wfrac
