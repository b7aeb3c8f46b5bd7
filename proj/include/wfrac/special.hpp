#pragma once

#include <stdexcept>

namespace wfrac {

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lanczos, g = 607/128, reflection below 0.5
double gamma(double x);
// 1/Gamma, zero at the poles
double rgamma(double x);
double lgamma_abs(double x);

struct MlEvalConfig {
    double series_tol = 1e-15;
    int max_terms = 500;
    double large_z_threshold = 5.0;
};

// E_{alpha,beta}(z) for real z
double mittag_leffler(double alpha, double beta, double z, const MlEvalConfig& cfg = {});

// m-th derivative in z of E_{alpha,beta}
double mittag_leffler_deriv(double alpha, double beta, int m, double z,
                            const MlEvalConfig& cfg = {});

namespace detail {
// Laplace-inversion on an optimal parabolic contour; exposed for tests
double ml_contour(double alpha, double beta, double z);
// plain series, returns false when it cannot be trusted
bool ml_series(double alpha, double beta, int m, double z, const MlEvalConfig& cfg,
               double& out);
}  // namespace detail

}  // namespace wfrac
