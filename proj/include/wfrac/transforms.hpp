#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wfrac/wrtf.hpp"

namespace wfrac {

struct LaplaceConfig {
    double rel_tol = 1e-8;
    int max_panels = 4096;
    double truncation_tol = 1e-12;
};

struct TransformSample {
    double s = 0.0;
    double value = 0.0;
    double truncation_point = 0.0;  // in u = phi(x) - phi(a)
    int panels_used = 0;
};

class LaplaceConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// int_0^inf e^{-s u} h(u) du; 16-point Gauss panels doubled per segment, [0, 8] then [U, 2U] until the tail is negligible
TransformSample laplace_of(const std::function<double(double)>& h, double s, const LaplaceConfig& cfg = {});

// int_0^inf e^{-s x} w f dx
TransformSample weighted_laplace(const Expr& f, const Expr& w, double s, const LaplaceConfig& cfg = {});

// int_a^inf e^{-s (phi(x) - phi(a))} w f phi' dx, evaluated in u = phi(x) - phi(a)
TransformSample wphi_laplace(const Expr& f, const Expr& w, const Expr& phi, double a, double s,
                             const LaplaceConfig& cfg = {});

// sum over subintervals of int e^{-s u} (linear interpolant of v) du, exact in the exponential;
// a non-finite v[0] is replaced by the (u/u1)^gamma profile on the first subinterval
double laplace_samples(std::span<const double> u, std::span<const double> v, double s, double gamma = 0.0);

// (1/w(x)) int_0^x (w f)(x - t) (w g)(t) dt, adaptive Simpson per node
SampledFunction weighted_convolution(const Expr& f, const Expr& g, const Expr& w, const Grid& grid);

// conjugated form: classical convolution of (w f)(phi^{-1}(u + phi(a))) and the same for g, pushed back and divided by w
SampledFunction wphi_convolution(const Expr& f, const Expr& g, const Expr& w, const Expr& phi, double a,
                                 const Grid& grid);

// transform of f *_{phi;w} g against the product of the transforms
std::pair<double, double> convolution_theorem(const Expr& f, const Expr& g, const Expr& w, const Expr& phi, double a,
                                              double s, const LaplaceConfig& cfg = {});

struct IdentityGrid {
    int nodes = 2048;
    double grading = 2.0;  // in u; 1 for smooth outputs
};

struct LaplaceIdentity {
    double s = 0.0;
    double lhs = 0.0;  // transform of the sampled operator output
    double rhs = 0.0;  // s^{-alpha} F, or s^alpha F minus the initial terms
    double tail = 0.0;
    bool tail_warning = false;
};

// one operator evaluation on a grid reaching the truncation point of the smallest s, reused for every s
std::vector<LaplaceIdentity> laplace_operator_identities(const Expr& f, const WPhiOperatorSpec& spec,
                                                         std::span<const double> s_values,
                                                         const LaplaceConfig& cfg = {},
                                                         const IdentityGrid& ig = {});

std::pair<double, double> laplace_operator_identity(const Expr& f, const WPhiOperatorSpec& spec, double s,
                                                    const LaplaceConfig& cfg = {});

}  // namespace wfrac
