#pragma once

#include <exception>
#include <functional>
#include <span>
#include <vector>

#include "wfrac/quadrature.hpp"

namespace wfrac {

// thread cap: WFRAC_THREADS if set, else the OpenMP default
int thread_count();

// integrand g(x, t) for output node x; the kernel supplies (x - t)^{alpha-1}
using NodeIntegrand = std::function<double(double x, double t)>;

namespace kernels {

// out[j] = 1/Gamma(alpha) int_a^{x_j} (x_j - t)^{alpha-1} g(x_j, t) dt, parallel over j
std::vector<double> frac_integral(double alpha, double a, std::span<const double> nodes,
                                  const NodeIntegrand& g, const SingularQuadOptions& opt = {});

// product trapezoid on samples h(t_k); uniform grids reuse one Toeplitz weight table
std::vector<double> frac_integral_samples(double alpha, std::span<const double> t,
                                          std::span<const double> h, bool uniform);

// run body(j) for j in [0, n) across threads; first exception is rethrown
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kernels

// serial versions kept as the testing baseline
namespace reference {

std::vector<double> frac_integral(double alpha, double a, std::span<const double> nodes,
                                  const NodeIntegrand& g, const SingularQuadOptions& opt = {});

std::vector<double> frac_integral_samples(double alpha, std::span<const double> t,
                                          std::span<const double> h);

}  // namespace reference

}  // namespace wfrac
