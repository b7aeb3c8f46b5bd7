#include "wfrac/kernels.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wfrac/special.hpp"

namespace wfrac {

int thread_count() {
    static const int n = [] {
        int def = 1;
#ifdef _OPENMP
        def = omp_get_max_threads();
#endif
        if (const char* env = std::getenv("WFRAC_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return def;
    }();
    return n;
}

namespace kernels {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    std::exception_ptr err;
    std::once_flag once;
    const long count = long(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_count())
    for (long j = 0; j < count; ++j) {
        try {
            body(std::size_t(j));
        } catch (...) {
            std::call_once(once, [&] { err = std::current_exception(); });
        }
    }
    if (err) std::rethrow_exception(err);
}

std::vector<double> frac_integral(double alpha, double a, std::span<const double> nodes,
                                  const NodeIntegrand& g, const SingularQuadOptions& opt) {
    const SingularIntegrator quad(alpha, opt);
    const double rg = rgamma(alpha);
    std::vector<double> out(nodes.size(), 0.0);
    parallel_for(nodes.size(), [&](std::size_t j) {
        const double x = nodes[j];
        if (x < a) throw std::invalid_argument("fractional integral: node below the lower limit");
        out[j] = rg * quad.integrate(a, x, [&](double t) { return g(x, t); });
    });
    return out;
}

std::vector<double> frac_integral_samples(double alpha, std::span<const double> t,
                                          std::span<const double> h, bool uniform) {
    if (t.size() != h.size()) throw std::invalid_argument("fractional integral: sample size mismatch");
    const std::size_t n = t.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const double rg = rgamma(alpha);
    if (uniform) {
        // weights depend on j - k only
        const double d = (t[n - 1] - t[0]) / double(n - 1);
        std::vector<double> L(n, 0.0), R(n, 0.0);
        for (std::size_t m = 1; m < n; ++m) trapezoid_panel_weights(alpha, double(m) * d, d, L[m], R[m]);
        parallel_for(n, [&](std::size_t j) {
            double s = 0.0;
            for (std::size_t k = 0; k < j; ++k) s += L[j - k] * h[k] + R[j - k] * h[k + 1];
            out[j] = rg * s;
        });
        return out;
    }
    parallel_for(n, [&](std::size_t j) {
        double s = 0.0;
        const double x = t[j];
        for (std::size_t k = 0; k < j; ++k) {
            double l = 0.0, r = 0.0;
            trapezoid_panel_weights(alpha, x - t[k], t[k + 1] - t[k], l, r);
            s += l * h[k] + r * h[k + 1];
        }
        out[j] = rg * s;
    });
    return out;
}

}  // namespace kernels

namespace reference {

std::vector<double> frac_integral(double alpha, double a, std::span<const double> nodes,
                                  const NodeIntegrand& g, const SingularQuadOptions& opt) {
    const SingularIntegrator quad(alpha, opt);
    std::vector<double> out(nodes.size(), 0.0);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double x = nodes[j];
        if (x < a) throw std::invalid_argument("fractional integral: node below the lower limit");
        out[j] = quad.integrate(a, x, [&](double t) { return g(x, t); }) / gamma(alpha);
    }
    return out;
}

std::vector<double> frac_integral_samples(double alpha, std::span<const double> t,
                                          std::span<const double> h) {
    if (t.size() != h.size()) throw std::invalid_argument("fractional integral: sample size mismatch");
    std::vector<double> out(t.size(), 0.0), w;
    for (std::size_t j = 1; j < t.size(); ++j) {
        product_trapezoid_weights(alpha, t, j, w);
        double s = 0.0;
        for (std::size_t k = 0; k <= j; ++k) s += w[k] * h[k];
        out[j] = s / gamma(alpha);
    }
    return out;
}

}  // namespace reference

}  // namespace wfrac
