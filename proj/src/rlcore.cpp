#include "wfrac/rlcore.hpp"

#include <cmath>
#include <limits>

#include "wfrac/special.hpp"

namespace wfrac {

int derivative_order(double alpha) { return int(std::floor(alpha)) + 1; }

bool is_integer_order(double alpha) { return alpha == std::floor(alpha); }

OperatorSpec OperatorSpec::make(OperatorKind kind, double alpha, double a) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("operator: alpha must be positive");
    if (!std::isfinite(a)) throw std::invalid_argument("operator: lower limit must be finite");
    OperatorSpec s;
    s.kind = kind;
    s.alpha = alpha;
    s.a = a;
    s.n = derivative_order(alpha);
    return s;
}

std::string to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::RLIntegral: return "rl-int";
        case OperatorKind::RLDerivative: return "rl-der";
        case OperatorKind::CaputoDerivative: return "caputo-der";
    }
    return "?";
}

LimitValue right_limit(const Expr& e, double a, int k) {
    try {
        const double v = e(a);
        if (std::isfinite(v)) return {v, true};
    } catch (const DomainError&) {
    }
    const double eps = 1e-7 * std::max(1.0, std::fabs(a));
    auto richardson = [&](double h) { return 2.0 * e(a + h) - e(a + 2.0 * h); };
    double v1 = 0.0, v2 = 0.0;
    try {
        v1 = richardson(eps);
        v2 = richardson(eps * 1e-2);
    } catch (const DomainError&) {
        throw DivergentLimitError("limit of derivative " + std::to_string(k) + " at a+ cannot be evaluated", k);
    }
    if (!std::isfinite(v1) || std::fabs(v1) > 1e6 || std::fabs(v1 - v2) > 1e-3 * (1.0 + std::fabs(v1)))
        throw DivergentLimitError("limit of derivative " + std::to_string(k) + " at a+ is presumed divergent", k);
    return {v1, false};
}

SampledFunction sample(const Expr& f, const Grid& grid) {
    SampledFunction out;
    out.grid = grid;
    out.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] = f(grid.nodes[j]);
    return out;
}

namespace detail {

void check_grid_start(const Grid& grid, double a) {
    validate_grid(grid);
    const double tol = 1e-12 * std::max(1.0, std::fabs(a));
    if (std::fabs(grid.a() - a) > tol) throw std::invalid_argument("grid must start at the lower limit a");
}

std::vector<double> integrate_nodes(double alpha, double a, std::span<const double> nodes,
                                    const std::function<double(double)>& h, const EvalOptions& opt,
                                    bool uniform) {
    if (opt.scheme == Scheme::Gauss) {
        return kernels::frac_integral(alpha, a, nodes, [&](double, double t) { return h(t); }, opt.quad);
    }
    std::vector<double> hv(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        try {
            hv[j] = h(nodes[j]);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.node()) + " (trapezoid scheme samples the endpoint; use the gauss scheme)",
                              e.x());
        }
    }
    return kernels::frac_integral_samples(alpha, nodes, hv, uniform);
}

}  // namespace detail

namespace {

bool uniform(const Grid& g) { return g.policy == GridPolicy::Uniform; }

SampledFunction make_output(const Grid& grid, std::vector<double> values) {
    SampledFunction out;
    out.grid = grid;
    out.values = std::move(values);
    return out;
}

// an integrand unbounded at a leaves the value at x = a as a limit we do not compute
void flag_start(SampledFunction& s, const Expr& h, double a) {
    if (s.grid.a() != a || s.values.empty()) return;
    bool finite = true;
    try {
        finite = std::isfinite(h(a));
    } catch (const DomainError&) {
        finite = false;
    }
    if (finite) return;
    s.values[0] = std::numeric_limits<double>::quiet_NaN();
    s.singular_at_a = true;
}

}  // namespace

SampledFunction rl_integral(const Expr& f, double a, double alpha, const Grid& grid, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("rl_integral: alpha must be positive");
    detail::check_grid_start(grid, a);
    SampledFunction out = make_output(
        grid, detail::integrate_nodes(alpha, a, grid.nodes, [&](double t) { return f(t); }, opt, uniform(grid)));
    flag_start(out, f, a);
    return out;
}

SampledFunction caputo_derivative(const Expr& f, double a, double alpha, const Grid& grid, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("caputo_derivative: alpha must be positive");
    detail::check_grid_start(grid, a);
    if (is_integer_order(alpha)) return sample(diff_expr(f, int(alpha)), grid);
    const int n = derivative_order(alpha);
    const Expr h = diff_expr(f, n);
    SampledFunction out = make_output(grid, detail::integrate_nodes(double(n) - alpha, a, grid.nodes,
                                                                    [&](double t) { return h(t); }, opt, uniform(grid)));
    flag_start(out, h, a);
    return out;
}

SampledFunction rl_derivative(const Expr& f, double a, double alpha, const Grid& grid, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("rl_derivative: alpha must be positive");
    if (is_integer_order(alpha)) return caputo_derivative(f, a, alpha, grid, opt);
    SampledFunction out = caputo_derivative(f, a, alpha, grid, opt);
    const int n = derivative_order(alpha);
    Expr dk = f;
    for (int k = 0; k < n; ++k) {
        const double lim = right_limit(dk, a, k).value;
        if (lim != 0.0) {
            const double c = lim * rgamma(k - alpha + 1.0);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double d = grid.nodes[j] - a;
                if (d > 0.0) {
                    out.values[j] += c * std::pow(d, k - alpha);
                } else {
                    out.values[j] = c > 0.0 ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
                    out.singular_at_a = true;
                    out.singular_exponent = std::min(out.singular_exponent, k - alpha);
                }
            }
        }
        if (k + 1 < n) dk = diff_expr(dk);
    }
    return out;
}

SampledFunction differintegral(const Expr& f, double a, double alpha, const Grid& grid, DerivativeType type,
                               const EvalOptions& opt) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("differintegral: alpha must be finite");
    if (alpha < 0.0) return rl_integral(f, a, -alpha, grid, opt);
    if (alpha == 0.0) {
        detail::check_grid_start(grid, a);
        return sample(f, grid);
    }
    return type == DerivativeType::RL ? rl_derivative(f, a, alpha, grid, opt)
                                      : caputo_derivative(f, a, alpha, grid, opt);
}

SampledFunction apply_operator(const Expr& f, const OperatorSpec& spec, const Grid& grid, const EvalOptions& opt) {
    switch (spec.kind) {
        case OperatorKind::RLIntegral: return rl_integral(f, spec.a, spec.alpha, grid, opt);
        case OperatorKind::RLDerivative: return rl_derivative(f, spec.a, spec.alpha, grid, opt);
        case OperatorKind::CaputoDerivative: return caputo_derivative(f, spec.a, spec.alpha, grid, opt);
    }
    throw std::invalid_argument("apply_operator: unknown kind");
}

SampledFunction rl_integral_samples(const SampledFunction& h, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("rl_integral_samples: alpha must be positive");
    if (h.singular_at_a) throw std::invalid_argument("rl_integral_samples: input is singular at a");
    if (h.values.size() != h.grid.size()) throw std::invalid_argument("rl_integral_samples: size mismatch");
    return make_output(h.grid, kernels::frac_integral_samples(alpha, h.grid.nodes, h.values, uniform(h.grid)));
}

}  // namespace wfrac
