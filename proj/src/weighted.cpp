#include "wfrac/weighted.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wfrac/funcspec.hpp"
#include "wfrac/special.hpp"

namespace wfrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite_at(const Expr& e, double x) {
    try {
        return std::isfinite(e(x));
    } catch (const DomainError&) {
        return false;
    }
}

std::vector<double> weight_samples(const Expr& w, const Grid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.nodes[j];
        // an open end at a is allowed; the node is flagged by the operator anyway
        if (j == 0 && !finite_at(w, x)) {
            out[j] = kNaN;
            continue;
        }
        out[j] = w(x);
        if (out[j] == 0.0) throw std::invalid_argument("weight vanishes at grid node x = " + std::to_string(x));
    }
    return out;
}

void divide_by(SampledFunction& s, const std::vector<double>& wv) {
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        if (std::isnan(wv[j])) {
            if (std::isfinite(s.values[j])) s.values[j] = kNaN;
            s.singular_at_a = true;
            continue;
        }
        s.values[j] /= wv[j];
    }
}

// 1/Gamma(alpha) int_a^x (x-t)^{alpha-1} w(t) h(t) dt, unscaled by w(x)
SampledFunction direct_integral(const Expr& w, const Expr& h, double a, double alpha, const Grid& grid,
                                const EvalOptions& opt) {
    SampledFunction out;
    out.grid = grid;
    const auto wh = [&](double t) { return w(t) * h(t); };
    if (opt.scheme == Scheme::Gauss) {
        out.values = kernels::frac_integral(alpha, a, grid.nodes, [&](double, double t) { return wh(t); }, opt.quad);
    } else {
        out.values = detail::integrate_nodes(alpha, a, grid.nodes, wh, opt, grid.policy == GridPolicy::Uniform);
    }
    bool start_ok = true;
    try {
        start_ok = std::isfinite(wh(a));
    } catch (const DomainError&) {
        start_ok = false;
    }
    if (!start_ok) {
        out.values[0] = kNaN;
        out.singular_at_a = true;
    }
    return out;
}

void add_rl_corrections(SampledFunction& out, const Expr& f, const Expr& w, double a, double alpha,
                        const std::vector<double>& wv) {
    const int n = derivative_order(alpha);
    const double wa = weight_at_a(w, a).value;
    Expr dk = f;
    for (int k = 0; k < n; ++k) {
        const double lim = right_limit(dk, a, k).value;
        if (lim != 0.0) {
            const double c = wa * lim * rgamma(k - alpha + 1.0);
            for (std::size_t j = 0; j < out.grid.size(); ++j) {
                const double d = out.grid.nodes[j] - a;
                if (d > 0.0) {
                    out.values[j] += c * std::pow(d, k - alpha) / wv[j];
                } else {
                    out.values[j] = c > 0.0 ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
                    out.singular_at_a = true;
                    out.singular_exponent = std::min(out.singular_exponent, k - alpha);
                }
            }
        }
        if (k + 1 < n) dk = weighted_first_derivative(dk, w);
    }
}

SampledFunction direct_path(const Expr& f, const Expr& w, OperatorKind kind, double alpha, double a,
                            const Grid& grid, const EvalOptions& opt, const std::vector<double>& wv) {
    if (kind == OperatorKind::RLIntegral) {
        SampledFunction out = direct_integral(w, f, a, alpha, grid, opt);
        divide_by(out, wv);
        return out;
    }
    const int n = derivative_order(alpha);
    if (is_integer_order(alpha)) {
        // no memory term: the plain weighted derivative
        return sample(weighted_first_derivative(f, w, int(alpha)), grid);
    }
    const Expr h = weighted_first_derivative(f, w, n);
    SampledFunction out = direct_integral(w, h, a, double(n) - alpha, grid, opt);
    divide_by(out, wv);
    if (kind == OperatorKind::RLDerivative) add_rl_corrections(out, f, w, a, alpha, wv);
    return out;
}

SampledFunction conjugated_path(const Expr& f, const Expr& w, OperatorKind kind, double alpha, double a,
                                const Grid& grid, const EvalOptions& opt, const std::vector<double>& wv) {
    // M_w f, left unsimplified so the product is evaluated exactly as w(t)*f(t)
    const Expr g = Expr::make_binary(NodeKind::Mul, w, f);
    SampledFunction out = apply_operator(g, OperatorSpec::make(kind, alpha, a), grid, opt);
    divide_by(out, wv);
    return out;
}

}  // namespace

PathComparison compare_paths(SampledFunction direct, SampledFunction conjugated) {
    if (direct.values.size() != conjugated.values.size())
        throw std::invalid_argument("compare_paths: outputs live on different grids");
    PathComparison c;
    double sup = 0.0;
    for (std::size_t j = 0; j < direct.values.size(); ++j) {
        if (std::isfinite(direct.values[j])) sup = std::max(sup, std::fabs(direct.values[j]));
        if (std::isfinite(conjugated.values[j])) sup = std::max(sup, std::fabs(conjugated.values[j]));
    }
    for (std::size_t j = 0; j < direct.values.size(); ++j) {
        const double d = direct.values[j], v = conjugated.values[j];
        const bool fd = std::isfinite(d), fv = std::isfinite(v);
        if (!fd && !fv) continue;
        if (fd != fv) {
            c.max_abs_diff = c.max_rel_diff = std::numeric_limits<double>::infinity();
            continue;
        }
        const double diff = std::fabs(d - v);
        // tiny values near a zero crossing are judged against the overall scale
        const double den = std::max({std::fabs(d), std::fabs(v), 1e-6 * sup});
        c.max_abs_diff = std::max(c.max_abs_diff, diff);
        if (den > 0.0) c.max_rel_diff = std::max(c.max_rel_diff, diff / den);
    }
    c.direct = std::move(direct);
    c.conjugated = std::move(conjugated);
    return c;
}

Expr weighted_first_derivative(const Expr& f, const Expr& w) {
    const Expr dw = diff_expr(w);
    if (dw.is_constant(0.0)) return diff_expr(f);
    return diff_expr(f) + (dw / w) * f;
}

Expr weighted_first_derivative(const Expr& f, const Expr& w, int n) {
    Expr out = f;
    for (int i = 0; i < n; ++i) out = weighted_first_derivative(out, w);
    return out;
}

LimitValue weight_at_a(const Expr& w, double a) {
    const LimitValue v = right_limit(w, a, 0);
    if (v.value == 0.0) throw std::invalid_argument("weight vanishes at the lower limit");
    return v;
}

void check_weight(const Expr& w, const Grid& grid) {
    const bool open_a = !finite_at(w, grid.a());
    const auto rep = validate_spec(w, Expr::variable(), DomainInterval(grid.a(), grid.b(), open_a, false));
    if (!rep.weight_ok) {
        std::string msg = "weight " + to_string(w) + " is not bounded away from zero on the grid";
        if (!rep.messages.empty()) msg += ": " + rep.messages.front();
        throw std::invalid_argument(msg);
    }
}

SampledFunction weighted_apply(const Expr& f, const Expr& w, OperatorKind kind, double alpha, double a,
                               const Grid& grid, EvalPath path, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("weighted operator: alpha must be positive");
    detail::check_grid_start(grid, a);
    const auto wv = weight_samples(w, grid);
    if (path == EvalPath::Conjugated) return conjugated_path(f, w, kind, alpha, a, grid, opt, wv);
    return direct_path(f, w, kind, alpha, a, grid, opt, wv);
}

WeightedResult weighted_differintegral(const Expr& f, const WeightedOperatorSpec& spec, const Grid& grid,
                                       const EvalOptions& opt) {
    check_weight(spec.w, grid);
    const auto& b = spec.base;
    if (spec.path != EvalPath::Both) return weighted_apply(f, spec.w, b.kind, b.alpha, b.a, grid, spec.path, opt);
    return compare_paths(weighted_apply(f, spec.w, b.kind, b.alpha, b.a, grid, EvalPath::Direct, opt),
                         weighted_apply(f, spec.w, b.kind, b.alpha, b.a, grid, EvalPath::Conjugated, opt));
}

SampledFunction weighted_signed(const Expr& f, const Expr& w, double a, double alpha, const Grid& grid,
                                DerivativeType type, EvalPath path, const EvalOptions& opt) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("weighted operator: alpha must be finite");
    if (alpha < 0.0) return weighted_apply(f, w, OperatorKind::RLIntegral, -alpha, a, grid, path, opt);
    if (alpha == 0.0) {
        detail::check_grid_start(grid, a);
        return sample(f, grid);
    }
    const auto kind = type == DerivativeType::RL ? OperatorKind::RLDerivative : OperatorKind::CaputoDerivative;
    return weighted_apply(f, w, kind, alpha, a, grid, path, opt);
}

SampledFunction weighted_integral_samples(const SampledFunction& h, const Expr& w, double alpha) {
    const auto wv = weight_samples(w, h.grid);
    SampledFunction wh = h;
    for (std::size_t j = 0; j < wh.values.size(); ++j) wh.values[j] *= wv[j];
    SampledFunction out = rl_integral_samples(wh, alpha);
    divide_by(out, wv);
    return out;
}

std::pair<Expr, Expr> closed_form_power(double beta, double alpha, double a, const Expr& w) {
    if (!(beta > -1.0)) throw std::invalid_argument("closed_form_power: beta must exceed -1");
    const Expr xa = Expr::variable() - Expr(a);
    const Expr input = pow(xa, Expr(beta)) / w;
    // Gamma(beta - alpha + 1) at a pole gives the zero function
    const double c = wfrac::gamma(beta + 1.0) * rgamma(beta - alpha + 1.0);
    if (c == 0.0) return {input, Expr(0.0)};
    return {input, Expr(c) * pow(xa, Expr(beta - alpha)) / w};
}

std::pair<Expr, double> closed_form_ml_eigen(double alpha, double omega, double a, const Expr& w) {
    if (!(alpha > 0.0)) throw std::invalid_argument("closed_form_ml_eigen: alpha must be positive");
    const Expr arg = Expr(omega) * pow(Expr::variable() - Expr(a), Expr(alpha));
    return {mittag_leffler(MlParams{alpha, 1.0, 0}, arg) / w, omega};
}

double differintegral_limit_at_a(const Expr& g, double a, double order, double scale, int k, const EvalOptions& opt) {
    // integrals of something bounded at a vanish there
    if (order < 0.0 && finite_at(g, a)) return 0.0;
    if (order == 0.0) return right_limit(g, a, k).value;
    const double floor_eps = 1e-10 * std::max(1.0, std::fabs(a));
    std::vector<double> v;
    for (double eps = 1e-2 * scale; eps >= floor_eps; eps *= 1e-2) {
        const Grid gr = make_custom_grid({a, a + 0.5 * eps, a + eps});
        const auto s = differintegral(g, a, order, gr, DerivativeType::RL, opt);
        const double val = s.values.back();
        if (!std::isfinite(val))
            throw DivergentLimitError("limit of order " + std::to_string(order) + " term at a+ is not finite", k);
        v.push_back(val);
        const std::size_t m = v.size();
        if (m >= 2 && std::fabs(v[m - 1] - v[m - 2]) <= 1e-10 * (1.0 + std::fabs(v[m - 1]))) return v[m - 1];
        if (m >= 3) {
            // geometric tail of the differences
            const double d1 = v[m - 2] - v[m - 3], d2 = v[m - 1] - v[m - 2];
            const double r = d2 / d1;
            if (r > 0.0 && r < 0.9 && std::fabs(d2 * r / (1.0 - r)) <= 1e-6 * (1.0 + std::fabs(v[m - 1])))
                return v[m - 1] + d2 * r / (1.0 - r);
        }
    }
    throw DivergentLimitError("limit of order " + std::to_string(order) + " term at a+ does not settle", k);
}

SampledFunction composition_defect(const Expr& f, const Expr& w, double a, double alpha, DefectVariant variant,
                                   const Grid& grid, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("composition_defect: alpha must be positive");
    detail::check_grid_start(grid, a);
    const int n = derivative_order(alpha);
    const auto wv = weight_samples(w, grid);
    const double wa = weight_at_a(w, a).value;
    SampledFunction out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);

    auto add_term = [&](double coef, double power) {
        if (coef == 0.0) return;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double d = grid.nodes[j] - a;
            if (d > 0.0 || power == 0.0) {
                out.values[j] += coef * (power == 0.0 ? 1.0 : std::pow(d, power)) / wv[j];
            } else if (power > 0.0) {
                // vanishes at a
            } else {
                out.values[j] = coef > 0.0 ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity();
                out.singular_at_a = true;
                out.singular_exponent = std::min(out.singular_exponent, power);
            }
        }
    };

    if (variant == DefectVariant::RL) {
        // lim (D_w^{n-k} I_w^{n-alpha} f)(a+) = lim D^{alpha-k}(w f)(a+) / w(a)
        const Expr g = Expr::make_binary(NodeKind::Mul, w, f);
        const double scale = grid.b() - a;
        for (int k = 1; k <= n; ++k) {
            const double lim = differintegral_limit_at_a(g, a, alpha - double(k), scale, k, opt);
            add_term(lim * rgamma(alpha - k + 1.0), alpha - k);
        }
        return out;
    }
    Expr dk = f;
    double fact = 1.0;
    for (int k = 0; k < n; ++k) {
        const double lim = right_limit(dk, a, k).value;
        if (variant == DefectVariant::Caputo) {
            if (k > 0) fact *= k;
            add_term(wa * lim / fact, double(k));
        } else if (!is_integer_order(alpha)) {
            add_term(wa * lim * rgamma(k - alpha + 1.0), k - alpha);
        }
        if (k + 1 < n) dk = weighted_first_derivative(dk, w);
    }
    return out;
}

}  // namespace wfrac
