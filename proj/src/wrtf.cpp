#include "wfrac/wrtf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wfrac/kernels.hpp"
#include "wfrac/quadrature.hpp"
#include "wfrac/special.hpp"

namespace wfrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_at(const Expr& e, double x) {
    try {
        return std::isfinite(e(x));
    } catch (const DomainError&) {
        return false;
    }
}

std::optional<Expr> peel(const Expr& e, const Expr& u) {
    switch (e.kind()) {
        case NodeKind::Variable: return u;
        case NodeKind::Neg: return peel(e.arg(), -u);
        case NodeKind::Exp: return peel(e.arg(), log(u));
        case NodeKind::Log: return peel(e.arg(), exp(u));
        case NodeKind::Sqrt: return peel(e.arg(), pow(u, Expr(2.0)));
        case NodeKind::Add:
            if (is_constant_expr(e.lhs())) return peel(e.rhs(), u - e.lhs());
            if (is_constant_expr(e.rhs())) return peel(e.lhs(), u - e.rhs());
            return std::nullopt;
        case NodeKind::Sub:
            if (is_constant_expr(e.rhs())) return peel(e.lhs(), u + e.rhs());
            if (is_constant_expr(e.lhs())) return peel(e.rhs(), e.lhs() - u);
            return std::nullopt;
        case NodeKind::Mul:
            if (is_constant_expr(e.lhs())) return peel(e.rhs(), u / e.lhs());
            if (is_constant_expr(e.rhs())) return peel(e.lhs(), u / e.rhs());
            return std::nullopt;
        case NodeKind::Div:
            if (is_constant_expr(e.rhs())) return peel(e.lhs(), u * e.rhs());
            if (is_constant_expr(e.lhs())) return peel(e.rhs(), e.lhs() / u);
            return std::nullopt;
        case NodeKind::Pow:
            if (e.rhs().is_constant() && e.rhs().value() != 0.0)
                return peel(e.lhs(), pow(u, Expr(1.0 / e.rhs().value())));
            if (e.lhs().is_constant() && e.lhs().value() > 0.0 && e.lhs().value() != 1.0)
                return peel(e.rhs(), log(u) / Expr(std::log(e.lhs().value())));
            return std::nullopt;
        default: return std::nullopt;
    }
}

// t-space kernel factor (phi(x) - phi(t))/(x - t); short gaps integrate phi' to dodge cancellation
double divided_difference(const PhiMap& m, double x, double t, double phx, double scale) {
    const double gap = x - t;
    if (gap > 0.05 * scale) return (phx - m(t)) / gap;
    const GaussRule& r = gauss_legendre01(10);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * m.prime(t + gap * r.nodes[i]);
    return s;
}

std::vector<double> weight_samples(const Expr& w, const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == 0 && !finite_at(w, xs[j])) {
            out[j] = kNaN;
            continue;
        }
        out[j] = w(xs[j]);
        if (out[j] == 0.0) throw std::invalid_argument("weight vanishes at x = " + std::to_string(xs[j]));
    }
    return out;
}

void divide_by(SampledFunction& s, const std::vector<double>& d) {
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        if (std::isnan(d[j])) {
            if (std::isfinite(s.values[j])) s.values[j] = kNaN;
            s.singular_at_a = true;
            continue;
        }
        s.values[j] /= d[j];
    }
}

void flag_start(SampledFunction& s, const std::function<bool()>& finite_integrand_at_a) {
    if (!finite_integrand_at_a()) {
        s.values[0] = kNaN;
        s.singular_at_a = true;
    }
}

// adds coef * (u_j - u_a)^{power} / divisor_j
void add_power_term(SampledFunction& s, const std::vector<double>& du, double coef, double power,
                    const std::vector<double>& divisor) {
    if (coef == 0.0) return;
    for (std::size_t j = 0; j < du.size(); ++j) {
        if (du[j] > 0.0) {
            s.values[j] += coef * std::pow(du[j], power) / divisor[j];
        } else if (power < 0.0) {
            s.values[j] = coef > 0.0 ? kInf : -kInf;
            s.singular_at_a = true;
            s.singular_exponent = std::min(s.singular_exponent, power);
        }
    }
}

std::vector<double> u_nodes(const PhiMap& m, const Grid& grid) {
    std::vector<double> u(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) u[j] = m(grid.nodes[j]);
    for (std::size_t j = 1; j < u.size(); ++j)
        if (!(u[j] > u[j - 1])) throw std::invalid_argument("phi does not separate the grid nodes");
    return u;
}

std::vector<double> gaps(const std::vector<double>& u) {
    std::vector<double> d(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) d[j] = u[j] - u[0];
    return d;
}

// 1/Gamma(order) int_a^x (phi(x)-phi(t))^{order-1} w(t) h(t) phi'(t) dt
SampledFunction direct_integral(const PhiMap& m, const Expr& w, const Expr& h, double order, double a,
                                const Grid& grid, const EvalOptions& opt) {
    SampledFunction out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);
    if (opt.scheme == Scheme::Trapezoid) {
        // product trapezoid on u = phi(x) with the samples at the grid nodes
        const auto u = u_nodes(m, grid);
        std::vector<double> g(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            try {
                g[j] = w(grid.nodes[j]) * h(grid.nodes[j]);
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.node()) + " (trapezoid scheme samples the endpoint; use the gauss scheme)",
                                  e.x());
            }
        }
        out.values = kernels::frac_integral_samples(order, u, g, false);
        return out;
    }
    const SingularIntegrator q(order, opt.quad);
    const double rg = rgamma(order);
    const Expr dphi = m.dphi();
    kernels::parallel_for(grid.size(), [&](std::size_t j) {
        const double x = grid.nodes[j];
        if (x <= a) return;
        const double phx = m(x);
        const double scale = x - a;
        out.values[j] = rg * q.integrate(a, x, [&](double t) {
            const double k = divided_difference(m, x, t, phx, scale);
            return std::pow(k, order - 1.0) * w(t) * h(t) * dphi(t);
        });
    });
    flag_start(out, [&] {
        try {
            return std::isfinite(w(a) * h(a) * dphi(a));
        } catch (const DomainError&) {
            return false;
        }
    });
    return out;
}

SampledFunction direct_path(const Expr& f, const Expr& w, const PhiMap& m, OperatorKind kind, double alpha, double a,
                            const Grid& grid, const EvalOptions& opt) {
    const auto wv = weight_samples(w, grid.nodes);
    if (kind == OperatorKind::RLIntegral) {
        SampledFunction out = direct_integral(m, w, f, alpha, a, grid, opt);
        divide_by(out, wv);
        return out;
    }
    if (is_integer_order(alpha)) return sample(d_phi_w(f, w, m.phi(), int(alpha)), grid);
    const int n = derivative_order(alpha);
    const Expr h = d_phi_w(f, w, m.phi(), n);
    SampledFunction out = direct_integral(m, w, h, double(n) - alpha, a, grid, opt);
    divide_by(out, wv);
    if (kind == OperatorKind::RLDerivative) {
        const double wa = weight_at_a(w, a).value;
        const auto du = gaps(u_nodes(m, grid));
        Expr dk = f;
        for (int k = 0; k < n; ++k) {
            add_power_term(out, du, wa * right_limit(dk, a, k).value * rgamma(k - alpha + 1.0), k - alpha, wv);
            if (k + 1 < n) dk = d_phi_w(dk, w, m.phi());
        }
    }
    return out;
}

// u-space evaluation with x-space integrands E_k evaluated at phi^{-1}(u): the integrand of the
// classical operator is E_n (E_0 for integrals); RL corrections use lim E_k(a+)
SampledFunction u_space_numeric(const PhiMap& m, const std::vector<Expr>& E, OperatorKind kind, double alpha, double a,
                                const Grid& grid, const std::vector<double>& divisor, const EvalOptions& opt) {
    const auto u = u_nodes(m, grid);
    const double ua = u[0];
    SampledFunction out;
    out.grid = grid;
    if (kind != OperatorKind::RLIntegral && is_integer_order(alpha)) {
        out = sample(E[std::size_t(alpha)], grid);
        divide_by(out, divisor);
        return out;
    }
    const int n = kind == OperatorKind::RLIntegral ? 0 : derivative_order(alpha);
    const double order = kind == OperatorKind::RLIntegral ? alpha : double(n) - alpha;
    const Expr& integrand = E[std::size_t(n)];
    out.values = detail::integrate_nodes(
        order, ua, u, [&](double v) { return integrand(m.inverse(v)); }, opt, false);
    flag_start(out, [&] { return finite_at(integrand, a); });
    divide_by(out, divisor);
    if (kind == OperatorKind::RLDerivative) {
        const auto du = gaps(u);
        for (int k = 0; k < n; ++k)
            add_power_term(out, du, right_limit(E[std::size_t(k)], a, k).value * rgamma(k - alpha + 1.0), k - alpha,
                           divisor);
    }
    return out;
}

SampledFunction outside_path(const Expr& f, const Expr& w, const PhiMap& m, OperatorKind kind, double alpha, double a,
                             const Grid& grid, const EvalOptions& opt) {
    const auto wv = weight_samples(w, grid.nodes);
    const Expr g = Expr::make_binary(NodeKind::Mul, w, f);
    if (m.has_symbolic_inverse()) {
        // M^{-1} Q (classical) Q^{-1} M taken literally: the classical operator acts on (w f) o phi^{-1}
        const Expr G = substitute(g, *m.inverse_expr());
        const Grid ug = make_custom_grid(u_nodes(m, grid));
        SampledFunction cl = apply_operator(G, OperatorSpec::make(kind, alpha, ug.a()), ug, opt);
        cl.grid = grid;
        divide_by(cl, wv);
        return cl;
    }
    const int top = kind == OperatorKind::RLIntegral ? 0 : std::max(derivative_order(alpha), int(alpha));
    std::vector<Expr> E{g};
    for (int k = 1; k <= top; ++k) E.push_back(diff_expr(E.back()) / m.dphi());
    return u_space_numeric(m, E, kind, alpha, a, grid, wv, opt);
}

SampledFunction inside_path(const Expr& f, const Expr& w, const PhiMap& m, OperatorKind kind, double alpha, double a,
                            const Grid& grid, const EvalOptions& opt) {
    if (m.has_symbolic_inverse()) {
        // Q (M_W^{-1} classical M_W) Q^{-1} with W = w o phi^{-1}: the weighted operator in u
        const Expr& inv = *m.inverse_expr();
        const Expr F = substitute(f, inv), W = substitute(w, inv);
        const Grid ug = make_custom_grid(u_nodes(m, grid));
        SampledFunction out = weighted_apply(F, W, kind, alpha, ug.a(), ug, EvalPath::Direct, opt);
        out.grid = grid;
        return out;
    }
    // W(u_j) through the inverse, as the ordering prescribes
    const auto u = u_nodes(m, grid);
    std::vector<double> Wv(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) Wv[j] = w(m.inverse(u[j]));
    if (!finite_at(w, a)) Wv[0] = kNaN;
    const int top = kind == OperatorKind::RLIntegral ? 0 : std::max(derivative_order(alpha), int(alpha));
    // W * (D_W)^k F in x-space: w (phi'^{-1} (d/dx + w'/w))^k f
    std::vector<Expr> E;
    Expr dk = f;
    for (int k = 0; k <= top; ++k) {
        E.push_back(w * dk);
        dk = weighted_first_derivative(dk, w) / m.dphi();
    }
    return u_space_numeric(m, E, kind, alpha, a, grid, Wv, opt);
}

}  // namespace

std::optional<Expr> symbolic_inverse(const Expr& phi, const DomainInterval& iv) {
    auto inv = peel(phi, Expr::variable());
    if (!inv) return std::nullopt;
    const double hi = iv.unbounded() ? iv.a + 10.0 * std::max(1.0, std::fabs(iv.a)) : iv.b;
    const int samples = 17;
    try {
        for (int i = 0; i <= samples; ++i) {
            if (i == 0 && iv.open_a) continue;
            if (i == samples && iv.open_b && !iv.unbounded()) continue;
            const double x = iv.a + (hi - iv.a) * double(i) / samples;
            const double back = (*inv)(phi(x));
            if (!(std::fabs(back - x) <= 1e-11 * (1.0 + std::fabs(x)))) return std::nullopt;
        }
    } catch (const DomainError&) {
        return std::nullopt;
    }
    return inv;
}

PhiMap::PhiMap(const Expr& phi, const DomainInterval& iv) : phi_(phi), dphi_(diff_expr(phi)) {
    inv_expr_ = symbolic_inverse(phi, iv);
    if (!inv_expr_) numeric_ = std::make_shared<MonotoneInverse>(phi, iv);
}

double PhiMap::inverse(double u) const { return inv_expr_ ? (*inv_expr_)(u) : (*numeric_)(u); }

Expr d_phi_w(const Expr& f, const Expr& w, const Expr& phi) {
    const Expr dphi = diff_expr(phi);
    const Expr one = diff_expr(w * f) / (w * dphi);
    const Expr two = weighted_first_derivative(f, w) / dphi;
    int compared = 0;
    for (double x : {0.37, 0.61, 1.13, 1.57, 2.3, 3.7, 0.13, -0.7}) {
        double v1 = 0.0, v2 = 0.0;
        try {
            v1 = one(x);
            v2 = two(x);
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(v1) || !std::isfinite(v2)) continue;
        if (std::fabs(v1 - v2) > 1e-9 * (1.0 + std::fabs(v1)))
            throw std::logic_error("d_phi_w: product-rule forms disagree at x = " + std::to_string(x));
        if (++compared == 3) break;
    }
    return one;
}

Expr d_phi_w(const Expr& f, const Expr& w, const Expr& phi, int n) {
    Expr out = f;
    for (int i = 0; i < n; ++i) out = d_phi_w(out, w, phi);
    return out;
}

void check_weight_and_phi(const Expr& w, const Expr& phi, const Grid& grid) {
    const bool open_a = !finite_at(w, grid.a()) || !finite_at(diff_expr(phi), grid.a()) || !finite_at(phi, grid.a());
    const auto rep = validate_spec(w, phi, DomainInterval(grid.a(), grid.b(), open_a, false));
    if (!rep.ok()) {
        std::string msg = !rep.weight_ok ? "weight " + to_string(w) + " is not bounded away from zero"
                                         : "phi " + to_string(phi) + " is not strictly increasing";
        if (!rep.messages.empty()) msg += ": " + rep.messages.front();
        throw std::invalid_argument(msg);
    }
}

SampledFunction wphi_apply(const Expr& f, const Expr& w, const Expr& phi, OperatorKind kind, double alpha, double a,
                           const Grid& grid, ConjOrder order, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("wphi operator: alpha must be positive");
    detail::check_grid_start(grid, a);
    const bool open_a = !finite_at(phi, a) || !finite_at(diff_expr(phi), a);
    const PhiMap m(phi, DomainInterval(grid.a(), grid.b(), open_a, false));
    switch (order) {
        case ConjOrder::Direct: return direct_path(f, w, m, kind, alpha, a, grid, opt);
        case ConjOrder::WeightOutside: return outside_path(f, w, m, kind, alpha, a, grid, opt);
        case ConjOrder::WeightInside: return inside_path(f, w, m, kind, alpha, a, grid, opt);
    }
    throw std::invalid_argument("wphi operator: unknown ordering");
}

SampledFunction wphi_differintegral(const Expr& f, const WPhiOperatorSpec& spec, const Grid& grid,
                                    const EvalOptions& opt) {
    check_weight_and_phi(spec.w, spec.phi, grid);
    return wphi_apply(f, spec.w, spec.phi, spec.base.kind, spec.base.alpha, spec.base.a, grid, spec.order, opt);
}

PathComparison wphi_compare(const Expr& f, const Expr& w, const Expr& phi, OperatorKind kind, double alpha, double a,
                            const Grid& grid, ConjOrder first, ConjOrder second, const EvalOptions& opt) {
    return compare_paths(wphi_apply(f, w, phi, kind, alpha, a, grid, first, opt),
                         wphi_apply(f, w, phi, kind, alpha, a, grid, second, opt));
}

SampledFunction wphi_signed(const Expr& f, const Expr& w, const Expr& phi, double a, double alpha, const Grid& grid,
                            DerivativeType type, ConjOrder order, const EvalOptions& opt) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("wphi operator: alpha must be finite");
    if (alpha < 0.0) return wphi_apply(f, w, phi, OperatorKind::RLIntegral, -alpha, a, grid, order, opt);
    if (alpha == 0.0) {
        detail::check_grid_start(grid, a);
        return sample(f, grid);
    }
    const auto kind = type == DerivativeType::RL ? OperatorKind::RLDerivative : OperatorKind::CaputoDerivative;
    return wphi_apply(f, w, phi, kind, alpha, a, grid, order, opt);
}

SampledFunction wphi_integral_samples(const SampledFunction& h, const Expr& w, const Expr& phi, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("wphi_integral_samples: alpha must be positive");
    if (h.singular_at_a) throw std::invalid_argument("wphi_integral_samples: input is singular at a");
    const auto wv = weight_samples(w, h.grid.nodes);
    std::vector<double> u(h.grid.size()), g(h.grid.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] = phi(h.grid.nodes[j]);
        g[j] = wv[j] * h.values[j];
    }
    SampledFunction out;
    out.grid = h.grid;
    out.values = kernels::frac_integral_samples(alpha, u, g, false);
    divide_by(out, wv);
    return out;
}

std::pair<Expr, Expr> closed_form_power(double beta, double alpha, double a, const Expr& w, const Expr& phi) {
    if (!(beta > -1.0)) throw std::invalid_argument("closed_form_power: beta must exceed -1");
    const Expr du = phi - Expr(phi(a));
    const Expr input = pow(du, Expr(beta)) / w;
    const double c = wfrac::gamma(beta + 1.0) * rgamma(beta - alpha + 1.0);
    if (c == 0.0) return {input, Expr(0.0)};
    return {input, Expr(c) * pow(du, Expr(beta - alpha)) / w};
}

std::pair<Expr, double> closed_form_ml_eigen(double alpha, double omega, double a, const Expr& w, const Expr& phi) {
    if (!(alpha > 0.0)) throw std::invalid_argument("closed_form_ml_eigen: alpha must be positive");
    const Expr arg = Expr(omega) * pow(phi - Expr(phi(a)), Expr(alpha));
    return {mittag_leffler(MlParams{alpha, 1.0, 0}, arg) / w, omega};
}

SampledFunction composition_defect(const Expr& f, const Expr& w, const Expr& phi, double a, double alpha,
                                   DefectVariant variant, const Grid& grid, const EvalOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("composition_defect: alpha must be positive");
    detail::check_grid_start(grid, a);
    const int n = derivative_order(alpha);
    const auto wv = weight_samples(w, grid.nodes);
    const double wa = weight_at_a(w, a).value;
    const bool open_a = !finite_at(phi, a) || !finite_at(diff_expr(phi), a);
    const PhiMap m(phi, DomainInterval(grid.a(), grid.b(), open_a, false));
    const auto du = gaps(u_nodes(m, grid));
    SampledFunction out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);

    if (variant == DefectVariant::RL) {
        // limits of the classical differintegrals of (w f) o phi^{-1} at u_a+
        const Expr g = Expr::make_binary(NodeKind::Mul, w, f);
        const double scale = du.back();
        for (int k = 1; k <= n; ++k) {
            double lim = 0.0;
            if (!(alpha - k < 0.0 && finite_at(g, a))) {
                if (!m.has_symbolic_inverse())
                    throw std::invalid_argument("composition_defect: RL variant with unbounded w f needs a closed-form inverse of phi");
                const Expr G = substitute(g, *m.inverse_expr());
                lim = differintegral_limit_at_a(G, m(a), alpha - double(k), scale, k, opt);
            }
            add_power_term(out, du, lim * rgamma(alpha - k + 1.0), alpha - k, wv);
        }
        return out;
    }
    Expr dk = f;
    double fact = 1.0;
    for (int k = 0; k < n; ++k) {
        const double lim = right_limit(dk, a, k).value;
        if (variant == DefectVariant::Caputo) {
            if (k > 0) fact *= k;
            if (k == 0) {
                for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] += wa * lim / wv[j];
            } else {
                add_power_term(out, du, wa * lim / fact, double(k), wv);
            }
        } else if (!is_integer_order(alpha)) {
            add_power_term(out, du, wa * lim * rgamma(k - alpha + 1.0), k - alpha, wv);
        }
        if (k + 1 < n) dk = d_phi_w(dk, w, phi);
    }
    return out;
}

std::string to_string(PresetFamily f) {
    switch (f) {
        case PresetFamily::Tempered: return "tempered";
        case PresetFamily::Kober: return "kober";
        case PresetFamily::Hadamard: return "hadamard";
        case PresetFamily::ErdelyiKober: return "erdelyi-kober";
    }
    return "?";
}

PresetFamily parse_preset_family(const std::string& name) {
    if (name == "tempered") return PresetFamily::Tempered;
    if (name == "kober") return PresetFamily::Kober;
    if (name == "hadamard") return PresetFamily::Hadamard;
    if (name == "erdelyi-kober") return PresetFamily::ErdelyiKober;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

PresetForm preset_form(const PresetParams& p, OperatorKind kind, double alpha) {
    const Expr x = Expr::variable();
    PresetForm out;
    switch (p.family) {
        case PresetFamily::Tempered:
            out.w = exp(Expr(p.beta) * x);
            out.phi = x;
            break;
        case PresetFamily::Kober:
            if (kind != OperatorKind::RLIntegral) throw std::invalid_argument("kober preset defines the integral only");
            out.w = pow(x, Expr(p.eta));
            out.phi = x;
            out.prefactor_power = -alpha;
            break;
        case PresetFamily::Hadamard:
            out.w = pow(x, Expr(p.beta));
            out.phi = log(x);
            break;
        case PresetFamily::ErdelyiKober:
            if (!(p.sigma > 0.0)) throw std::invalid_argument("erdelyi-kober preset needs sigma > 0");
            out.phi = pow(x, Expr(p.sigma));
            if (kind == OperatorKind::RLIntegral) {
                out.w = pow(x, Expr(p.sigma * p.eta));
                out.prefactor_power = -p.sigma * alpha;
            } else {
                out.w = pow(x, Expr(p.sigma * (p.eta + alpha)));
                out.prefactor_power = p.sigma * alpha;
            }
            break;
    }
    return out;
}

namespace {

void apply_prefactor(SampledFunction& s, double power) {
    if (power == 0.0) return;
    for (std::size_t j = 0; j < s.values.size(); ++j) s.values[j] *= std::pow(s.grid.nodes[j], power);
}

void check_preset_domain(const PresetParams& p, double a) {
    const bool needs_positive = p.family == PresetFamily::Hadamard || p.family == PresetFamily::ErdelyiKober ||
                                p.family == PresetFamily::Kober;
    if (needs_positive && !(a > 0.0))
        throw std::invalid_argument(to_string(p.family) + " preset needs a lower limit a > 0");
}

}  // namespace

SampledFunction preset_operator(const Expr& f, const PresetParams& p, double alpha, double a, const Grid& grid,
                                OperatorKind kind, ConjOrder order, const EvalOptions& opt) {
    check_preset_domain(p, a);
    const PresetForm form = preset_form(p, kind, alpha);
    SampledFunction out = wphi_apply(f, form.w, form.phi, kind, alpha, a, grid, order, opt);
    apply_prefactor(out, form.prefactor_power);
    return out;
}

PathComparison ek_analytic_continuation_check(const PresetParams& p, double alpha, const Expr& f, double a,
                                              const Grid& grid, const EvalOptions& opt) {
    if (p.family != PresetFamily::ErdelyiKober) throw std::invalid_argument("continuation check is for erdelyi-kober");
    if (!(alpha < 0.0)) throw std::invalid_argument("continuation check needs alpha < 0");
    check_preset_domain(p, a);
    // left: the integral form at order alpha <= 0, i.e. its weight and prefactor with the RL derivative of order -alpha
    const PresetForm lf = preset_form(p, OperatorKind::RLIntegral, alpha);
    SampledFunction left =
        wphi_signed(f, lf.w, lf.phi, a, -alpha, grid, DerivativeType::RL, ConjOrder::Direct, opt);
    apply_prefactor(left, lf.prefactor_power);
    // right: the RL-type derivative of order -alpha with eta shifted by alpha
    PresetParams q = p;
    q.eta = p.eta + alpha;
    SampledFunction right = preset_operator(f, q, -alpha, a, grid, OperatorKind::RLDerivative, ConjOrder::WeightOutside, opt);
    return compare_paths(std::move(left), std::move(right));
}

}  // namespace wfrac
