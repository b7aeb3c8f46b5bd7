#include "wfrac/transforms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wfrac/kernels.hpp"
#include "wfrac/quadrature.hpp"
#include "wfrac/special.hpp"

namespace wfrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gl_composite(const std::function<double(double)>& g, double lo, double hi, int panels) {
    const GaussRule& r = gauss_legendre01(16);
    const double len = (hi - lo) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double left = lo + p * len;
        double part = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) part += r.weights[i] * g(left + len * r.nodes[i]);
        sum += part * len;
    }
    return sum;
}

struct Segment {
    double value;
    int panels;
};

Segment doubled_segment(const std::function<double(double)>& g, double lo, double hi, double running,
                        const LaplaceConfig& cfg, int budget) {
    int p = 1;
    double prev = gl_composite(g, lo, hi, p);
    while (true) {
        p *= 2;
        if (p > budget)
            throw LaplaceConvergenceError("laplace transform: no convergence on [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "] within max_panels (s too small or growth too fast)");
        const double cur = gl_composite(g, lo, hi, p);
        if (std::fabs(cur - prev) <= cfg.rel_tol * std::max(std::fabs(cur), std::fabs(running + cur)) ||
            (cur == 0.0 && prev == 0.0))
            return {cur, p};
        prev = cur;
    }
}

// adaptive Simpson with Richardson step
double simpson_rec(const std::function<double(double)>& h, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = h(lm), frm = h(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_rec(h, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(h, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& h, double a, double b, double rel = 1e-8) {
    if (!(b > a)) return 0.0;
    // magnitude from a coarse pass sets the absolute target
    double scale = 0.0;
    const int probe = 32;
    for (int i = 0; i <= probe; ++i) scale += std::fabs(h(a + (b - a) * i / probe));
    scale *= (b - a) / (probe + 1);
    if (scale == 0.0) return 0.0;
    const double fa = h(a), fb = h(b), fm = h(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(h, a, b, fa, fm, fb, whole, rel * scale, 40);
}

PhiMap half_line_map(const Expr& phi, double a) {
    bool open_a = false;
    try {
        open_a = !std::isfinite(diff_expr(phi)(a));
    } catch (const DomainError&) {
        open_a = true;
    }
    return PhiMap(phi, DomainInterval(a, kInf, open_a, false));
}

// u -> (w f)(phi^{-1}(u + phi(a)))
std::function<double(double)> pulled_back(const Expr& f, const Expr& w, const PhiMap& m, double a) {
    const double ua = m(a);
    return [=](double u) {
        const double x = m.inverse(u + ua);
        return w(x) * f(x);
    };
}

// classical convolution of two functions of u at U
double classical_conv(const std::function<double(double)>& F, const std::function<double(double)>& G, double U) {
    return adaptive_simpson([&](double v) { return F(U - v) * G(v); }, 0.0, U);
}

}  // namespace

TransformSample laplace_of(const std::function<double(double)>& h, double s, const LaplaceConfig& cfg) {
    if (!(cfg.rel_tol > 0.0 && cfg.max_panels > 0 && cfg.truncation_tol > 0.0))
        throw std::invalid_argument("LaplaceConfig values must be positive");
    if (!std::isfinite(s)) throw std::invalid_argument("laplace transform: s must be finite");
    const auto g = [&](double u) {
        const double e = std::exp(-s * u);
        if (e == 0.0) return 0.0;
        double hv = 0.0;
        try {
            hv = h(u);
        } catch (const DomainError& err) {
            // past the first segment an evaluation failure is growth outrunning e^{-su}
            if (u < 8.0) throw;
            throw LaplaceConvergenceError("laplace transform: integrand fails at u = " + std::to_string(u) + " (" +
                                          err.what() + "); s too small?");
        }
        const double v = e * hv;
        if (!std::isfinite(v))
            throw LaplaceConvergenceError("laplace transform: integrand not finite at u = " + std::to_string(u));
        return v;
    };
    TransformSample out;
    out.s = s;
    double U = 8.0;
    Segment seg = doubled_segment(g, 0.0, U, 0.0, cfg, cfg.max_panels);
    double total = seg.value;
    out.panels_used = seg.panels;
    while (true) {
        seg = doubled_segment(g, U, 2.0 * U, total, cfg, cfg.max_panels - out.panels_used);
        out.panels_used += seg.panels;
        total += seg.value;
        U *= 2.0;
        if (std::fabs(seg.value) <= cfg.truncation_tol * std::fabs(total) || (seg.value == 0.0 && total == 0.0))
            break;
        if (U > 1e7) throw LaplaceConvergenceError("laplace transform: tail does not decay (s too small)");
    }
    out.value = total;
    out.truncation_point = U;
    return out;
}

TransformSample weighted_laplace(const Expr& f, const Expr& w, double s, const LaplaceConfig& cfg) {
    return laplace_of([&](double x) { return w(x) * f(x); }, s, cfg);
}

TransformSample wphi_laplace(const Expr& f, const Expr& w, const Expr& phi, double a, double s,
                             const LaplaceConfig& cfg) {
    const PhiMap m = half_line_map(phi, a);
    return laplace_of(pulled_back(f, w, m, a), s, cfg);
}

double laplace_samples(std::span<const double> u, std::span<const double> v, double s, double gamma) {
    if (u.size() != v.size()) throw std::invalid_argument("laplace_samples: size mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        const double h = u[k + 1] - u[k];
        if (k == 0 && !std::isfinite(v[0])) {
            // v ~ v1 (u/u1)^gamma on the first subinterval, e^{-su} ~ 1 there
            if (!(gamma > -1.0)) throw std::invalid_argument("laplace_samples: non-integrable start");
            sum += v[1] * h / (1.0 + gamma) * std::exp(-s * u[0]);
            continue;
        }
        const double z = s * h;
        double A = 0.0, B = 0.0;  // weights of v_k, v_{k+1}
        if (std::fabs(z) < 0.1) {
            double c = 1.0, tot = 0.0, bt = 0.0;
            for (int i = 0; i < 20; ++i) {
                if (i > 0) c *= -z / i;
                tot += c / (i + 1);
                bt += c / (i + 2);
            }
            B = h * bt;
            A = h * tot - B;
        } else {
            const double em = std::exp(-z);
            B = (1.0 - em * (1.0 + z)) / (s * z);
            A = -std::expm1(-z) / s - B;
        }
        sum += std::exp(-s * u[k]) * (A * v[k] + B * v[k + 1]);
    }
    return sum;
}

SampledFunction weighted_convolution(const Expr& f, const Expr& g, const Expr& w, const Grid& grid) {
    if (grid.a() != 0.0) throw std::invalid_argument("weighted_convolution: grid must start at 0");
    SampledFunction out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);
    kernels::parallel_for(grid.size(), [&](std::size_t j) {
        const double x = grid.nodes[j];
        if (x <= 0.0) return;
        out.values[j] = adaptive_simpson([&](double t) { return w(x - t) * f(x - t) * w(t) * g(t); }, 0.0, x) / w(x);
    });
    return out;
}

SampledFunction wphi_convolution(const Expr& f, const Expr& g, const Expr& w, const Expr& phi, double a,
                                 const Grid& grid) {
    if (grid.a() != a) throw std::invalid_argument("wphi_convolution: grid must start at a");
    const PhiMap m = half_line_map(phi, a);
    const auto F = pulled_back(f, w, m, a), G = pulled_back(g, w, m, a);
    const double ua = m(a);
    SampledFunction out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);
    kernels::parallel_for(grid.size(), [&](std::size_t j) {
        const double x = grid.nodes[j];
        if (x <= a) return;
        out.values[j] = classical_conv(F, G, m(x) - ua) / w(x);
    });
    return out;
}

std::pair<double, double> convolution_theorem(const Expr& f, const Expr& g, const Expr& w, const Expr& phi, double a,
                                              double s, const LaplaceConfig& cfg) {
    const PhiMap m = half_line_map(phi, a);
    const double ua = m(a);
    // left: the defining t-space integral of the convolution, transformed
    const Expr dphi = m.dphi();
    const auto conv_def = [&](double x) {
        const double px = m(x);
        return adaptive_simpson(
            [&](double t) {
                const double psi = m.inverse(px + ua - m(t));
                return w(psi) * f(psi) * w(t) * g(t) * dphi(t);
            },
            a, x);
    };
    // w(x) (f * g)(x) is the integral itself
    const double lhs = laplace_of([&](double u) { return u <= 0.0 ? 0.0 : conv_def(m.inverse(u + ua)); }, s, cfg).value;
    const double rhs = wphi_laplace(f, w, phi, a, s, cfg).value * wphi_laplace(g, w, phi, a, s, cfg).value;
    return {lhs, rhs};
}

std::vector<LaplaceIdentity> laplace_operator_identities(const Expr& f, const WPhiOperatorSpec& spec,
                                                         std::span<const double> s_values, const LaplaceConfig& cfg,
                                                         const IdentityGrid& ig) {
    if (s_values.empty()) return {};
    if (ig.nodes < 8 || !(ig.grading >= 1.0)) throw std::invalid_argument("identity grid: nodes >= 8, grading >= 1");
    const double a = spec.base.a, alpha = spec.base.alpha;
    const OperatorKind kind = spec.base.kind;
    const PhiMap m = half_line_map(spec.phi, a);
    const double ua = m(a);

    std::vector<TransformSample> F;
    double U = 0.0;
    for (double s : s_values) {
        F.push_back(wphi_laplace(f, spec.w, spec.phi, a, s, cfg));
        U = std::max(U, F.back().truncation_point);
    }

    // graded in u toward a; RL outputs start like u^{-(alpha - floor alpha)}, so grade harder there
    double r = ig.grading;
    if (kind == OperatorKind::RLDerivative && !is_integer_order(alpha))
        r = std::max(r, 2.0 / (1.0 - (alpha - std::floor(alpha))));
    std::vector<double> u(std::size_t(ig.nodes) + 1), x(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] = U * std::pow(double(j) / ig.nodes, r);
        x[j] = j == 0 ? a : m.inverse(ua + u[j]);
    }
    const Grid grid = make_custom_grid(x);
    const SampledFunction op = wphi_apply(f, spec.w, spec.phi, kind, alpha, a, grid, spec.order);
    std::vector<double> v(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        v[j] = std::isfinite(op.values[j]) ? spec.w(x[j]) * op.values[j] : op.values[j];
    const double gamma = op.singular_at_a ? std::min(op.singular_exponent, 0.0) : 0.0;

    // initial terms
    const bool integer = is_integer_order(alpha);
    const int n = kind == OperatorKind::RLIntegral ? 0 : (integer ? int(alpha) : derivative_order(alpha));
    std::vector<double> init(std::size_t(std::max(n, 0)), 0.0);
    if (kind == OperatorKind::CaputoDerivative || (kind == OperatorKind::RLDerivative && integer)) {
        const double wa = weight_at_a(spec.w, a).value;
        for (int i = 0; i < n; ++i) init[std::size_t(i)] = wa * right_limit(d_phi_w(f, spec.w, spec.phi, i), a, i).value;
    } else if (kind == OperatorKind::RLDerivative) {
        const Expr g = Expr::make_binary(NodeKind::Mul, spec.w, f);
        for (int i = 0; i < n; ++i) {
            const double order = alpha - n + i;
            if (order <= 0.0 && std::isfinite(right_limit(g, a).value)) {
                // integral orders vanish at a for bounded w f; order 0 is the value itself
                init[std::size_t(i)] = order == 0.0 ? right_limit(g, a).value : 0.0;
                continue;
            }
            if (!m.has_symbolic_inverse())
                throw std::invalid_argument("laplace identity: initial terms need a closed-form inverse of phi");
            const Expr G = substitute(g, *m.inverse_expr());
            init[std::size_t(i)] = differintegral_limit_at_a(G, ua, order, 1.0, i);
        }
    }

    std::vector<LaplaceIdentity> out;
    for (std::size_t k = 0; k < s_values.size(); ++k) {
        const double s = s_values[k];
        LaplaceIdentity r;
        r.s = s;
        r.lhs = laplace_samples(u, v, s, gamma);
        r.tail = std::fabs(v.back()) * std::exp(-s * U) / s;
        r.tail_warning = r.tail > 10.0 * cfg.rel_tol * std::fabs(r.lhs);
        const double Fs = F[k].value;
        switch (kind) {
            case OperatorKind::RLIntegral: r.rhs = std::pow(s, -alpha) * Fs; break;
            case OperatorKind::RLDerivative:
                r.rhs = std::pow(s, alpha) * Fs;
                for (int i = 0; i < n; ++i) r.rhs -= std::pow(s, n - i - 1) * init[std::size_t(i)];
                break;
            case OperatorKind::CaputoDerivative:
                r.rhs = std::pow(s, alpha) * Fs;
                for (int i = 0; i < n; ++i) r.rhs -= std::pow(s, alpha - i - 1) * init[std::size_t(i)];
                break;
        }
        out.push_back(r);
    }
    return out;
}

std::pair<double, double> laplace_operator_identity(const Expr& f, const WPhiOperatorSpec& spec, double s,
                                                    const LaplaceConfig& cfg) {
    const double sv[] = {s};
    const auto r = laplace_operator_identities(f, spec, sv, cfg);
    return {r[0].lhs, r[0].rhs};
}

}  // namespace wfrac
