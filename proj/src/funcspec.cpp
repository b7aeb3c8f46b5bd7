#include "wfrac/funcspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wfrac {

DomainInterval::DomainInterval(double lo, double hi, bool oa, bool ob)
    : a(lo), b(hi), open_a(oa), open_b(ob) {
    if (!(lo < hi)) throw std::invalid_argument("DomainInterval: need a < b");
    if (!std::isfinite(lo)) throw std::invalid_argument("DomainInterval: a must be finite");
}

MonotoneInverse::MonotoneInverse(Expr phi, DomainInterval interval)
    : phi_(std::move(phi)), dphi_(diff_expr(phi_)), iv_(interval) {
    phi_a_ = phi_(iv_.a);
    phi_b_ = iv_.unbounded() ? std::numeric_limits<double>::infinity() : phi_(iv_.b);
    if (!(phi_b_ > phi_a_)) throw InversionError("invert_monotone: phi(b) <= phi(a), not increasing");
}

double MonotoneInverse::operator()(double y) const {
    const double tol = 1e-12 * (1.0 + std::fabs(y));
    if (!std::isfinite(y) || y < phi_a_ - tol || y > phi_b_ + tol)
        throw InversionError("invert_monotone: y = " + std::to_string(y) + " outside [phi(a), phi(b)]");
    double lo = iv_.a, flo = phi_a_;
    double hi, fhi;
    if (iv_.unbounded()) {
        double step = std::max(1.0, std::fabs(lo));
        hi = lo + step;
        fhi = phi_(hi);
        int guard = 0;
        while (fhi < y) {
            if (++guard > 1100) throw InversionError("invert_monotone: bracket expansion failed");
            lo = hi;
            const double prev = fhi;
            flo = fhi;
            step *= 2.0;
            hi = lo + step;
            fhi = phi_(hi);
            if (!(fhi > prev)) throw InversionError("invert_monotone: phi not increasing during bracket search");
        }
    } else {
        hi = iv_.b;
        fhi = phi_b_;
    }
    if (y <= flo) return lo;
    if (y >= fhi) return hi;

    double x = lo + (hi - lo) * ((y - flo) / (fhi - flo));
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double bracket_lo = flo, bracket_hi = fhi;
    for (int it = 0; it < 400; ++it) {
        const double fx = phi_(x);
        if (fx < bracket_lo || fx > bracket_hi)
            throw InversionError("invert_monotone: phi not monotone near x = " + std::to_string(x));
        const double r = fx - y;
        if (r == 0.0) return x;
        if (r < 0.0) lo = x;
        else hi = x;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)) ||
            hi - lo < std::numeric_limits<double>::min()) {
            // pick the closer endpoint
            const double rl = std::fabs(phi_(lo) - y), rh = std::fabs(phi_(hi) - y);
            return rl <= rh ? lo : hi;
        }
        double d = 0.0;
        try {
            d = dphi_(x);
        } catch (const DomainError&) {
            d = 0.0;
        }
        double xn = d > 0.0 ? x - r / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (xn == x) return x;
        x = xn;
    }
    return x;
}

double invert_monotone(const Expr& phi, double y, const DomainInterval& interval) {
    return MonotoneInverse(phi, interval)(y);
}

ValidationReport validate_spec(const Expr& w, const Expr& phi, const DomainInterval& iv, int n_samples) {
    if (n_samples < 16) throw std::invalid_argument("validate_spec: n_samples must be >= 16");
    if (iv.unbounded()) throw std::invalid_argument("validate_spec: interval must be bounded");
    ValidationReport rep;
    const Expr dphi = diff_expr(phi);
    const double mid = 0.5 * (iv.a + iv.b), half = 0.5 * (iv.b - iv.a);
    double wmin = std::numeric_limits<double>::infinity();
    double pmin = std::numeric_limits<double>::infinity();
    int wsign = 0;
    bool w_eval_ok = true, p_eval_ok = true, sign_change = false;
    for (int k = 0; k < n_samples; ++k) {
        if (k == 0 && iv.open_a) continue;
        if (k == n_samples - 1 && iv.open_b) continue;
        // Chebyshev-Lobatto nodes, ascending, endpoints included
        double x = mid - half * std::cos(std::numbers::pi * k / (n_samples - 1));
        if (k == 0) x = iv.a;
        if (k == n_samples - 1) x = iv.b;
        ++rep.samples_used;
        if (w_eval_ok) {
            try {
                const double wv = w(x);
                wmin = std::min(wmin, std::fabs(wv));
                const int s = wv > 0.0 ? 1 : (wv < 0.0 ? -1 : 0);
                if (s != 0) {
                    if (wsign != 0 && s != wsign) sign_change = true;
                    wsign = s;
                }
            } catch (const DomainError& e) {
                w_eval_ok = false;
                rep.messages.push_back(std::string("w: ") + e.what());
            }
        }
        if (p_eval_ok) {
            try {
                pmin = std::min(pmin, dphi(x));
            } catch (const DomainError& e) {
                p_eval_ok = false;
                rep.messages.push_back(std::string("phi': ") + e.what());
            }
        }
    }
    rep.weight_min_abs = w_eval_ok ? wmin : 0.0;
    rep.phi_prime_min = p_eval_ok ? pmin : 0.0;
    rep.weight_ok = w_eval_ok && !sign_change && wmin > 1e-12;
    rep.phi_monotone_ok = p_eval_ok && pmin > 1e-12;
    if (sign_change) rep.messages.push_back("w changes sign on the interval");
    if (w_eval_ok && !(wmin > 1e-12)) rep.messages.push_back("w vanishes on the interval (min |w| <= 1e-12)");
    if (p_eval_ok && !(pmin > 1e-12)) rep.messages.push_back("phi is not strictly increasing (min phi' <= 1e-12)");
    return rep;
}

}  // namespace wfrac
