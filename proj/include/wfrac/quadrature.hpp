#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace wfrac {

// nodes and weights on [0, 1]
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule make_gauss_legendre01(int m);
// weight s^{alpha-1} on [0, 1], Golub-Welsch
GaussRule make_gauss_jacobi01(double alpha, int m);

const GaussRule& gauss_legendre01(int m);
std::shared_ptr<const GaussRule> gauss_jacobi01(double alpha, int m);

// product trapezoid: weights W_k with
//   int_{t_0}^{t_j} (t_j - s)^{alpha-1} h(s) ds  ~  sum_k W_k h(t_k)
// for h piecewise linear on the nodes t; w is resized to j + 1
void product_trapezoid_weights(double alpha, std::span<const double> t, std::size_t j,
                               std::vector<double>& w);

// exact weights on one subinterval: left/right coefficient given distance A = x - t_k
// from x to the left end and length d of the subinterval
void trapezoid_panel_weights(double alpha, double A, double d, double& left, double& right);

struct SingularQuadOptions {
    double max_panel = std::numeric_limits<double>::infinity();
    int jacobi_points = 12;
    int max_levels = 64;
    double level_tol = 1e-15;
};

// int_a^x (x - t)^{alpha-1} g(t) dt for g smooth on (a, x] and at worst
// integrably singular at a; no 1/Gamma factor
class SingularIntegrator {
public:
    explicit SingularIntegrator(double alpha, SingularQuadOptions opt = {});

    template <class G>
    double integrate(double a, double x, G&& g) const;

    double alpha() const { return alpha_; }

private:
    double alpha_;
    SingularQuadOptions opt_;
    std::shared_ptr<const GaussRule> jacobi_;

    template <class G>
    double gl_panel(double lo, double hi, double x, int m, G& g) const {
        const GaussRule& r = gauss_legendre01(m);
        const double len = hi - lo;
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            const double t = lo + len * r.nodes[i];
            s += r.weights[i] * std::pow(x - t, alpha_ - 1.0) * g(t);
        }
        return s * len;
    }

    static int points_for(double dist, double half) {
        const double ratio = dist / half;
        if (ratio >= 67.0) return 4;
        if (ratio >= 5.8) return 8;
        return 12;
    }

    // panels of [lo, hi] no longer than max_panel
    template <class G>
    double gl_span(double lo, double hi, double a, double x, G& g) const {
        const double len = hi - lo;
        int pieces = 1;
        if (len > opt_.max_panel) pieces = int(std::ceil(len / opt_.max_panel));
        const double step = len / pieces;
        double s = 0.0;
        for (int p = 0; p < pieces; ++p) {
            const double l0 = lo + step * p;
            const double l1 = p + 1 == pieces ? hi : l0 + step;
            const double half = 0.5 * (l1 - l0);
            const double dist = std::min(l0 - a, x - l1);
            s += gl_panel(l0, l1, x, points_for(dist, half), g);
        }
        return s;
    }
};

template <class G>
double SingularIntegrator::integrate(double a, double x, G&& g) const {
    const double L = x - a;
    if (!(L > 0.0)) return 0.0;
    double ell = L / 8.0;
    if (ell > opt_.max_panel) ell = opt_.max_panel;

    // panel touching x: Gauss-Jacobi absorbs (x - t)^{alpha-1}
    double near_x = 0.0;
    {
        const GaussRule& r = *jacobi_;
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * g(x - ell * r.nodes[i]);
        near_x = s * std::pow(ell, alpha_);
    }
    const double mid = a + 0.5 * L;
    // [mid, x - ell], graded by distance to x
    double body = 0.0;
    {
        double hi = x - ell;
        double len = ell;
        while (hi > mid + 1e-15 * L) {
            double lo = std::max(mid, hi - len);
            if (lo - mid < 0.25 * len) lo = mid;
            body += gl_span(lo, hi, a, x, g);
            hi = lo;
            len = std::min(2.0 * len, opt_.max_panel);
        }
    }

    // [a, mid]: try one smooth pass first
    const double half = mid - a;
    double near_a = 0.0;
    {
        const int m = 12;
        const double whole = gl_panel(a, mid, x, m, g);
        const double split = gl_panel(a, a + 0.5 * half, x, m, g) + gl_panel(a + 0.5 * half, mid, x, m, g);
        const double scale = std::fabs(near_x) + std::fabs(body) + std::fabs(split);
        if (half <= opt_.max_panel && std::fabs(whole - split) <= opt_.level_tol * scale) {
            near_a = split;
        } else {
            // dyadic refinement toward a
            const double cmin = std::max(L * std::ldexp(1.0, -opt_.max_levels),
                                         256.0 * std::numeric_limits<double>::epsilon() * std::fabs(a));
            double c = half;
            double prev = 0.0, prev_ratio = 0.0;
            double tail = 0.0;
            int level = 0;
            for (;; ++level) {
                const double lo = a + 0.5 * c;
                const double piece = gl_span(lo, a + c, a, x, g);
                near_a += piece;
                c *= 0.5;
                double ratio = 0.0;
                if (level > 0 && piece != 0.0) ratio = prev / piece;
                const double total = std::fabs(near_x + body + near_a);
                if (piece == 0.0 && prev == 0.0 && level > 1) break;
                if (level >= 2 && ratio > 1.0 && prev_ratio > 1.0) {
                    const double est = piece / (ratio - 1.0);
                    const double err = std::fabs(est) * std::fabs(ratio - prev_ratio) / (ratio - 1.0);
                    if (err <= opt_.level_tol * total || c < cmin) {
                        tail = est;
                        break;
                    }
                }
                if (c < cmin) break;
                prev = piece;
                prev_ratio = ratio;
            }
            near_a += tail;
        }
    }
    return near_x + body + near_a;
}

}  // namespace wfrac
