#include "wfrac/fdesolver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "wfrac/special.hpp"

namespace wfrac {

namespace {

PhiMap horizon_map(const FdeProblem& p) {
    bool open_a = false;
    try {
        open_a = !std::isfinite(diff_expr(p.phi)(p.a));
    } catch (const DomainError&) {
        open_a = true;
    }
    return PhiMap(p.phi, DomainInterval(p.a, p.a + p.T, open_a, false));
}

}  // namespace

void validate_problem(const FdeProblem& p) {
    const std::size_t n = p.eta.size();
    if (n == 0) throw std::invalid_argument("fde: empty state");
    if (p.A.size() != n) throw std::invalid_argument("fde: A must be " + std::to_string(n) + "x" + std::to_string(n));
    for (const auto& row : p.A)
        if (row.size() != n) throw std::invalid_argument("fde: A is not square");
    if (p.g.size() != n) throw std::invalid_argument("fde: g has " + std::to_string(p.g.size()) + " entries, need " +
                                                     std::to_string(n));
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw std::invalid_argument("fde: alpha must lie in (0, 1)");
    if (!(p.T > 0.0) || !std::isfinite(p.T)) throw std::invalid_argument("fde: horizon must be positive");
}

FdeSolution solve_linear(const FdeProblem& p, int n_steps) {
    validate_problem(p);
    if (n_steps < 8) throw std::invalid_argument("fde: need at least 8 steps");
    const std::size_t dim = p.eta.size();
    const int N = n_steps;
    const PhiMap m = horizon_map(p);
    check_weight_and_phi(p.w, p.phi, make_uniform_grid(p.a, p.a + p.T, 64));

    const double u0 = m(p.a), u1 = m(p.a + p.T);
    const double h = (u1 - u0) / N;
    std::vector<double> us(std::size_t(N) + 1), xs(us.size());
    for (int k = 0; k <= N; ++k) {
        us[std::size_t(k)] = k == N ? u1 : u0 + k * h;
        xs[std::size_t(k)] = k == 0 ? p.a : (k == N ? p.a + p.T : m.inverse(us[std::size_t(k)]));
    }

    Eigen::MatrixXd A(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) A(Eigen::Index(i), Eigen::Index(j)) = p.A[i][j];
    // conjugate forcing w g at the nodes
    std::vector<Eigen::VectorXd> G(us.size(), Eigen::VectorXd(dim));
    std::vector<double> wv(us.size());
    for (std::size_t k = 0; k < us.size(); ++k) {
        wv[k] = p.w(xs[k]);
        for (std::size_t i = 0; i < dim; ++i) G[k](Eigen::Index(i)) = wv[k] * p.g[i](xs[k]);
    }
    Eigen::VectorXd z0(dim);
    for (std::size_t i = 0; i < dim; ++i) z0(Eigen::Index(i)) = wv[0] * p.eta[i];

    const double al = p.alpha;
    const double cp = std::pow(h, al) / wfrac::gamma(al + 1.0);
    const double cc = std::pow(h, al) / wfrac::gamma(al + 2.0);
    std::vector<Eigen::VectorXd> z(us.size()), F(us.size());
    z[0] = z0;
    F[0] = A * z0 + G[0];
    double resid = 0.0;
    Eigen::VectorXd pred(dim), corr(dim);
    for (int k = 0; k < N; ++k) {
        // k is the index of the last known point; step to k + 1
        pred.setZero();
        corr.setZero();
        const double kd = k;
        for (int j = 0; j <= k; ++j) {
            const double b = std::pow(kd + 1.0 - j, al) - std::pow(kd - j, al);
            double a;
            if (j == 0)
                a = std::pow(kd, al + 1.0) - (kd - al) * std::pow(kd + 1.0, al);
            else
                a = std::pow(kd - j + 2.0, al + 1.0) + std::pow(kd - j, al + 1.0) - 2.0 * std::pow(kd - j + 1.0, al + 1.0);
            pred += b * F[std::size_t(j)];
            corr += a * F[std::size_t(j)];
        }
        const std::size_t nx = std::size_t(k) + 1;
        const Eigen::VectorXd zp = z0 + cp * pred;
        const Eigen::VectorXd fp = A * zp + G[nx];
        z[nx] = z0 + cc * (fp + corr);
        F[nx] = A * z[nx] + G[nx];
        resid = std::max(resid, (z[nx] - zp).cwiseAbs().maxCoeff());
    }

    FdeSolution sol;
    sol.xs = make_custom_grid(xs);
    sol.conjugate_us = make_custom_grid(us);
    sol.steps = N;
    sol.max_residual = resid;
    sol.ys.resize(us.size(), std::vector<double>(dim));
    sol.ys[0] = p.eta;
    for (std::size_t k = 1; k < us.size(); ++k)
        for (std::size_t i = 0; i < dim; ++i) sol.ys[k][i] = z[k](Eigen::Index(i)) / wv[k];
    return sol;
}

FdeProblem conjugate_problem(const FdeProblem& p) {
    validate_problem(p);
    const PhiMap m = horizon_map(p);
    if (!m.has_symbolic_inverse()) throw std::invalid_argument("fde: conjugate problem needs a closed-form inverse of phi");
    const Expr& inv = *m.inverse_expr();
    FdeProblem q;
    q.A = p.A;
    q.alpha = p.alpha;
    q.a = m(p.a);
    q.T = m(p.a + p.T) - q.a;
    const double wa = p.w(p.a);
    for (double e : p.eta) q.eta.push_back(wa * e);
    for (const auto& gi : p.g) q.g.push_back(substitute(p.w * gi, inv));
    return q;
}

Expr closed_form_homogeneous(double lambda, double eta0, double alpha, const Expr& w, const Expr& phi, double a) {
    const Expr arg = Expr(lambda) * pow(phi - Expr(phi(a)), Expr(alpha));
    return Expr(w(a) * eta0) * mittag_leffler(MlParams{alpha, 1.0, 0}, arg) / w;
}

BoundednessReport check_exponential_bound(const FdeSolution& sol, const Expr& w, const Expr& phi, double a) {
    BoundednessReport r;
    const std::size_t n = sol.ys.size();
    const double ua = phi(a);
    std::vector<double> u(n), mag(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = sol.xs.nodes[k];
        u[k] = phi(x) - ua;
        double m = 0.0;
        for (double v : sol.ys[k]) {
            if (!std::isfinite(v)) {
                r.bounded = false;
                r.message = "trajectory has a non-finite value at x = " + std::to_string(x);
                return r;
            }
            m = std::max(m, std::fabs(v));
        }
        mag[k] = std::fabs(w(x)) * m;
    }
    // least squares of log|w y| on the second half, zero entries skipped
    double su = 0, sl = 0, suu = 0, sul = 0;
    int cnt = 0;
    for (std::size_t k = n / 2; k < n; ++k) {
        if (mag[k] <= 0.0) continue;
        const double l = std::log(mag[k]);
        su += u[k];
        sl += l;
        suu += u[k] * u[k];
        sul += u[k] * l;
        ++cnt;
    }
    const double den = cnt * suu - su * su;
    r.c_fit = cnt >= 2 && den > 0.0 ? (cnt * sul - su * sl) / den : 0.0;
    for (std::size_t k = 0; k < n; ++k) r.M_fit = std::max(r.M_fit, mag[k] * std::exp(-r.c_fit * u[k]));
    r.max_violation = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double env = mag[k] * std::exp(-r.c_fit * u[k]);
        r.max_violation = std::max(r.max_violation, r.M_fit > 0.0 ? env / r.M_fit - 1.0 : 0.0);
    }
    if (r.M_fit == 0.0) r.max_violation = 0.0;
    r.bounded = std::isfinite(r.M_fit) && r.max_violation <= 1e-9;
    r.message = r.bounded ? "bounded" : "envelope exceeded";
    return r;
}

double max_trajectory_error(const FdeSolution& sol, const std::vector<Expr>& exact) {
    double worst = 0.0;
    for (std::size_t k = 0; k < sol.ys.size(); ++k)
        for (std::size_t i = 0; i < exact.size(); ++i)
            worst = std::max(worst, std::fabs(sol.ys[k][i] - exact[i](sol.xs.nodes[k])));
    return worst;
}

}  // namespace wfrac
