#include "wfrac/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "wfrac/special.hpp"

namespace wfrac {

namespace {

// Jacobi weight (1-x)^pa (1+x)^pb on [-1, 1]
GaussRule golub_welsch_jacobi(double pa, double pb, int m) {
    if (m < 1) throw std::invalid_argument("gauss rule: need at least one point");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    const double ab = pa + pb;
    for (int k = 0; k < m; ++k) {
        const double d = 2.0 * k + ab;
        J(k, k) = k == 0 ? (pb - pa) / (ab + 2.0) : (pb * pb - pa * pa) / (d * (d + 2.0));
        if (k + 1 < m) {
            const double n = k + 1.0;
            const double dn = 2.0 * n + ab;
            const double num = 4.0 * n * (n + pa) * (n + pb) * (n + ab);
            const double den = dn * dn * (dn + 1.0) * (dn - 1.0);
            const double off = std::sqrt(num / den);
            J(k, k + 1) = off;
            J(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss rule: eigen solver failed");
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(pa + 1.0) + std::lgamma(pb + 1.0) -
                                std::lgamma(ab + 2.0));
    GaussRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        r.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        r.weights[i] = mu0 * v0 * v0;
    }
    return r;
}

}  // namespace

GaussRule make_gauss_legendre01(int m) {
    GaussRule r = golub_welsch_jacobi(0.0, 0.0, m);
    // symmetrize to kill eigen-solver asymmetry
    for (int i = 0; i < m / 2; ++i) {
        const double x = 0.5 * (r.nodes[m - 1 - i] - r.nodes[i]);
        const double w = 0.5 * (r.weights[m - 1 - i] + r.weights[i]);
        r.nodes[i] = -x;
        r.nodes[m - 1 - i] = x;
        r.weights[i] = w;
        r.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) r.nodes[m / 2] = 0.0;
    for (int i = 0; i < m; ++i) {
        r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
        r.weights[i] *= 0.5;
    }
    return r;
}

GaussRule make_gauss_jacobi01(double alpha, int m) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gauss-jacobi: alpha must be positive");
    // s = (1 + x)/2, s^{alpha-1} = 2^{1-alpha} (1+x)^{alpha-1}, ds = dx/2
    GaussRule r = golub_welsch_jacobi(0.0, alpha - 1.0, m);
    const double scale = std::pow(2.0, -alpha);
    for (int i = 0; i < m; ++i) {
        r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
        r.weights[i] *= scale;
    }
    return r;
}

const GaussRule& gauss_legendre01(int m) {
    static const std::vector<GaussRule> table = [] {
        std::vector<GaussRule> t(65);
        for (int k = 1; k <= 64; ++k) t[k] = make_gauss_legendre01(k);
        return t;
    }();
    if (m < 1 || m > 64) throw std::invalid_argument("gauss-legendre: 1 <= m <= 64");
    return table[m];
}

std::shared_ptr<const GaussRule> gauss_jacobi01(double alpha, int m) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::shared_ptr<const GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(alpha, m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto rule = std::make_shared<const GaussRule>(make_gauss_jacobi01(alpha, m));
    cache.emplace(key, rule);
    return rule;
}

void trapezoid_panel_weights(double alpha, double A, double d, double& left, double& right) {
    // int_0^d (A - s)^{alpha-1} {1 - s/d, s/d} ds
    const double r = d / A;
    double m1, mleft;
    if (r < 0.1) {
        // (1 - r u)^{alpha-1} = sum c_j (r u)^j
        double c = 1.0, rp = 1.0;
        m1 = 0.0;
        mleft = 0.0;
        for (int j = 0; j < 40; ++j) {
            const double t = c * rp;
            m1 += t / (j + 2.0);
            mleft += t / ((j + 1.0) * (j + 2.0));
            if (std::fabs(t) < 1e-18) break;
            c *= (j - alpha + 1.0) / (j + 1.0);
            rp *= r;
        }
    } else {
        const double rho = 1.0 - r;
        const double p0 = rho > 0.0 ? -std::expm1(alpha * std::log1p(-r)) : 1.0;   // 1 - rho^alpha
        const double p1 = rho > 0.0 ? -std::expm1((alpha + 1.0) * std::log1p(-r)) : 1.0;
        const double m0 = p0 / (alpha * r);
        m1 = (p0 / alpha - p1 / (alpha + 1.0)) / (r * r);
        mleft = m0 - m1;
    }
    const double scale = d * std::pow(A, alpha - 1.0);
    left = scale * mleft;
    right = scale * m1;
}

void product_trapezoid_weights(double alpha, std::span<const double> t, std::size_t j, std::vector<double>& w) {
    w.assign(j + 1, 0.0);
    const double x = t[j];
    for (std::size_t k = 0; k < j; ++k) {
        double l = 0.0, r = 0.0;
        trapezoid_panel_weights(alpha, x - t[k], t[k + 1] - t[k], l, r);
        w[k] += l;
        w[k + 1] += r;
    }
}

SingularIntegrator::SingularIntegrator(double alpha, SingularQuadOptions opt)
    : alpha_(alpha), opt_(opt), jacobi_(gauss_jacobi01(alpha, opt.jacobi_points)) {
    if (!(alpha > 0.0)) throw std::invalid_argument("singular integral: alpha must be positive");
}

}  // namespace wfrac
