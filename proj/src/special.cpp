#include "wfrac/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <vector>

namespace wfrac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

double lanczos_sum(double xm1) {
    double s = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) s += kLanczos[k] / (xm1 + double(k));
    return s;
}

// sin(pi x) with exact argument reduction
double sinpi(double x) {
    double r = x - 2.0 * std::nearbyint(0.5 * x);  // r in [-1, 1]
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

bool is_nonpositive_int(double x) { return x <= 0.0 && x == std::floor(x); }

// Gamma for x >= 0.5
double gamma_pos(double x) {
    if (x == std::floor(x) && x <= 171.0) {
        double f = 1.0;
        for (int k = 2; k < int(x); ++k) f *= k;
        return f;
    }
    if (x > 171.7) return std::numeric_limits<double>::infinity();
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    // split the power so that moderate overflow of t^(x-1/2) cannot happen
    const double half = std::pow(t, 0.5 * (xm1 + 0.5));
    return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * lanczos_sum(xm1);
}

double lgamma_pos(double x) {
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

}  // namespace

double gamma(double x) {
    if (std::isnan(x)) return x;
    if (is_nonpositive_int(x)) throw PoleError("gamma: pole at x = " + std::to_string(x));
    if (x >= 0.5) return gamma_pos(x);
    return kPi / (sinpi(x) * gamma_pos(1.0 - x));
}

double rgamma(double x) {
    if (is_nonpositive_int(x)) return 0.0;
    if (x > 171.0) return std::exp(-lgamma_pos(x));
    if (x < -170.0) {
        // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, Gamma(1-x) large
        return sinpi(x) * std::exp(lgamma_pos(1.0 - x)) / kPi;
    }
    return 1.0 / gamma(x);
}

double lgamma_abs(double x) {
    if (is_nonpositive_int(x)) return std::numeric_limits<double>::infinity();
    if (x >= 0.5) return lgamma_pos(x);
    return std::log(kPi / std::fabs(sinpi(x))) - lgamma_pos(1.0 - x);
}

namespace detail {

namespace {

// c_k = (k+m)!/k! / Gamma(alpha (k+m) + beta), cached per parameter set
struct MlCoeffs {
    double alpha, beta;
    int m, n;
    std::vector<double> c;
};

std::shared_ptr<const MlCoeffs> ml_coeffs(double alpha, double beta, int m, int n) {
    thread_local std::shared_ptr<const MlCoeffs> last;
    if (last && last->alpha == alpha && last->beta == beta && last->m == m && last->n >= n) return last;
    static std::mutex mu;
    static std::map<std::tuple<double, double, int>, std::shared_ptr<const MlCoeffs>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(alpha, beta, m);
    auto it = cache.find(key);
    if (it == cache.end() || it->second->n < n) {
        auto t = std::make_shared<MlCoeffs>();
        t->alpha = alpha;
        t->beta = beta;
        t->m = m;
        t->n = n;
        t->c.resize(std::size_t(n));
        for (int k = 0; k < n; ++k) {
            double logcoef = 0.0;
            for (int j = 1; j <= m; ++j) logcoef += std::log(double(k + j));
            const double arg = alpha * (k + m) + beta;
            t->c[k] = arg > 0.0 ? std::exp(logcoef - lgamma_abs(arg)) : std::exp(logcoef) * rgamma(arg);
        }
        it = cache.insert_or_assign(key, std::shared_ptr<const MlCoeffs>(t)).first;
    }
    last = it->second;
    return last;
}

}  // namespace

bool ml_series(double alpha, double beta, int m, double z, const MlEvalConfig& cfg,
               double& out) {
    const auto tab = ml_coeffs(alpha, beta, m, cfg.max_terms);
    const std::vector<double>& c = tab->c;
    double sum = 0.0, comp = 0.0, abs_sum = 0.0;
    double prev_abs = std::numeric_limits<double>::infinity();
    double zk = 1.0;
    int small_run = 0;
    for (int k = 0; k < cfg.max_terms; ++k) {
        if (k > 0 && z == 0.0) {
            out = c[0];
            return true;
        }
        const double term = c[k] * zk;
        zk *= z;
        if (!std::isfinite(zk) || std::fabs(zk) > 1e280) return false;
        // Neumaier compensated sum
        const double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) comp += (sum - t) + term;
        else comp += (term - t) + sum;
        sum = t;
        const double at = std::fabs(term);
        abs_sum += at;
        const double total = std::fabs(sum + comp);
        if (at <= cfg.series_tol * total && at <= prev_abs) {
            if (++small_run >= 2) {
                out = sum + comp;
                // cancellation check: sum |t| relative to the result
                return abs_sum <= 1e2 * total;
            }
        } else {
            small_run = 0;
        }
        if (total == 0.0 && at == 0.0 && k > 2 && prev_abs == 0.0) {
            out = 0.0;
            return true;
        }
        prev_abs = at;
    }
    return false;
}

namespace {

struct ContourParam {
    double mu = 0.0, h = 0.0, N = std::numeric_limits<double>::infinity();
};

constexpr double kLogEps = -36.043653389117154;  // log(DBL_EPSILON)

ContourParam optimal_bounded(double t, double phi_j, double phi_j1, double pj, double qj,
                             double log_epsilon) {
    const double fac = 1.01;
    const double f_max = std::exp(log_epsilon - kLogEps);
    const double sq_j = std::sqrt(phi_j);
    const double threshold = 2.0 * std::sqrt((log_epsilon - kLogEps) / t);
    const double sq_j1 = std::min(std::sqrt(phi_j1), threshold - sq_j);
    double sqb_j = 0.0, sqb_j1 = 0.0, f_bar = 1.0;
    bool adm = false;
    if (pj < 1e-14 && qj < 1e-14) {
        sqb_j = sq_j;
        sqb_j1 = sq_j1;
        adm = true;
    } else if (pj < 1e-14) {
        sqb_j = sq_j;
        const double f_min = sq_j > 0.0 ? fac * std::pow(sq_j / (sq_j1 - sq_j), qj) : fac;
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fq = std::pow(f_bar, -1.0 / qj);
            sqb_j1 = (2.0 * sq_j1 - fq * sq_j) / (2.0 + fq);
            adm = true;
        }
    } else if (qj < 1e-14) {
        sqb_j1 = sq_j1;
        const double f_min = fac * std::pow(sq_j1 / (sq_j1 - sq_j), pj);
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / pj);
            sqb_j = (2.0 * sq_j + fp * sq_j1) / (2.0 - fp);
            adm = true;
        }
    } else {
        double f_min = fac * (sq_j + sq_j1) / std::pow(sq_j1 - sq_j, std::max(pj, qj));
        if (f_min < f_max) {
            f_min = std::max(f_min, 1.5);
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / pj);
            const double fq = std::pow(f_bar, -1.0 / qj);
            const double w = -phi_j1 * t / log_epsilon;
            const double den = 2.0 + w - (1.0 + w) * fp + fq;
            sqb_j = ((2.0 + w + fq) * sq_j + fp * sq_j1) / den;
            sqb_j1 = (-(1.0 + w) * fq * sq_j + (2.0 + w - (1.0 + w) * fp) * sq_j1) / den;
            adm = true;
        }
    }
    ContourParam out;
    if (!adm) return out;
    const double le = log_epsilon - std::log(f_bar);
    const double w = -sqb_j1 * sqb_j1 * t / le;
    out.mu = std::pow(((1.0 + w) * sqb_j + sqb_j1) / (2.0 + w), 2);
    out.h = -2.0 * kPi / le * (sqb_j1 - sqb_j) / ((1.0 + w) * sqb_j + sqb_j1);
    out.N = std::ceil(std::sqrt(1.0 - le / t / out.mu) / out.h);
    return out;
}

ContourParam optimal_unbounded(double t, double phi_j, double pj, double log_epsilon) {
    const double sq_phi_j = std::sqrt(phi_j);
    double phib = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
    double sqb = std::sqrt(phib);
    const double f_min = 1.0, f_max = 10.0, f_tar = 5.0;
    double N = 0.0, A = 0.0, sq_mu = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double phi_t = phib * t;
        const double lept = log_epsilon / phi_t;
        N = std::ceil(phi_t / kPi * (1.0 - 1.5 * lept + std::sqrt(1.0 - 2.0 * lept)));
        A = kPi * N / phi_t;
        sq_mu = sqb * std::fabs(4.0 - A) / std::fabs(7.0 - std::sqrt(1.0 + 12.0 * A));
        const double fbar = std::pow((sqb - sq_phi_j) / sq_mu, -pj);
        if (pj < 1e-14 || (f_min < fbar && fbar < f_max)) break;
        sqb = std::pow(f_tar, -1.0 / pj) * sq_mu + sq_phi_j;
        phib = sqb * sqb;
    }
    ContourParam out;
    out.mu = sq_mu * sq_mu;
    out.h = (-3.0 * A - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * A)) / (4.0 - A) / N;
    out.N = N;
    const double threshold = (log_epsilon - kLogEps) / t;
    if (out.mu > threshold) {
        const double Q = std::fabs(pj) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / pj) * std::sqrt(out.mu);
        phib = std::pow(Q + sq_phi_j, 2);
        if (phib < threshold) {
            const double w = std::sqrt(kLogEps / (kLogEps - log_epsilon));
            const double u = std::sqrt(-phib * t / kLogEps);
            out.mu = threshold;
            out.N = std::ceil(w * log_epsilon / 2.0 / kPi / (u * w - 1.0));
            out.h = std::sqrt(kLogEps / (kLogEps - log_epsilon)) / out.N;
        } else {
            out.N = std::numeric_limits<double>::infinity();
            out.h = 0.0;
        }
    }
    return out;
}

}  // namespace

double ml_contour(double alpha, double beta, double z) {
    using cplx = std::complex<double>;
    const double t = 1.0;
    double log_epsilon = std::log(1e-15);
    const double theta = z < 0.0 ? kPi : 0.0;
    const double absz = std::fabs(z);
    const int kmin = int(std::ceil(-alpha / 2.0 - theta / (2.0 * kPi)));
    const int kmax = int(std::floor(alpha / 2.0 - theta / (2.0 * kPi)));

    struct Pole {
        cplx s;
        double phi;
    };
    std::vector<Pole> poles;
    if (absz > 0.0) {
        for (int k = kmin; k <= kmax; ++k) {
            const cplx s = std::pow(absz, 1.0 / alpha) * std::exp(cplx(0.0, (theta + 2.0 * k * kPi) / alpha));
            const double phi = 0.5 * (s.real() + std::abs(s));
            if (phi > 1e-15) poles.push_back({s, phi});
        }
    }
    std::sort(poles.begin(), poles.end(), [](const Pole& l, const Pole& r) { return l.phi < r.phi; });

    // region boundaries: 0, pole phis, +inf
    const std::size_t J = poles.size();
    std::vector<double> phi(J + 2);
    phi[0] = 0.0;
    for (std::size_t j = 0; j < J; ++j) phi[j + 1] = poles[j].phi;
    phi[J + 1] = std::numeric_limits<double>::infinity();
    std::vector<double> p(J + 1, 1.0), q(J + 1, 1.0);
    p[0] = std::max(0.0, -2.0 * (alpha - beta + 1.0));
    q[J] = std::numeric_limits<double>::infinity();

    std::vector<ContourParam> params(J + 1);
    std::size_t best = 0;
    for (int guard = 0; guard < 20; ++guard) {
        for (std::size_t j = 0; j <= J; ++j) {
            params[j] = ContourParam{};
            const bool admissible = phi[j] < (log_epsilon - kLogEps) / t && phi[j] < phi[j + 1];
            if (!admissible) continue;
            params[j] = j < J ? optimal_bounded(t, phi[j], phi[j + 1], p[j], q[j], log_epsilon)
                              : optimal_unbounded(t, phi[j], p[j], log_epsilon);
        }
        best = 0;
        for (std::size_t j = 1; j <= J; ++j)
            if (params[j].N < params[best].N) best = j;
        if (params[best].N <= 200.0) break;
        log_epsilon += std::log(10.0);
    }
    const ContourParam& cp = params[best];
    if (!std::isfinite(cp.N)) throw ConvergenceError("mittag_leffler: contour parameters not found");

    const long N = long(cp.N);
    cplx integral(0.0, 0.0);
    for (long k = -N; k <= N; ++k) {
        const double u = cp.h * double(k);
        const cplx zk = cp.mu * std::pow(cplx(1.0, u), 2);
        const cplx zd(-2.0 * cp.mu * u, 2.0 * cp.mu);
        const cplx F = std::pow(zk, alpha - beta) / (std::pow(zk, alpha) - z) * zd;
        integral += std::exp(zk * t) * F;
    }
    integral *= cp.h / (2.0 * kPi * cplx(0.0, 1.0));
    cplx residues(0.0, 0.0);
    for (std::size_t j = best; j < J; ++j) {
        const cplx s = poles[j].s;
        residues += (1.0 / alpha) * std::pow(s, 1.0 - beta) * std::exp(t * s);
    }
    return (integral + residues).real();
}

}  // namespace detail

double mittag_leffler(double alpha, double beta, double z, const MlEvalConfig& cfg) {
    if (!(alpha > 0.0)) throw std::invalid_argument("mittag_leffler: alpha must be positive");
    if (z == 0.0) return rgamma(beta);
    double v = 0.0;
    if (std::fabs(z) <= cfg.large_z_threshold && detail::ml_series(alpha, beta, 0, z, cfg, v)) return v;
    v = detail::ml_contour(alpha, beta, z);
    if (!std::isfinite(v)) throw ConvergenceError("mittag_leffler: non-finite result");
    return v;
}

namespace {

double ml_deriv_recurrence(double alpha, double beta, int m, double z, const MlEvalConfig& cfg) {
    if (m == 0) return mittag_leffler(alpha, beta, z, cfg);
    // alpha z E^(m)_b = E^(m-1)_{b-1} - (b - 1 + alpha (m-1)) E^(m-1)_b
    const double lo = ml_deriv_recurrence(alpha, beta - 1.0, m - 1, z, cfg);
    const double hi = ml_deriv_recurrence(alpha, beta, m - 1, z, cfg);
    return (lo - (beta - 1.0 + alpha * (m - 1)) * hi) / (alpha * z);
}

}  // namespace

double mittag_leffler_deriv(double alpha, double beta, int m, double z, const MlEvalConfig& cfg) {
    if (!(alpha > 0.0)) throw std::invalid_argument("mittag_leffler: alpha must be positive");
    if (m < 0) throw std::invalid_argument("mittag_leffler_deriv: negative order");
    if (m == 0) return mittag_leffler(alpha, beta, z, cfg);
    double v = 0.0;
    if (std::fabs(z) <= cfg.large_z_threshold && detail::ml_series(alpha, beta, m, z, cfg, v)) return v;
    if (std::fabs(z) < 0.5) {
        // well inside the disc the series is the only sane route; accept it unconditioned
        MlEvalConfig loose = cfg;
        loose.max_terms = std::max(cfg.max_terms, 4000);
        if (detail::ml_series(alpha, beta, m, z, loose, v) || std::isfinite(v)) return v;
    }
    return ml_deriv_recurrence(alpha, beta, m, z, cfg);
}

}  // namespace wfrac
