#include <doctest.h>

#include <cmath>

#include "wfrac/fdesolver.hpp"
#include "wfrac/special.hpp"

using namespace wfrac;

namespace {

FdeProblem scalar(double alpha, double lambda, const char* w, const char* phi, double a, double eta = 1.0) {
    FdeProblem p;
    p.A = {{lambda}};
    p.g = {Expr(0.0)};
    p.eta = {eta};
    p.alpha = alpha;
    p.w = parse_expr(w);
    p.phi = parse_expr(phi);
    p.a = a;
    p.T = 1.0;
    return p;
}

double scalar_error(const FdeProblem& p, int steps) {
    const auto sol = solve_linear(p, steps);
    const Expr exact = closed_form_homogeneous(p.A[0][0], p.eta[0], p.alpha, p.w, p.phi, p.a);
    return max_trajectory_error(sol, {exact});
}

}  // namespace

TEST_CASE("closed-form homogeneous solution") {
    const Expr x = Expr::variable();
    // lambda = 0, w = 1: constant
    const Expr c = closed_form_homogeneous(0.0, 2.5, 0.6, Expr(1.0), x, 0.0);
    for (double v : {0.0, 0.4, 1.0}) CHECK(c(v) == doctest::Approx(2.5).epsilon(1e-15));
    // alpha = 1: exponential
    const Expr e = closed_form_homogeneous(-0.7, 1.5, 1.0, Expr(1.0), x, 0.2);
    for (double v : {0.2, 0.5, 1.3}) CHECK(e(v) == doctest::Approx(1.5 * std::exp(-0.7 * (v - 0.2))).epsilon(1e-13));
    // it satisfies the weighted Caputo equation
    const Expr w = parse_expr("exp(-x)"), phi = parse_expr("log(x)");
    const Expr y = closed_form_homogeneous(-1.0, 1.0, 0.6, w, phi, 1.0);
    const Grid g = make_uniform_grid(1.0, 2.0, 512);
    const auto d = wphi_apply(y, w, phi, OperatorKind::CaputoDerivative, 0.6, 1.0, g, ConjOrder::Direct);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!std::isfinite(d.values[j])) continue;
        const double lam_y = -y(g.nodes[j]);
        worst = std::max(worst, std::fabs(d.values[j] - lam_y) / std::fabs(lam_y));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("scalar problems against closed forms") {
    // near-classical limit
    CHECK(scalar_error(scalar(0.999, -1.0, "1", "x", 0.0), 512) <= 5e-3);
    const auto p1 = scalar(0.6, -1.0, "exp(-x)", "x", 0.0);
    const auto p2 = scalar(0.6, -1.0, "exp(-x)", "log(x)", 1.0);
    for (const auto& p : {p1, p2}) {
        const double e256 = scalar_error(p, 256), e512 = scalar_error(p, 512);
        CHECK(e512 <= 1e-3);
        CHECK(e256 / e512 >= 1.8);
    }
}

TEST_CASE("constant forcing") {
    FdeProblem p;
    p.A = {{0.0, 0.0}, {0.0, 0.0}};
    p.g = {Expr(1.0), Expr(-2.0)};
    p.eta = {0.5, 1.0};
    p.alpha = 0.6;
    const auto sol = solve_linear(p, 512);
    const double c = 1.0 / wfrac::gamma(1.6);
    const std::vector<Expr> exact = {parse_expr("0.5") + Expr(c) * pow(Expr::variable(), Expr(0.6)),
                                     parse_expr("1") - Expr(2.0 * c) * pow(Expr::variable(), Expr(0.6))};
    CHECK(max_trajectory_error(sol, exact) <= 1e-3);
}

TEST_CASE("solution structure") {
    FdeProblem p;
    p.A = {{-1.0, 0.5}, {0.2, -0.8}};
    p.g = {parse_expr("sin(x)"), parse_expr("1")};
    p.eta = {0.1, 0.3};
    p.alpha = 0.7;
    p.w = parse_expr("1 + x");
    p.phi = parse_expr("x^2 + x");
    p.a = 0.0;
    p.T = 1.5;
    const auto sol = solve_linear(p, 64);
    CHECK(sol.ys[0] == p.eta);
    CHECK(sol.xs.nodes.front() == 0.0);
    CHECK(sol.xs.nodes.back() == 1.5);
    CHECK(sol.steps == 64);
    // u nodes are uniform and match phi(x)
    for (std::size_t k = 0; k < sol.xs.size(); ++k)
        CHECK(sol.conjugate_us.nodes[k] == doctest::Approx(p.phi(sol.xs.nodes[k])).epsilon(1e-12));

    // doubling the weight changes nothing
    FdeProblem q = p;
    q.w = Expr(2.0) * p.w;
    const auto s2 = solve_linear(q, 64);
    for (std::size_t k = 0; k < sol.ys.size(); ++k)
        for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(s2.ys[k][i] - sol.ys[k][i]) <= 1e-13);
}

TEST_CASE("conjugated classical problem gives the same trajectory") {
    FdeProblem p;
    p.A = {{-1.0, 0.5}, {0.2, -0.8}};
    p.g = {parse_expr("cos(x)"), parse_expr("x")};
    p.eta = {1.0, -0.5};
    p.alpha = 0.6;
    p.w = parse_expr("exp(-x)");
    p.phi = parse_expr("log(x)");
    p.a = 1.0;
    const auto direct = solve_linear(p, 128);
    const auto q = conjugate_problem(p);
    CHECK(q.a == 0.0);
    const auto classical = solve_linear(q, 128);
    for (std::size_t k = 0; k < direct.ys.size(); ++k) {
        const double w = p.w(direct.xs.nodes[k]);
        for (std::size_t i = 0; i < 2; ++i) {
            const double back = k == 0 ? p.eta[i] : classical.ys[k][i] / w;
            CHECK(std::fabs(direct.ys[k][i] - back) <= 1e-12 * (1.0 + std::fabs(back)));
        }
    }
}

TEST_CASE("exponential boundedness fit") {
    const auto dec = solve_linear(scalar(0.6, -1.0, "exp(-x)", "x", 0.0), 256);
    const auto r1 = check_exponential_bound(dec, parse_expr("exp(-x)"), Expr::variable(), 0.0);
    CHECK(r1.bounded);
    CHECK(r1.c_fit <= 0.1);

    auto zp = scalar(0.6, -1.0, "1", "x", 0.0, 0.0);
    const auto zero = solve_linear(zp, 64);
    const auto r2 = check_exponential_bound(zero, Expr(1.0), Expr::variable(), 0.0);
    CHECK(r2.bounded);
    CHECK(r2.M_fit == 0.0);

    const auto grow = solve_linear(scalar(0.6, 1.0, "1", "x", 0.0), 256);
    const auto r3 = check_exponential_bound(grow, Expr(1.0), Expr::variable(), 0.0);
    CHECK(r3.bounded);
    CHECK(r3.c_fit > 0.0);

    FdeSolution bad = zero;
    bad.ys[3][0] = std::nan("");
    CHECK_FALSE(check_exponential_bound(bad, Expr(1.0), Expr::variable(), 0.0).bounded);
}

TEST_CASE("rejected problems") {
    auto p = scalar(0.6, -1.0, "1", "x", 0.0);
    CHECK_THROWS_AS(solve_linear(p, 4), std::invalid_argument);
    auto q = p;
    q.alpha = 1.2;
    CHECK_THROWS_AS(solve_linear(q, 64), std::invalid_argument);
    q = p;
    q.A = {{1.0, 2.0}};
    CHECK_THROWS_AS(solve_linear(q, 64), std::invalid_argument);
    q = p;
    q.g = {};
    CHECK_THROWS_AS(solve_linear(q, 64), std::invalid_argument);
    q = p;
    q.w = parse_expr("x - 0.5");
    CHECK_THROWS_AS(solve_linear(q, 64), std::invalid_argument);
}
