#include <doctest.h>

#include <cmath>

#include "wfrac/expr.hpp"
#include "wfrac/rlcore.hpp"
#include "wfrac/special.hpp"

using namespace wfrac;

namespace {

double max_rel(const SampledFunction& s, const std::function<double(double)>& exact, std::size_t from = 1) {
    double worst = 0.0;
    for (std::size_t j = from; j < s.values.size(); ++j) {
        const double e = exact(s.grid.nodes[j]);
        worst = std::max(worst, std::fabs(s.values[j] - e) / std::max(std::fabs(e), 1e-300));
    }
    return worst;
}

double max_abs(const SampledFunction& s, const std::function<double(double)>& exact) {
    double worst = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j)
        worst = std::max(worst, std::fabs(s.values[j] - exact(s.grid.nodes[j])));
    return worst;
}

EvalOptions trapezoid() {
    EvalOptions o;
    o.scheme = Scheme::Trapezoid;
    return o;
}

}  // namespace

TEST_CASE("operator spec") {
    const auto s = OperatorSpec::make(OperatorKind::CaputoDerivative, 1.3, 0.0);
    CHECK(s.n == 2);
    CHECK(OperatorSpec::make(OperatorKind::RLDerivative, 2.0, 0.0).n == 3);
    CHECK_THROWS(OperatorSpec::make(OperatorKind::RLIntegral, 0.0, 0.0));
    CHECK(to_string(OperatorKind::RLDerivative) == "rl-der");
}

TEST_CASE("integral examples") {
    const Grid g = make_uniform_grid(0.0, 1.0, 64);
    for (const auto& opt : {EvalOptions{}, trapezoid()}) {
        const auto one = rl_integral(parse_expr("1"), 0.0, 1.0, g, opt);
        CHECK(one.values.back() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(one.values.front() == 0.0);
        const auto lin = rl_integral(parse_expr("x"), 0.0, 0.5, g, opt);
        CHECK(lin.values.back() == doctest::Approx(0.7522527780636751).epsilon(1e-13));
    }
    const double c = wfrac::gamma(2.0) / wfrac::gamma(2.5);
    CHECK(std::fabs(c - 0.7522527780636751) < 1e-15);
}

TEST_CASE("trapezoid self-convergence on x^2") {
    auto err = [](int n) {
        const Grid g = make_uniform_grid(0.0, 1.0, n);
        const auto r = rl_integral(parse_expr("x^2"), 0.0, 0.5, g, trapezoid());
        const double c = wfrac::gamma(3.0) / wfrac::gamma(3.5);
        return max_abs(r, [c](double x) { return c * std::pow(x, 2.5); });
    };
    const double e512 = err(512), e1024 = err(1024);
    CHECK(e512 / e1024 >= 3.5);
    CHECK(std::log2(e512 / e1024) >= 1.4);
}

TEST_CASE("Caputo and RL derivative examples") {
    const Grid g = make_uniform_grid(0.0, 1.0, 128);
    const auto cd = caputo_derivative(parse_expr("x"), 0.0, 0.5, g);
    CHECK(max_rel(cd, [](double x) { return 1.1283791670955126 * std::sqrt(x); }) < 1e-13);
    const auto c1 = caputo_derivative(parse_expr("1"), 0.0, 0.5, g);
    for (double v : c1.values) CHECK(v == 0.0);

    const auto rd = rl_derivative(parse_expr("x^2"), 0.0, 0.5, g);
    CHECK(max_rel(rd, [](double x) { return 1.5045055561273502 * std::pow(x, 1.5); }) < 1e-13);

    const auto r1 = rl_derivative(parse_expr("1"), 0.0, 0.5, g);
    CHECK(r1.singular_at_a);
    CHECK(r1.singular_exponent == -0.5);
    CHECK(std::isinf(r1.values[0]));
    CHECK(max_rel(r1, [](double x) { return std::pow(x, -0.5) / wfrac::gamma(0.5); }) < 1e-13);

    // integer order: plain derivative
    const auto d2 = rl_derivative(parse_expr("x^3"), 0.0, 2.0, g);
    CHECK(max_rel(d2, [](double x) { return 6.0 * x; }) < 1e-15);

    // second-order band: RL D^{1.5} of x^2 = Gamma(3)/Gamma(1.5) x^{0.5}
    const auto d15 = rl_derivative(parse_expr("x^2 + 1"), 0.0, 1.5, g);
    CHECK(max_rel(d15, [](double x) {
              return wfrac::gamma(3.0) / wfrac::gamma(1.5) * std::sqrt(x) + std::pow(x, -1.5) / wfrac::gamma(-0.5);
          }) < 1e-12);
}

TEST_CASE("divergent limits name the derivative order") {
    const Grid g = make_uniform_grid(0.0, 1.0, 16);
    try {
        rl_derivative(parse_expr("x^0.5"), 0.0, 1.5, g);
        FAIL("expected a divergent limit");
    } catch (const DivergentLimitError& e) {
        CHECK(e.k() == 1);
    }
    // a removable singularity falls back to the offset limit
    const auto lim = right_limit(parse_expr("sin(x)/x"), 0.0);
    CHECK_FALSE(lim.symbolic);
    CHECK(lim.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Mittag-Leffler eigenfunction") {
    const Grid g = make_uniform_grid(0.0, 1.0, 2048);
    const Expr u = parse_expr("ml(0.5, 1, x^0.5)");
    const auto cd = caputo_derivative(u, 0.0, 0.5, g);
    const auto s = sample(u, g);
    // u' ~ x^{-1/2} so the value at a itself is only a limit
    CHECK(cd.singular_at_a);
    CHECK(std::isnan(cd.values[0]));
    double worst = 0.0;
    for (std::size_t j = 1; j < g.size(); ++j)
        worst = std::max(worst, std::fabs(cd.values[j] - s.values[j]) / std::fabs(s.values[j]));
    CHECK(worst <= 1e-4);
}

TEST_CASE("semigroup and inversion") {
    const Grid g = make_uniform_grid(0.0, 1.0, 1024);
    const Expr f = parse_expr("x^2");
    for (const auto& opt : {EvalOptions{}, trapezoid()}) {
        const auto i4 = rl_integral(f, 0.0, 0.4, g, opt);
        const auto i34 = rl_integral_samples(i4, 0.3);
        const auto i7 = rl_integral(f, 0.0, 0.7, g, opt);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::fabs(i34.values[j] - i7.values[j]));
        CHECK(worst <= 5e-4);
    }
    const Expr e = parse_expr("exp(x)");
    for (double alpha : {0.3, 0.7}) {
        const auto cd = caputo_derivative(e, 0.0, alpha, g);
        const auto back = rl_integral_samples(cd, alpha);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            worst = std::max(worst, std::fabs(back.values[j] - (std::exp(g.nodes[j]) - 1.0)));
        CHECK(worst <= 5e-4);
    }
}

TEST_CASE("linearity") {
    const Grid g = make_uniform_grid(0.0, 2.0, 200);
    const Expr f1 = parse_expr("sin(x)"), f2 = parse_expr("x^2*exp(-x)");
    const Expr combo = Expr::make_binary(NodeKind::Add, Expr::make_binary(NodeKind::Mul, Expr(2.5), f1),
                                         Expr::make_binary(NodeKind::Mul, Expr(-0.75), f2));
    for (const auto& opt : {EvalOptions{}, trapezoid()}) {
        const auto a = rl_integral(f1, 0.0, 0.6, g, opt);
        const auto b = rl_integral(f2, 0.0, 0.6, g, opt);
        const auto c = rl_integral(combo, 0.0, 0.6, g, opt);
        for (std::size_t j = 1; j < g.size(); ++j) {
            const double lin = 2.5 * a.values[j] - 0.75 * b.values[j];
            CHECK(std::fabs(c.values[j] - lin) <= 1e-12 * std::max(std::fabs(c.values[j]), 1e-3));
        }
    }
}

TEST_CASE("dispatch is exact") {
    const Grid g = make_uniform_grid(0.0, 1.0, 50);
    const Expr f = parse_expr("x");
    const auto s0 = differintegral(f, 0.0, 0.0, g, DerivativeType::RL);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(s0.values[j] == g.nodes[j]);
    CHECK(differintegral(f, 0.0, -0.5, g, DerivativeType::RL).values == rl_integral(f, 0.0, 0.5, g).values);
    CHECK(differintegral(f, 0.0, 0.5, g, DerivativeType::RL).values == rl_derivative(f, 0.0, 0.5, g).values);
    CHECK(differintegral(f, 0.0, 0.5, g, DerivativeType::Caputo).values ==
          caputo_derivative(f, 0.0, 0.5, g).values);
    const auto spec = OperatorSpec::make(OperatorKind::RLIntegral, 0.5, 0.0);
    CHECK(apply_operator(f, spec, g).values == rl_integral(f, 0.0, 0.5, g).values);
}

TEST_CASE("grid must start at a") {
    const Grid g = make_uniform_grid(0.5, 1.0, 10);
    CHECK_THROWS_AS(rl_integral(parse_expr("x"), 0.0, 0.5, g), std::invalid_argument);
    CHECK_THROWS_AS(rl_integral(parse_expr("x"), 0.5, -1.0, g), std::invalid_argument);
}

TEST_CASE("trapezoid scheme reports endpoint singularities") {
    const Grid g = make_uniform_grid(0.0, 1.0, 10);
    CHECK_THROWS_AS(rl_integral(parse_expr("x^(-0.5)"), 0.0, 0.5, g, trapezoid()), DomainError);
    const auto r = rl_integral(parse_expr("x^(-0.5)"), 0.0, 0.5, g);
    CHECK(max_rel(r, [](double x) { return wfrac::gamma(0.5) / wfrac::gamma(1.0) * std::pow(x, 0.0); }) < 1e-12);
}
