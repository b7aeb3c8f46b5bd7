#include <doctest.h>

#include <cmath>
#include <random>

#include "wfrac/corpus.hpp"
#include "wfrac/expr.hpp"
#include "wfrac/funcspec.hpp"

using namespace wfrac;

TEST_CASE("parse shapes follow precedence") {
    const Expr e = parse_expr("x^2 + 1");
    REQUIRE(e.kind() == NodeKind::Add);
    CHECK(e.lhs().kind() == NodeKind::Pow);
    CHECK(e.lhs().lhs().kind() == NodeKind::Variable);
    CHECK(e.lhs().rhs().is_constant(2.0));
    CHECK(e.rhs().is_constant(1.0));

    const Expr f = parse_expr("exp(-2*x)");
    REQUIRE(f.kind() == NodeKind::Exp);
    REQUIRE(f.arg().kind() == NodeKind::Neg);
    REQUIRE(f.arg().arg().kind() == NodeKind::Mul);
    CHECK(f.arg().arg().lhs().is_constant(2.0));

    const Expr g = parse_expr("-2^2");
    REQUIRE(g.kind() == NodeKind::Neg);
    CHECK(g.arg().kind() == NodeKind::Pow);
    CHECK(eval_expr(g, 0.0) == -4.0);

    const Expr r = parse_expr("2^3^2");
    CHECK(eval_expr(r, 0.0) == 512.0);
    CHECK(eval_expr(parse_expr("8/4/2"), 0.0) == 1.0);
    CHECK(eval_expr(parse_expr("1 - 2 - 3"), 0.0) == -4.0);
}

TEST_CASE("syntax errors carry offsets") {
    try {
        parse_expr("x^-1");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_expr("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse_expr("x +"), ParseError);
    CHECK_THROWS_AS(parse_expr("(x"), ParseError);
    CHECK_THROWS_AS(parse_expr("x*-2"), ParseError);
    CHECK_THROWS_AS(parse_expr("2 x"), ParseError);
    CHECK_NOTHROW(parse_expr("x^(-1)"));
    CHECK_NOTHROW(parse_expr("1.5e-3*x + .5"));
}

TEST_CASE("evaluation") {
    CHECK(eval_expr(parse_expr("x^2+1"), 2.0) == 5.0);
    CHECK(eval_expr(parse_expr("exp(0)"), 123.0) == 1.0);
    CHECK(eval_expr(parse_expr("log(x)"), 1.0) == 0.0);
    CHECK(eval_expr(parse_expr("pi"), 0.0) == doctest::Approx(3.141592653589793));
    CHECK(eval_expr(parse_expr("e"), 0.0) == doctest::Approx(2.718281828459045));
}

TEST_CASE("domain errors name the node and x") {
    try {
        eval_expr(parse_expr("1 + log(x)"), -1.0);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.node() == "log(x)");
        CHECK(e.x() == -1.0);
    }
    CHECK_THROWS_AS(eval_expr(parse_expr("1/x"), 0.0), DomainError);
    CHECK_THROWS_AS(eval_expr(parse_expr("x^0.5"), -1.0), DomainError);
    CHECK_THROWS_AS(eval_expr(parse_expr("sqrt(x)"), -1.0), DomainError);
    CHECK_NOTHROW(eval_expr(parse_expr("x^3"), -1.0));
}

TEST_CASE("symbolic derivatives print as expected") {
    CHECK(to_string(diff_expr(parse_expr("x^3"))) == "3*x^2");
    CHECK(to_string(diff_expr(parse_expr("exp(-2*x)"))) == "-2*exp(-2*x)");
    CHECK(diff_expr(parse_expr("5")).is_constant(0.0));
}

TEST_CASE("printing then parsing reproduces the tree") {
    for (const auto& c : expression_corpus()) {
        const Expr e = parse_expr(c.text);
        CHECK_MESSAGE(structurally_equal(parse_expr(to_string(e)), e), c.text);
        const Expr d = diff_expr(e);
        CHECK_MESSAGE(structurally_equal(parse_expr(to_string(d)), d), to_string(d));
        const Expr d2 = diff_expr(d);
        CHECK_MESSAGE(structurally_equal(parse_expr(to_string(d2)), d2), to_string(d2));
    }
    // awkward constants and nesting built directly
    const Expr x = Expr::variable();
    const std::vector<Expr> odd = {
        Expr::make_unary(NodeKind::Neg, Expr(2.0)),
        Expr::make_unary(NodeKind::Neg, Expr(-2.0)),
        Expr::make_binary(NodeKind::Pow, x, Expr(-1.0)),
        Expr::make_binary(NodeKind::Pow, Expr::make_binary(NodeKind::Pow, x, Expr(2.0)), Expr(3.0)),
        Expr::make_binary(NodeKind::Sub, x, Expr::make_binary(NodeKind::Sub, x, Expr(1.0))),
        Expr::make_binary(NodeKind::Div, x, Expr::make_binary(NodeKind::Mul, x, Expr(0.1))),
        Expr::make_binary(NodeKind::Mul, Expr(-3.0), x),
        Expr::make_binary(NodeKind::Pow, Expr(-2.0), Expr(2.0)),
        Expr::make_binary(NodeKind::Add, x, Expr(-0.0)),
        Expr::make_unary(NodeKind::Neg, Expr::make_unary(NodeKind::Neg, x)),
    };
    for (const Expr& e : odd) CHECK_MESSAGE(structurally_equal(parse_expr(to_string(e)), e), to_string(e));
}

TEST_CASE("derivatives agree with central differences on the corpus") {
    std::mt19937_64 rng(20261016);
    REQUIRE(expression_corpus().size() == 50);
    for (const auto& c : expression_corpus()) {
        const Expr e = parse_expr(c.text);
        const Expr d = diff_expr(e);
        std::uniform_real_distribution<double> U(c.lo + 0.01, c.hi - 0.01);
        for (int i = 0; i < 10; ++i) {
            const double x = U(rng);
            const double h = 1e-6;
            const double fd = (e(x + h) - e(x - h)) / (2.0 * h);
            const double dv = d(x);
            CHECK_MESSAGE(std::fabs(dv - fd) <= 1e-5 * (1.0 + std::fabs(dv)), c.text << " at " << x);
        }
    }
}

TEST_CASE("invert_monotone") {
    CHECK(invert_monotone(parse_expr("log(x)"), 0.0, DomainInterval(0.5, 2.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(invert_monotone(parse_expr("x"), 0.7, DomainInterval(0.0, 1.0)) == 0.7);
    // bisection oracle for the cube root
    double lo = 0.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (m * m * m < 0.5 ? lo : hi) = m;
    }
    const double x = invert_monotone(parse_expr("x^3"), 0.5, DomainInterval(0.0, 2.0));
    CHECK(std::fabs(x - lo) < 1e-14);
    CHECK(std::fabs(x - 0.7937005259) < 1e-10);
    CHECK_THROWS_AS(invert_monotone(parse_expr("x"), 3.0, DomainInterval(0.0, 1.0)), InversionError);
    CHECK_THROWS_AS(invert_monotone(parse_expr("sin(x)"), 0.5, DomainInterval(0.0, 6.0)), InversionError);
    CHECK_THROWS_AS(invert_monotone(parse_expr("-x"), -0.5, DomainInterval(0.0, 1.0)), InversionError);
    // unbounded right end
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(invert_monotone(parse_expr("log(x)"), 5.0, DomainInterval(1.0, inf)) == doctest::Approx(std::exp(5.0)).epsilon(1e-14));
}

TEST_CASE("inversion round trip on the monotone corpus") {
    std::mt19937_64 rng(7);
    for (const auto& c : monotone_corpus()) {
        const Expr phi = parse_expr(c.text);
        MonotoneInverse inv(phi, DomainInterval(c.lo, c.hi));
        std::uniform_real_distribution<double> U(c.lo, c.hi);
        for (int i = 0; i < 100; ++i) {
            const double x = U(rng);
            const double y = phi(x);
            const double back = inv(y);
            CHECK_MESSAGE(std::fabs(back - x) <= 1e-10, c.text << " x=" << x);
            CHECK(std::fabs(phi(back) - y) <= 1e-12 * (1.0 + std::fabs(y)));
        }
    }
}

TEST_CASE("validate_spec") {
    const DomainInterval unit(0.0, 1.0);
    auto r1 = validate_spec(parse_expr("exp(-x)"), parse_expr("x"), unit);
    CHECK(r1.weight_ok);
    CHECK(r1.phi_monotone_ok);
    CHECK(r1.samples_used == 257);
    CHECK(r1.weight_min_abs == doctest::Approx(std::exp(-1.0)));
    auto r2 = validate_spec(parse_expr("x"), parse_expr("x"), unit);
    CHECK_FALSE(r2.weight_ok);
    CHECK(r2.weight_min_abs == 0.0);
    auto r3 = validate_spec(parse_expr("1"), parse_expr("-x"), unit);
    CHECK(r3.weight_ok);
    CHECK_FALSE(r3.phi_monotone_ok);
    auto r4 = validate_spec(parse_expr("1"), parse_expr("log(x)"), DomainInterval(0.0, 1.0, true, false), 64);
    CHECK(r4.phi_monotone_ok);
    CHECK(r4.samples_used == 63);
    auto r5 = validate_spec(parse_expr("1"), parse_expr("log(x)"), unit, 64);
    CHECK_FALSE(r5.phi_monotone_ok);
    CHECK_FALSE(r5.messages.empty());
    CHECK_THROWS(validate_spec(parse_expr("1"), parse_expr("x"), unit, 8));
}
