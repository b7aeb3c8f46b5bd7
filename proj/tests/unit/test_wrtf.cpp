#include <doctest.h>

#include <cmath>

#include "wfrac/corpus.hpp"
#include "wfrac/quadrature.hpp"
#include "wfrac/special.hpp"
#include "wfrac/wrtf.hpp"

using namespace wfrac;

namespace {

double max_abs_vs(const SampledFunction& s, const std::function<double(double)>& exact) {
    double worst = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        if (!std::isfinite(s.values[j])) continue;
        worst = std::max(worst, std::fabs(s.values[j] - exact(s.grid.nodes[j])));
    }
    return worst;
}

double max_rel_vs(const SampledFunction& s, const std::function<double(double)>& exact) {
    double worst = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        if (!std::isfinite(s.values[j])) continue;
        const double e = exact(s.grid.nodes[j]);
        if (e == 0.0) continue;
        worst = std::max(worst, std::fabs(s.values[j] - e) / std::fabs(e));
    }
    return worst;
}

// lower incomplete gamma by its power series
double lower_gamma(double a, double z) {
    if (z == 0.0) return 0.0;
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= z / (a + k);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return std::pow(z, a) * std::exp(-z) * sum;
}

const Expr X = Expr::variable();

}  // namespace

TEST_CASE("symbolic inverses") {
    const DomainInterval iv(0.5, 3.0);
    for (const char* s : {"x", "log(x)", "x^2", "exp(2*x) + 1", "3*sqrt(x) - 2", "2^x", "-1/x", "(x + 1)^3"}) {
        const Expr phi = parse_expr(s);
        const auto inv = symbolic_inverse(phi, iv);
        REQUIRE_MESSAGE(inv.has_value(), s);
        for (double x : {0.5, 1.1, 2.9}) CHECK((*inv)(phi(x)) == doctest::Approx(x).epsilon(1e-13));
    }
    // not peelable
    CHECK_FALSE(symbolic_inverse(parse_expr("x + sin(x)"), iv).has_value());
    // the peeled inverse of x^3 fails on negative u, so it is rejected
    CHECK_FALSE(symbolic_inverse(parse_expr("x^3"), DomainInterval(-2.0, 2.0)).has_value());
    const PhiMap m(parse_expr("x + sin(x)/2"), iv);
    CHECK_FALSE(m.has_symbolic_inverse());
    CHECK(m.inverse(m(1.7)) == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("d_phi_w") {
    // phi = log(x), w = x^2, f = 1: x * (x^2)' / x^2 = 2
    const Expr d = d_phi_w(Expr(1.0), parse_expr("x^2"), parse_expr("log(x)"));
    for (double x : {0.5, 1.0, 3.0}) CHECK(d(x) == doctest::Approx(2.0).epsilon(1e-14));
    // phi = x, w = 1 is plain differentiation
    const Expr f = parse_expr("sin(x)*exp(x)");
    const Expr d1 = d_phi_w(f, Expr(1.0), X);
    const Expr df = diff_expr(f);
    for (double x : {0.1, 0.7, 2.0}) CHECK(d1(x) == doctest::Approx(df(x)).epsilon(1e-14));
    // phi = x^2, f = x^2: f'/phi' = 1, second application is 0
    const Expr d2 = d_phi_w(parse_expr("x^2"), Expr(1.0), parse_expr("x^2"), 2);
    CHECK(d2(0.8) == doctest::Approx(0.0));
}

TEST_CASE("phi = x reduces to the weighted operators") {
    const Grid g = make_uniform_grid(0.0, 1.0, 128);
    const Expr f = parse_expr("cos(x) + x^2"), w = parse_expr("exp(-x)");
    for (auto [kind, alpha] : {std::pair{OperatorKind::RLIntegral, 0.7}, {OperatorKind::CaputoDerivative, 0.4},
                               {OperatorKind::RLDerivative, 1.3}}) {
        const auto ref = weighted_apply(f, w, kind, alpha, 0.0, g, EvalPath::Direct);
        for (auto order : {ConjOrder::Direct, ConjOrder::WeightOutside, ConjOrder::WeightInside}) {
            const auto s = wphi_apply(f, w, X, kind, alpha, 0.0, g, order);
            double worst = 0.0;
            for (std::size_t j = 1; j < g.size(); ++j)
                worst = std::max(worst, std::fabs(s.values[j] - ref.values[j]) / (1.0 + std::fabs(ref.values[j])));
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("log substitution power rule") {
    const Grid g = make_uniform_grid(1.0, 2.0, 64);
    const auto s = wphi_apply(parse_expr("log(x)"), Expr(1.0), parse_expr("log(x)"), OperatorKind::RLIntegral, 0.5,
                              1.0, g, ConjOrder::Direct);
    CHECK(max_abs_vs(s, [](double x) { return 0.7522527780636751 * std::pow(std::log(x), 1.5); }) <= 1e-13);
}

TEST_CASE("closed-form power pairs under a substitution") {
    const Expr w = parse_expr("1 + x"), phi = parse_expr("x^2");
    const double a = 0.1;
    const Grid g = make_uniform_grid(a, 1.0, 2048);
    for (auto [beta, alpha] : {std::pair{1.0, 0.5}, {2.0, 0.5}, {1.3, 0.4}}) {
        const auto [in, out] = closed_form_power(beta, alpha, a, w, phi);
        for (auto kind : {OperatorKind::RLDerivative, OperatorKind::CaputoDerivative}) {
            for (auto order : {ConjOrder::Direct, ConjOrder::WeightOutside, ConjOrder::WeightInside}) {
                const auto s = wphi_apply(in, w, phi, kind, alpha, a, g, order);
                const Expr ex = out;
                CHECK(max_abs_vs(s, [&](double x) { return ex(x); }) <= 1e-4);
            }
        }
    }
    // Gamma pole gives an identically zero image
    CHECK(closed_form_power(0.0, 1.0, a, w, phi).second.is_constant(0.0));
}

TEST_CASE("eigenfunctions under a substitution") {
    const Expr w = parse_expr("exp(-x)"), phi = parse_expr("log(x)");
    const Grid g = make_uniform_grid(1.0, 2.0, 512);
    for (double alpha : {0.5, 0.8}) {
        for (double omega : {1.0, -1.0}) {
            const auto [y, lam] = closed_form_ml_eigen(alpha, omega, 1.0, w, phi);
            const auto s = wphi_apply(y, w, phi, OperatorKind::CaputoDerivative, alpha, 1.0, g, ConjOrder::Direct);
            CHECK(max_abs_vs(s, [&](double x) { return lam * y(x); }) <= 1e-4);
        }
    }
}

TEST_CASE("three orderings agree on the property corpus") {
    for (const auto& pc : property_phis()) {
        const Grid g = make_uniform_grid(pc.a, pc.b, 96);
        const Expr phi = parse_expr(pc.phi);
        for (const auto& ws : property_weights()) {
            const Expr w = parse_expr(ws);
            for (const auto& fs : property_inputs()) {
                const Expr f = parse_expr(fs);
                for (double alpha : {-0.7, 0.4, 1.3}) {
                    const auto kind = alpha < 0 ? OperatorKind::RLIntegral : OperatorKind::RLDerivative;
                    const double tol = alpha < 0 ? 1e-12 : 5e-5;
                    const double al = std::fabs(alpha);
                    const auto c1 =
                        wphi_compare(f, w, phi, kind, al, pc.a, g, ConjOrder::WeightOutside, ConjOrder::WeightInside);
                    const auto c2 = wphi_compare(f, w, phi, kind, al, pc.a, g, ConjOrder::Direct,
                                                 ConjOrder::WeightOutside);
                    INFO(pc.phi << " " << ws << " " << fs << " " << alpha);
                    CHECK(c1.max_rel_diff <= tol);
                    CHECK(c2.max_rel_diff <= tol);
                }
            }
        }
    }
}

TEST_CASE("outside vs inside ordering for a Caputo derivative") {
    const Grid g = make_uniform_grid(0.1, 1.0, 256);
    const auto c = wphi_compare(parse_expr("sin(x)"), parse_expr("1 + x"), parse_expr("x^2"),
                                OperatorKind::CaputoDerivative, 0.6, 0.1, g, ConjOrder::WeightOutside,
                                ConjOrder::WeightInside);
    CHECK(c.max_rel_diff <= 5e-5);
}

TEST_CASE("numeric inverse path matches the closed-form path") {
    // x + x^3/3 has no peelable inverse
    const Expr phi = parse_expr("x + x^3/3"), w = parse_expr("1 + x"), f = parse_expr("cos(x)");
    const Grid g = make_uniform_grid(0.0, 1.0, 64);
    const auto c =
        wphi_compare(f, w, phi, OperatorKind::RLIntegral, 0.6, 0.0, g, ConjOrder::Direct, ConjOrder::WeightOutside);
    CHECK(c.max_rel_diff <= 1e-12);
    const auto d = wphi_compare(f, w, phi, OperatorKind::CaputoDerivative, 0.6, 0.0, g, ConjOrder::WeightInside,
                                ConjOrder::WeightOutside);
    CHECK(d.max_rel_diff <= 5e-5);
}

TEST_CASE("semigroup under a substitution") {
    // input vanishing at a, as with x^2 on [0, 1] in the classical check
    const Expr w = parse_expr("exp(-x)"), phi = parse_expr("log(x)"), f = parse_expr("(x - 1)^2");
    const Grid g = make_uniform_grid(1.0, 2.0, 1024);
    const auto once = wphi_apply(f, w, phi, OperatorKind::RLIntegral, 0.4, 1.0, g, ConjOrder::Direct);
    const auto twice = wphi_integral_samples(once, w, phi, 0.3);
    const auto full = wphi_apply(f, w, phi, OperatorKind::RLIntegral, 0.7, 1.0, g, ConjOrder::Direct);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::fabs(twice.values[j] - full.values[j]));
    CHECK(worst <= 5e-4);
}

TEST_CASE("composition defects under a substitution") {
    const Expr w = parse_expr("1 + x"), phi = parse_expr("x^2"), f = parse_expr("sin(x) + 1");
    const double a = 0.1;
    const Grid g = make_uniform_grid(a, 1.0, 1024);
    for (double alpha : {0.3, 0.7}) {
        // I^alpha D^alpha_C f = f - defect
        const auto cd = wphi_apply(f, w, phi, OperatorKind::CaputoDerivative, alpha, a, g, ConjOrder::Direct);
        const auto back = wphi_integral_samples(cd, w, phi, alpha);
        const auto def = composition_defect(f, w, phi, a, alpha, DefectVariant::Caputo, g);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            worst = std::max(worst, std::fabs(back.values[j] - (f(g.nodes[j]) - def.values[j])));
        CHECK(worst <= 5e-4);
        // RL minus Caputo is the defect of the other variant
        const auto rl = wphi_apply(f, w, phi, OperatorKind::RLDerivative, alpha, a, g, ConjOrder::Direct);
        const auto rd = composition_defect(f, w, phi, a, alpha, DefectVariant::RLvsCaputo, g);
        worst = 0.0;
        for (std::size_t j = 1; j < g.size(); ++j)
            worst = std::max(worst, std::fabs(rl.values[j] - cd.values[j] - rd.values[j]) /
                                        (1.0 + std::fabs(rd.values[j])));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("tempered preset") {
    const Grid g = make_uniform_grid(0.0, 1.0, 64);
    const Expr f = parse_expr("sin(x) + 2");
    // beta = 0 is the classical calculus
    PresetParams p{PresetFamily::Tempered, 0.0};
    const auto t0 = preset_operator(f, p, 0.6, 0.0, g, OperatorKind::RLIntegral);
    const auto c0 = rl_integral(f, 0.0, 0.6, g);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(t0.values[j] == doctest::Approx(c0.values[j]).epsilon(1e-13));
    // f = 1 against the incomplete gamma closed form of the e^{-beta (x-t)} kernel
    p.beta = 1.7;
    const double alpha = 0.6;
    const auto t1 = preset_operator(Expr(1.0), p, alpha, 0.0, g, OperatorKind::RLIntegral);
    CHECK(max_abs_vs(t1, [&](double x) {
              return std::pow(p.beta, -alpha) * lower_gamma(alpha, p.beta * x) / wfrac::gamma(alpha);
          }) <= 1e-12);
    // general f against a direct quadrature of the tempered kernel
    const SingularIntegrator q(alpha);
    const auto t2 = preset_operator(f, p, alpha, 0.0, g, OperatorKind::RLIntegral);
    CHECK(max_abs_vs(t2, [&](double x) {
              return q.integrate(0.0, x, [&](double t) { return std::exp(-p.beta * (x - t)) * f(t); }) /
                     wfrac::gamma(alpha);
          }) <= 1e-12);
}

TEST_CASE("kober preset") {
    const double a = 0.5, alpha = 0.6;
    const Grid g = make_uniform_grid(a, 2.0, 64);
    // eta = 0, f = (x - a)^p: x^{-alpha} Gamma(p+1)/Gamma(p+alpha+1) (x - a)^{p+alpha}
    const PresetParams p0{PresetFamily::Kober, 0.0, 0.0};
    const auto s0 = preset_operator(parse_expr("(x - 0.5)^1.5"), p0, alpha, a, g, OperatorKind::RLIntegral);
    CHECK(max_abs_vs(s0, [&](double x) {
              return std::pow(x, -alpha) * wfrac::gamma(2.5) / wfrac::gamma(2.5 + alpha) * std::pow(x - a, 1.5 + alpha);
          }) <= 1e-12);
    // defining integral x^{-alpha-eta}/Gamma int (x-t)^{alpha-1} t^eta f(t) dt
    const PresetParams p{PresetFamily::Kober, 0.0, 0.8};
    const Expr f = parse_expr("exp(-x)");
    const SingularIntegrator q(alpha);
    const auto s = preset_operator(f, p, alpha, a, g, OperatorKind::RLIntegral);
    CHECK(max_abs_vs(s, [&](double x) {
              return std::pow(x, -alpha - p.eta) / wfrac::gamma(alpha) *
                     q.integrate(a, x, [&](double t) { return std::pow(t, p.eta) * f(t); });
          }) <= 1e-12);
    CHECK_THROWS_AS(preset_operator(f, p, alpha, a, g, OperatorKind::CaputoDerivative), std::invalid_argument);
    CHECK_THROWS_AS(preset_operator(f, p, alpha, 0.0, make_uniform_grid(0.0, 1.0, 8), OperatorKind::RLIntegral),
                    std::invalid_argument);
}

TEST_CASE("hadamard preset") {
    const Grid g = make_uniform_grid(1.0, 3.0, 128);
    // beta = 0, f = 1: (log x)^alpha / Gamma(alpha + 1)
    const auto s = preset_operator(Expr(1.0), PresetParams{PresetFamily::Hadamard}, 0.5, 1.0, g,
                                   OperatorKind::RLIntegral);
    CHECK(max_abs_vs(s, [](double x) { return std::pow(std::log(x), 0.5) / wfrac::gamma(1.5); }) <= 1e-13);
    // weighted form 1/Gamma int (t/x)^beta (log(x/t))^{alpha-1} f(t)/t dt, via t = x e^{-s}
    const PresetParams p{PresetFamily::Hadamard, 0.7};
    const Expr f = parse_expr("cos(x)");
    const double alpha = 0.6;
    const SingularIntegrator q(alpha);
    const auto h = preset_operator(f, p, alpha, 1.0, g, OperatorKind::RLIntegral);
    CHECK(max_abs_vs(h, [&](double x) {
              const double L = std::log(x);
              return q.integrate(0.0, L, [&](double r) {
                         const double sv = L - r;
                         return std::exp(-p.beta * sv) * f(x * std::exp(-sv));
                     }) /
                     wfrac::gamma(alpha);
          }) <= 1e-12);
    // derivative inverts the integral on a power of log x
    const Expr in = parse_expr("log(x)^1.5 * x^(-0.7)");
    for (auto order : {ConjOrder::Direct, ConjOrder::WeightInside}) {
        const auto d = preset_operator(in, p, alpha, 1.0, g, OperatorKind::CaputoDerivative, order);
        CHECK(max_abs_vs(d, [&](double x) {
                  return wfrac::gamma(2.5) / wfrac::gamma(2.5 - alpha) * std::pow(std::log(x), 1.5 - alpha) *
                         std::pow(x, -0.7);
              }) <= 5e-5);
    }
}

TEST_CASE("erdelyi-kober preset") {
    const double a = 0.5;
    const Grid g = make_uniform_grid(a, 2.0, 256);
    const Expr f = parse_expr("x^2 + 1");
    // sigma = 1 integral is the Kober integral
    const PresetParams ek{PresetFamily::ErdelyiKober, 0.0, 0.4, 1.0};
    const PresetParams kb{PresetFamily::Kober, 0.0, 0.4};
    const auto e1 = preset_operator(f, ek, 0.6, a, g, OperatorKind::RLIntegral);
    const auto k1 = preset_operator(f, kb, 0.6, a, g, OperatorKind::RLIntegral);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(e1.values[j] == doctest::Approx(k1.values[j]).epsilon(1e-14));

    // derivative on a power pair: x^{sigma alpha} times the wphi closed form
    const PresetParams p{PresetFamily::ErdelyiKober, 0.0, 0.3, 2.0};
    const double alpha = 0.6;
    const auto form = preset_form(p, OperatorKind::RLDerivative, alpha);
    const auto [in, out] = closed_form_power(1.2, alpha, a, form.w, form.phi);
    for (auto kind : {OperatorKind::RLDerivative, OperatorKind::CaputoDerivative}) {
        const auto d = preset_operator(in, p, alpha, a, g, kind);
        const Expr ex = out;
        CHECK(max_rel_vs(d, [&](double x) { return std::pow(x, p.sigma * alpha) * ex(x); }) <= 5e-5);
    }

    // continuation of the integral to alpha <= 0
    const auto c = ek_analytic_continuation_check(PresetParams{PresetFamily::ErdelyiKober, 0.0, 0.3, 1.0}, -0.5,
                                                  parse_expr("x"), a, g);
    CHECK(c.max_rel_diff <= 5e-5);
    const auto c2 = ek_analytic_continuation_check(p, -1.3, parse_expr("exp(x)"), a, g);
    CHECK(c2.max_rel_diff <= 5e-5);

    // zero in, zero out
    const auto z = preset_operator(Expr(0.0), p, alpha, a, g, OperatorKind::RLIntegral);
    for (double v : z.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(preset_operator(f, PresetParams{PresetFamily::ErdelyiKober, 0.0, 0.3, -1.0}, alpha, a, g,
                                    OperatorKind::RLIntegral),
                    std::invalid_argument);
}

TEST_CASE("preset names") {
    for (auto fam : {PresetFamily::Tempered, PresetFamily::Kober, PresetFamily::Hadamard, PresetFamily::ErdelyiKober})
        CHECK(parse_preset_family(to_string(fam)) == fam);
    CHECK_THROWS_AS(parse_preset_family("riesz"), std::invalid_argument);
}

TEST_CASE("rejected weights and substitutions") {
    const Grid g = make_uniform_grid(0.0, 1.0, 16);
    CHECK_THROWS_AS(check_weight_and_phi(parse_expr("x - 0.5"), X, g), std::invalid_argument);
    CHECK_THROWS_AS(check_weight_and_phi(Expr(1.0), parse_expr("-x"), g), std::invalid_argument);
    CHECK_NOTHROW(check_weight_and_phi(parse_expr("1 + x"), parse_expr("x^2 + x"), g));
}
