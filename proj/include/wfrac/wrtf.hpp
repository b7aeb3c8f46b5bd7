#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "wfrac/funcspec.hpp"
#include "wfrac/weighted.hpp"

namespace wfrac {

enum class ConjOrder { WeightOutside, WeightInside, Direct };

struct WPhiOperatorSpec {
    OperatorSpec base;
    Expr w = Expr(1.0);
    Expr phi = Expr::variable();
    ConjOrder order = ConjOrder::Direct;
};

// closed-form inverse of phi built by peeling invertible layers; checked by round trip on the interval
std::optional<Expr> symbolic_inverse(const Expr& phi, const DomainInterval& iv);

// phi with its derivative and an inverse (symbolic when available, else safeguarded Newton)
class PhiMap {
public:
    PhiMap(const Expr& phi, const DomainInterval& iv);

    double operator()(double x) const { return phi_(x); }
    double prime(double x) const { return dphi_(x); }
    double inverse(double u) const;
    bool has_symbolic_inverse() const { return inv_expr_.has_value(); }
    const Expr& phi() const { return phi_; }
    const Expr& dphi() const { return dphi_; }
    const std::optional<Expr>& inverse_expr() const { return inv_expr_; }

private:
    Expr phi_, dphi_;
    std::optional<Expr> inv_expr_;
    std::shared_ptr<MonotoneInverse> numeric_;
};

// (1/(w phi')) (w f)'; the form (1/phi')(f' + (w'/w) f) is cross-checked where both evaluate
Expr d_phi_w(const Expr& f, const Expr& w, const Expr& phi);
Expr d_phi_w(const Expr& f, const Expr& w, const Expr& phi, int n);

// w and phi checks on the grid interval; throws std::invalid_argument
void check_weight_and_phi(const Expr& w, const Expr& phi, const Grid& grid);

SampledFunction wphi_apply(const Expr& f, const Expr& w, const Expr& phi, OperatorKind kind, double alpha, double a,
                           const Grid& grid, ConjOrder order, const EvalOptions& opt = {});

SampledFunction wphi_differintegral(const Expr& f, const WPhiOperatorSpec& spec, const Grid& grid,
                                    const EvalOptions& opt = {});

PathComparison wphi_compare(const Expr& f, const Expr& w, const Expr& phi, OperatorKind kind, double alpha,
                            double a, const Grid& grid, ConjOrder first, ConjOrder second,
                            const EvalOptions& opt = {});

// negative alpha is the integral of order -alpha, zero samples f
SampledFunction wphi_signed(const Expr& f, const Expr& w, const Expr& phi, double a, double alpha, const Grid& grid,
                            DerivativeType type, ConjOrder order = ConjOrder::Direct, const EvalOptions& opt = {});

// (1/w) I^alpha_phi (w h) on sampled h, product trapezoid in u = phi(x)
SampledFunction wphi_integral_samples(const SampledFunction& h, const Expr& w, const Expr& phi, double alpha);

// (phi(x)-phi(a))^beta/w and Gamma(beta+1)/Gamma(beta-alpha+1) (phi(x)-phi(a))^{beta-alpha}/w
std::pair<Expr, Expr> closed_form_power(double beta, double alpha, double a, const Expr& w, const Expr& phi);

// E_alpha(omega (phi(x)-phi(a))^alpha)/w with eigenvalue omega
std::pair<Expr, double> closed_form_ml_eigen(double alpha, double omega, double a, const Expr& w, const Expr& phi);

// same identities as the weighted version with (x-a) replaced by phi(x)-phi(a)
SampledFunction composition_defect(const Expr& f, const Expr& w, const Expr& phi, double a, double alpha,
                                   DefectVariant variant, const Grid& grid, const EvalOptions& opt = {});

// named calculi

enum class PresetFamily { Tempered, Kober, Hadamard, ErdelyiKober };

struct PresetParams {
    PresetFamily family = PresetFamily::Tempered;
    double beta = 0.0;   // tempered, Hadamard
    double eta = 0.0;    // Kober, Erdelyi-Kober
    double sigma = 1.0;  // Erdelyi-Kober
};

std::string to_string(PresetFamily f);
PresetFamily parse_preset_family(const std::string& name);

// weight, substitution and power-of-x prefactor that express a preset through wphi operators
struct PresetForm {
    Expr w;
    Expr phi;
    double prefactor_power = 0.0;  // result = x^p * wphi(...)
};

PresetForm preset_form(const PresetParams& p, OperatorKind kind, double alpha);

SampledFunction preset_operator(const Expr& f, const PresetParams& p, double alpha, double a, const Grid& grid,
                                OperatorKind kind, ConjOrder order = ConjOrder::Direct, const EvalOptions& opt = {});

// Erdelyi-Kober integral of order alpha <= 0 against the RL-type derivative of order -alpha with eta + alpha
PathComparison ek_analytic_continuation_check(const PresetParams& p, double alpha, const Expr& f, double a,
                                              const Grid& grid, const EvalOptions& opt = {});

}  // namespace wfrac
