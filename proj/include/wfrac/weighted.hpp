#pragma once

#include <utility>
#include <variant>

#include "wfrac/expr.hpp"
#include "wfrac/rlcore.hpp"

namespace wfrac {

enum class EvalPath { Direct, Conjugated, Both };

struct WeightedOperatorSpec {
    OperatorSpec base;
    Expr w = Expr(1.0);
    EvalPath path = EvalPath::Direct;
};

struct PathComparison {
    SampledFunction direct;
    SampledFunction conjugated;
    double max_abs_diff = 0.0;
    double max_rel_diff = 0.0;
};

using WeightedResult = std::variant<SampledFunction, PathComparison>;

// diffs over nodes where both are finite; a node finite on one side only counts as inf
PathComparison compare_paths(SampledFunction direct, SampledFunction conjugated);

// f' + (w'/w) f
Expr weighted_first_derivative(const Expr& f, const Expr& w);
Expr weighted_first_derivative(const Expr& f, const Expr& w, int n);

// w(a+) with provenance
LimitValue weight_at_a(const Expr& w, double a);

// throws std::invalid_argument when w vanishes or is undefined on (a, b]
void check_weight(const Expr& w, const Grid& grid);

SampledFunction weighted_apply(const Expr& f, const Expr& w, OperatorKind kind, double alpha, double a,
                               const Grid& grid, EvalPath path, const EvalOptions& opt = {});

WeightedResult weighted_differintegral(const Expr& f, const WeightedOperatorSpec& spec, const Grid& grid,
                                       const EvalOptions& opt = {});

// negative alpha is the integral of order -alpha, zero samples f
SampledFunction weighted_signed(const Expr& f, const Expr& w, double a, double alpha, const Grid& grid,
                                DerivativeType type, EvalPath path = EvalPath::Direct,
                                const EvalOptions& opt = {});

// (1/w) I^alpha (w h) for sampled h (product trapezoid), a = first node
SampledFunction weighted_integral_samples(const SampledFunction& h, const Expr& w, double alpha);

// input (x-a)^beta/w and expected Gamma(beta+1)/Gamma(beta-alpha+1) (x-a)^{beta-alpha}/w;
// alpha < 0 means an integral of order -alpha
std::pair<Expr, Expr> closed_form_power(double beta, double alpha, double a, const Expr& w);

// E_alpha(omega (x-a)^alpha)/w and its Caputo eigenvalue omega
std::pair<Expr, double> closed_form_ml_eigen(double alpha, double omega, double a, const Expr& w);

enum class DefectVariant { RL, Caputo, RLvsCaputo };

// correction sums of the composition identities
//   Caputo:      I^a CD^a f = f - defect
//   RL:          I^a D^a f = f - defect
//   RLvsCaputo:  D^a f - CD^a f = defect
SampledFunction composition_defect(const Expr& f, const Expr& w, double a, double alpha, DefectVariant variant,
                                   const Grid& grid, const EvalOptions& opt = {});

// lim_{x->a+} of the differintegral of g (negative order = integral); DivergentLimitError(k) if it blows up
double differintegral_limit_at_a(const Expr& g, double a, double order, double scale, int k,
                                 const EvalOptions& opt = {});

}  // namespace wfrac
