#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "wfrac/expr.hpp"
#include "wfrac/grid.hpp"
#include "wfrac/kernels.hpp"
#include "wfrac/quadrature.hpp"

namespace wfrac {

enum class OperatorKind { RLIntegral, RLDerivative, CaputoDerivative };
enum class DerivativeType { RL, Caputo };
enum class Scheme { Gauss, Trapezoid };

// floor(alpha) + 1
int derivative_order(double alpha);
bool is_integer_order(double alpha);

struct OperatorSpec {
    OperatorKind kind = OperatorKind::RLIntegral;
    double alpha = 0.5;
    double a = 0.0;
    int n = 1;

    static OperatorSpec make(OperatorKind kind, double alpha, double a);
};

std::string to_string(OperatorKind k);

struct EvalOptions {
    Scheme scheme = Scheme::Gauss;
    SingularQuadOptions quad;
};

class DivergentLimitError : public std::runtime_error {
public:
    DivergentLimitError(const std::string& what, int k) : std::runtime_error(what), k_(k) {}
    int k() const { return k_; }

private:
    int k_;
};

struct LimitValue {
    double value = 0.0;
    bool symbolic = true;  // false when the eps-offset fallback was used
};

// right limit at a: symbolic evaluation, else eps = 1e-7 offset with a Richardson step;
// |value| > 1e6 or unstable estimates raise DivergentLimitError carrying k
LimitValue right_limit(const Expr& e, double a, int k = 0);

SampledFunction sample(const Expr& f, const Grid& grid);

SampledFunction rl_integral(const Expr& f, double a, double alpha, const Grid& grid,
                            const EvalOptions& opt = {});
SampledFunction caputo_derivative(const Expr& f, double a, double alpha, const Grid& grid,
                                  const EvalOptions& opt = {});
SampledFunction rl_derivative(const Expr& f, double a, double alpha, const Grid& grid,
                              const EvalOptions& opt = {});
// alpha < 0 integral of order -alpha, alpha = 0 sampling, alpha > 0 derivative
SampledFunction differintegral(const Expr& f, double a, double alpha, const Grid& grid,
                               DerivativeType type, const EvalOptions& opt = {});
SampledFunction apply_operator(const Expr& f, const OperatorSpec& spec, const Grid& grid,
                               const EvalOptions& opt = {});

// fractional integral of already sampled values (product trapezoid), a = first node
SampledFunction rl_integral_samples(const SampledFunction& h, double alpha);

namespace detail {

// 1/Gamma(alpha) int_a^{x_j} (x_j - t)^{alpha-1} h(t) dt on the nodes, by the selected scheme
std::vector<double> integrate_nodes(double alpha, double a, std::span<const double> nodes,
                                    const std::function<double(double)>& h, const EvalOptions& opt,
                                    bool uniform);

void check_grid_start(const Grid& grid, double a);

}  // namespace detail

}  // namespace wfrac
