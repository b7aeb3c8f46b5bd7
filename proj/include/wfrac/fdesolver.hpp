#pragma once

#include <string>
#include <vector>

#include "wfrac/wrtf.hpp"

namespace wfrac {

// weighted Caputo system wrt phi: CD^alpha y = A y + g, y(a) = eta, on [a, a + T]
struct FdeProblem {
    std::vector<std::vector<double>> A;
    std::vector<Expr> g;
    std::vector<double> eta;
    double alpha = 0.5;
    Expr w = Expr(1.0);
    Expr phi = Expr::variable();
    double a = 0.0;
    double T = 1.0;
};

struct FdeSolution {
    Grid xs;
    std::vector<std::vector<double>> ys;  // ys[j] is the state at xs[j]
    Grid conjugate_us;                    // u = phi(x) nodes, uniform
    int steps = 0;
    double max_residual = 0.0;  // largest predictor-corrector gap in the conjugate variable
};

struct BoundednessReport {
    double c_fit = 0.0;
    double M_fit = 0.0;
    double max_violation = 0.0;  // max of |w y| e^{-c (phi - phi(a))} / M - 1
    bool bounded = false;
    std::string message;
};

// throws std::invalid_argument on bad shapes, alpha outside (0, 1), T <= 0
void validate_problem(const FdeProblem& p);

// conjugate to z = w y in u = phi(x), fractional Adams PECE on a uniform u-grid, map back
FdeSolution solve_linear(const FdeProblem& p, int n_steps);

// the classical problem in u (w = 1, phi = x, a = phi(a)) whose solution is w y; needs a closed-form phi^{-1}
FdeProblem conjugate_problem(const FdeProblem& p);

// (w(a)/w(x)) eta0 E_alpha(lambda (phi(x) - phi(a))^alpha)
Expr closed_form_homogeneous(double lambda, double eta0, double alpha, const Expr& w, const Expr& phi, double a);

// least-squares slope of log|w y| against phi - phi(a) over the second half, envelope constant over all nodes
BoundednessReport check_exponential_bound(const FdeSolution& sol, const Expr& w, const Expr& phi, double a);

// max over nodes and components of |y - exact|
double max_trajectory_error(const FdeSolution& sol, const std::vector<Expr>& exact);

}  // namespace wfrac
