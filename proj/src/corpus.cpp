#include "wfrac/corpus.hpp"

namespace wfrac {

const std::vector<CorpusExpr>& expression_corpus() {
    static const std::vector<CorpusExpr> c = {
        {"x^2 + 1", -2, 2},
        {"exp(-2*x)", -1, 2},
        {"sin(x)*cos(x)", -3, 3},
        {"log(1 + x^2)", -2, 2},
        {"sqrt(x)", 0.1, 3},
        {"x^3 - 2*x + 5", -2, 2},
        {"exp(x)/(1 + x^2)", -2, 2},
        {"erf(x)", -2, 2},
        {"x*exp(-x)", 0, 4},
        {"sin(x^2)", -2, 2},
        {"cos(3*x + 1)", -2, 2},
        {"log(x)/x", 0.2, 4},
        {"(1 + x)^0.5", -0.5, 3},
        {"x^(-1.5)", 0.3, 3},
        {"2^x", -2, 2},
        {"x^x", 0.2, 2},
        {"exp(sin(x))", -3, 3},
        {"sqrt(1 + x^2)", -2, 2},
        {"1/(1 + exp(-x))", -3, 3},
        {"-x^2 + 3*x", -2, 2},
        {"sin(x)/x", 0.1, 3},
        {"log(log(x + 3))", 0, 3},
        {"erf(2*x - 1)", -1, 2},
        {"x^2*log(x)", 0.1, 2},
        {"cos(x)^3", -2, 2},
        {"exp(-x^2/2)", -2, 2},
        {"(x + 1)/(x - 5)", -1, 3},
        {"pi*x^2", -2, 2},
        {"e^x", -2, 2},
        {"sqrt(x)*exp(-x)", 0.1, 3},
        {"x^0.3", 0.1, 2},
        {"(1 + x)^(-2)", 0, 3},
        {"sin(exp(x))", -1, 1},
        {"log(2 + cos(x))", -3, 3},
        {"exp(-x)*sin(2*x)", 0, 3},
        {"x^4 - x^3 + x^2 - x + 1", -1.5, 1.5},
        {"1/sqrt(1 + x)", 0, 3},
        {"x*erf(x)", -2, 2},
        {"sin(x)^2 + cos(x)^2", -3, 3},
        {"exp(x^2)/10", -1.5, 1.5},
        {"log(x^2 + 1)*x", -2, 2},
        {"(x^2 - 1)/(x^2 + 1)", -2, 2},
        {"-(x - 1)^2", -1, 3},
        {"3/x^2", 0.5, 3},
        {"sqrt(sqrt(x))", 0.2, 3},
        {"exp(-1.5*x)*x^2", 0, 3},
        {"sin(pi*x)", -1, 1},
        {"2*x - 3", -2, 2},
        {"ml(0.5, 1, x)", -1, 1},
        {"ml(0.8, 1.2, -x^0.8)", 0.1, 1},
    };
    return c;
}

const std::vector<CorpusExpr>& monotone_corpus() {
    static const std::vector<CorpusExpr> c = {
        {"x", -2, 2},
        {"log(x)", 0.5, 4},
        {"x^2", 0.1, 2},
        {"x^3", -2, 2},
        {"exp(x)", -2, 2},
        {"sqrt(x)", 0.01, 4},
        {"x + sin(x)/2", -3, 3},
        {"x^0.5 + x", 0.01, 3},
        {"erf(x)", -1.5, 1.5},
        {"log(1 + x)", 0, 5},
    };
    return c;
}

const std::vector<std::string>& property_inputs() {
    static const std::vector<std::string> c = {"sin(x)", "x^2", "exp(x)"};
    return c;
}

const std::vector<std::string>& property_weights() {
    static const std::vector<std::string> c = {"exp(-x)", "1 + x"};
    return c;
}

const std::vector<PhiCase>& property_phis() {
    static const std::vector<PhiCase> c = {{"x", 0.0, 1.0}, {"log(x)", 1.0, 2.0}, {"x^2", 0.1, 1.0}};
    return c;
}

const std::vector<LaplaceCase>& laplace_cases() {
    static const std::vector<LaplaceCase> c = {
        {"sin(x)", "exp(-x)", "x", 0.0},
        {"x^2", "1 + x", "x", 0.0},
        {"cos(x) + 2", "1", "x", 0.0},
        {"log(x) + 1", "x^0.5", "log(x)", 1.0},
        {"1 + x", "1", "x^2", 0.1},
    };
    return c;
}

}  // namespace wfrac
