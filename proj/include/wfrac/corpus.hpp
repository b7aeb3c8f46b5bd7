#pragma once

#include <string>
#include <vector>

namespace wfrac {

struct CorpusExpr {
    std::string text;
    double lo;  // sampling window for property checks
    double hi;
};

// 50 expressions exercising every node kind
const std::vector<CorpusExpr>& expression_corpus();

// strictly increasing substitutions with a window where they are valid
const std::vector<CorpusExpr>& monotone_corpus();

struct PhiCase {
    std::string phi;
    double a;
    double b;
};

// shared property-test corpus: 3 inputs, 2 weights, 3 substitutions with their intervals
const std::vector<std::string>& property_inputs();
const std::vector<std::string>& property_weights();
const std::vector<PhiCase>& property_phis();

// half-line cases where w f is of (phi-)exponential order below 1
struct LaplaceCase {
    std::string f, w, phi;
    double a;
};
const std::vector<LaplaceCase>& laplace_cases();

}  // namespace wfrac
