#pragma once

#include <string>
#include <vector>

namespace wfrac {

enum class GridPolicy { Uniform, Graded, Custom };

struct Grid {
    std::vector<double> nodes;
    GridPolicy policy = GridPolicy::Custom;

    double a() const { return nodes.front(); }
    double b() const { return nodes.back(); }
    std::size_t size() const { return nodes.size(); }
    // number of subintervals
    int intervals() const { return int(nodes.size()) - 1; }
};

// n subintervals, n + 1 nodes
Grid make_uniform_grid(double a, double b, int n);
// x_j = a + (b - a) (j/n)^r, clustered at a for r > 1
Grid make_graded_grid(double a, double b, int n, double r);
Grid make_custom_grid(std::vector<double> nodes);
void validate_grid(const Grid& g);

// "start:end:count[:graded[=r]]"
Grid parse_grid_spec(const std::string& spec);

struct SampledFunction {
    Grid grid;
    std::vector<double> values;
    // output blows up like (x - a)^singular_exponent at the first node
    bool singular_at_a = false;
    double singular_exponent = 0.0;
};

}  // namespace wfrac
