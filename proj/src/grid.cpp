#include "wfrac/grid.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wfrac {

void validate_grid(const Grid& g) {
    if (g.nodes.size() < 3) throw std::invalid_argument("grid: need at least 2 subintervals");
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (!std::isfinite(g.nodes[i])) throw std::invalid_argument("grid: non-finite node");
        if (i > 0 && !(g.nodes[i] > g.nodes[i - 1])) throw std::invalid_argument("grid: nodes must increase strictly");
    }
}

Grid make_uniform_grid(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("grid: count must be >= 2");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("grid: need finite a < b");
    Grid g;
    g.policy = GridPolicy::Uniform;
    g.nodes.resize(std::size_t(n) + 1);
    const double h = (b - a) / n;
    for (int j = 0; j <= n; ++j) g.nodes[j] = a + h * j;
    g.nodes[n] = b;
    return g;
}

Grid make_graded_grid(double a, double b, int n, double r) {
    if (n < 2) throw std::invalid_argument("grid: count must be >= 2");
    if (!(r >= 1.0)) throw std::invalid_argument("grid: grading exponent must be >= 1");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("grid: need finite a < b");
    Grid g;
    g.policy = GridPolicy::Graded;
    g.nodes.resize(std::size_t(n) + 1);
    for (int j = 0; j <= n; ++j) g.nodes[j] = a + (b - a) * std::pow(double(j) / n, r);
    g.nodes[n] = b;
    validate_grid(g);
    return g;
}

Grid make_custom_grid(std::vector<double> nodes) {
    Grid g;
    g.nodes = std::move(nodes);
    g.policy = GridPolicy::Custom;
    validate_grid(g);
    return g;
}

namespace {
double to_double(const std::string& s, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("grid: bad ") + what + " '" + s + "'");
    return v;
}
}  // namespace

Grid parse_grid_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = spec.find(':', start);
        parts.push_back(spec.substr(start, p == std::string::npos ? std::string::npos : p - start));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument("grid: expected start:end:count[:graded]");
    const double a = to_double(parts[0], "start");
    const double b = to_double(parts[1], "end");
    const double cnt = to_double(parts[2], "count");
    if (cnt != std::floor(cnt) || cnt < 2 || cnt > 1e7) throw std::invalid_argument("grid: count must be an integer >= 2");
    if (parts.size() == 4) {
        const std::string& pol = parts[3];
        if (pol == "uniform") return make_uniform_grid(a, b, int(cnt));
        if (pol == "graded") return make_graded_grid(a, b, int(cnt), 2.0);
        if (pol.rfind("graded=", 0) == 0) return make_graded_grid(a, b, int(cnt), to_double(pol.substr(7), "grading"));
        throw std::invalid_argument("grid: unknown policy '" + pol + "'");
    }
    return make_uniform_grid(a, b, int(cnt));
}

}  // namespace wfrac
