#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wfrac/csv.hpp"
#include "wfrac/fdesolver.hpp"
#include "wfrac/transforms.hpp"
#include "wfrac/verify.hpp"

using namespace wfrac;

namespace {

// bad input, reported with the flag it came from; exit 2
struct UsageError : std::runtime_error {
    UsageError(const std::string& flag, const std::string& msg) : std::runtime_error(flag + ": " + msg) {}
};

Expr expr_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_expr(text);
    } catch (const ParseError& e) {
        throw UsageError(flag, e.what());
    }
}

Grid grid_flag(const std::string& text) {
    try {
        return parse_grid_spec(text);
    } catch (const std::exception& e) {
        throw UsageError("--grid", e.what());
    }
}

std::vector<double> list_flag(const std::string& flag, const std::string& text, char sep = ',') {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag, "'" + item + "' is not a number");
        }
    }
    if (out.empty()) throw UsageError(flag, "empty list");
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// map a library validation message to the flag that fed it
std::string flag_for(const std::string& what) {
    if (what.find("weight") != std::string::npos) return "--w";
    if (what.find("phi") != std::string::npos || what.find("monoton") != std::string::npos) return "--phi";
    if (what.find("preset") != std::string::npos) return "--preset";
    if (what.find("lower limit") != std::string::npos) return "--a";
    if (what.find("grid") != std::string::npos) return "--grid";
    if (what.find("alpha") != std::string::npos) return "--alpha";
    return "input";
}

OperatorKind op_flag(const std::string& op) {
    if (op == "rl-int") return OperatorKind::RLIntegral;
    if (op == "rl-der") return OperatorKind::RLDerivative;
    if (op == "caputo-der") return OperatorKind::CaputoDerivative;
    throw UsageError("--op", "expected rl-int, rl-der or caputo-der, got '" + op + "'");
}

void emit(const std::string& out, const std::vector<std::string>& headers, const std::vector<std::vector<double>>& rows) {
    if (out.empty() || out == "-")
        write_csv(std::cout, headers, rows);
    else
        write_csv(out, headers, rows);
}

struct Common {
    std::string f = "x", w = "1", phi = "x";
    double a = 0.0;
    std::string out;
};

struct EvalArgs {
    std::string op = "rl-int";
    double alpha = 0.5;
    std::string grid;
    std::string path = "direct";
    std::string preset;
    double beta = 0.0, eta = 0.0, sigma = 1.0;
};

std::vector<double> eval_values(const Expr& f, const Expr& w, const Expr& phi, double a, const EvalArgs& e,
                                ConjOrder order, const Grid& g) {
    const OperatorKind kind = op_flag(e.op);
    if (e.alpha == 0.0) return sample(f, g).values;
    if (!e.preset.empty()) {
        PresetParams p;
        try {
            p.family = parse_preset_family(e.preset);
        } catch (const std::exception& ex) {
            throw UsageError("--preset", ex.what());
        }
        p.beta = e.beta;
        p.eta = e.eta;
        p.sigma = e.sigma;
        return preset_operator(f, p, e.alpha, a, g, kind, order).values;
    }
    const double signed_alpha = kind == OperatorKind::RLIntegral ? -e.alpha : e.alpha;
    const auto type = kind == OperatorKind::CaputoDerivative ? DerivativeType::Caputo : DerivativeType::RL;
    return wphi_signed(f, w, phi, a, signed_alpha, g, type, order).values;
}

int run_eval(const Common& c, const EvalArgs& e) {
    const Expr f = expr_flag("--f", c.f), w = expr_flag("--w", c.w), phi = expr_flag("--phi", c.phi);
    op_flag(e.op);
    if (!(e.alpha >= 0.0) || !std::isfinite(e.alpha)) throw UsageError("--alpha", "must be a finite order >= 0");
    const Grid g = grid_flag(e.grid);
    if (g.a() != c.a) throw UsageError("--grid", "must start at --a");

    std::vector<std::string> headers = {"x", "value"};
    std::vector<std::vector<double>> cols;
    if (e.path == "direct") {
        cols.push_back(eval_values(f, w, phi, c.a, e, ConjOrder::Direct, g));
    } else if (e.path == "conj-out") {
        cols.push_back(eval_values(f, w, phi, c.a, e, ConjOrder::WeightOutside, g));
    } else if (e.path == "conj-in") {
        cols.push_back(eval_values(f, w, phi, c.a, e, ConjOrder::WeightInside, g));
    } else if (e.path == "both") {
        cols.push_back(eval_values(f, w, phi, c.a, e, ConjOrder::Direct, g));
        cols.push_back(eval_values(f, w, phi, c.a, e, ConjOrder::WeightOutside, g));
        headers = {"x", "value", "conjugated", "abs_diff"};
        std::vector<double> d(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) d[j] = std::fabs(cols[0][j] - cols[1][j]);
        cols.push_back(d);
    } else {
        throw UsageError("--path", "expected direct, conj-out, conj-in or both, got '" + e.path + "'");
    }
    std::vector<std::vector<double>> rows(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        rows[j].push_back(g.nodes[j]);
        for (const auto& col : cols) rows[j].push_back(col[j]);
    }
    emit(c.out, headers, rows);
    return 0;
}

int run_transform(const Common& c, const std::string& s_list) {
    const Expr f = expr_flag("--f", c.f), w = expr_flag("--w", c.w), phi = expr_flag("--phi", c.phi);
    const auto svals = list_flag("--s", s_list);
    std::vector<std::vector<double>> rows;
    for (double s : svals) {
        if (!(s > 0.0)) throw UsageError("--s", "transform variables must be positive");
        const auto t = wphi_laplace(f, w, phi, c.a, s);
        rows.push_back({s, t.value, t.truncation_point, double(t.panels_used)});
    }
    emit(c.out, {"s", "value", "truncation", "panels"}, rows);
    return 0;
}

int run_convolve(const Common& c, const std::string& gtext, const std::string& grid) {
    const Expr f = expr_flag("--f", c.f), g = expr_flag("--g", gtext), w = expr_flag("--w", c.w),
               phi = expr_flag("--phi", c.phi);
    const Grid gr = grid_flag(grid);
    if (gr.a() != c.a) throw UsageError("--grid", "must start at --a");
    const auto r = wphi_convolution(f, g, w, phi, c.a, gr);
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < gr.size(); ++j) rows.push_back({gr.nodes[j], r.values[j]});
    emit(c.out, {"x", "value"}, rows);
    return 0;
}

struct SolveArgs {
    std::string A, g, eta;
    double alpha = 0.5, T = 1.0;
    int steps = 512;
};

int run_solve(const Common& c, const SolveArgs& s) {
    FdeProblem p;
    for (const auto& row : split(s.A, ';')) p.A.push_back(list_flag("--A", row));
    for (const auto& gi : split(s.g, ';')) p.g.push_back(expr_flag("--g", gi));
    p.eta = list_flag("--eta", s.eta);
    p.alpha = s.alpha;
    p.w = expr_flag("--w", c.w);
    p.phi = expr_flag("--phi", c.phi);
    p.a = c.a;
    p.T = s.T;
    try {
        validate_problem(p);
    } catch (const std::invalid_argument& e) {
        std::string what = e.what();
        const std::string flag = what.find("alpha") != std::string::npos   ? "--alpha"
                                 : what.find("horizon") != std::string::npos ? "--T"
                                 : what.find(" g ") != std::string::npos     ? "--g"
                                                                             : "--A";
        throw UsageError(flag, what);
    }
    if (s.steps < 8) throw UsageError("--steps", "need at least 8 steps");
    const auto sol = solve_linear(p, s.steps);
    std::vector<std::string> headers = {"x"};
    for (std::size_t i = 0; i < p.eta.size(); ++i) headers.push_back("y" + std::to_string(i + 1));
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < sol.ys.size(); ++k) {
        std::vector<double> r = {sol.xs.nodes[k]};
        r.insert(r.end(), sol.ys[k].begin(), sol.ys[k].end());
        rows.push_back(std::move(r));
    }
    emit(c.out, headers, rows);
    return 0;
}

int run_verify(const std::string& suite, std::optional<double> tol, std::string out) {
    const auto& names = suite_names();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw UsageError("--suite", "unknown suite '" + suite + "'");
    if (tol && !(*tol > 0.0)) throw UsageError("--tol", "must be positive");
    const auto reports = run_suite(suite, tol);
    nlohmann::json j = nlohmann::json::array();
    bool all = true;
    for (const auto& r : reports) {
        std::size_t passed = 0;
        nlohmann::json cases = nlohmann::json::array();
        for (const auto& c : r.cases) {
            passed += c.pass;
            std::printf("%s  %-6s %s  abs=%.3e rel=%.3e tol=%.1e%s%s\n", r.suite.c_str(), c.pass ? "PASS" : "FAIL",
                        c.id.c_str(), c.max_abs_err, c.max_rel_err, c.tolerance, c.note.empty() ? "" : "  ",
                        c.note.c_str());
            cases.push_back({{"id", c.id},
                             {"max_abs_err", c.max_abs_err},
                             {"max_rel_err", c.max_rel_err},
                             {"tolerance", c.tolerance},
                             {"tolerance_on", c.relative ? "relative" : "absolute"},
                             {"pass", c.pass},
                             {"note", c.note}});
        }
        std::printf("%s: %zu/%zu passed\n", r.suite.c_str(), passed, r.cases.size());
        j.push_back({{"suite", r.suite}, {"pass", r.pass}, {"cases", cases}});
        all = all && r.pass;
    }
    if (out.empty()) out = "verify_report.json";
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open '" + out + "' for writing");
    // non-finite errors become null in JSON
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("write failed for '" + out + "'");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted fractional calculus engine"};
    app.require_subcommand(1, 1);

    Common c;
    EvalArgs e;
    SolveArgs sv;
    std::string s_list = "1", gtext, conv_grid, suite = "all";
    std::optional<double> tol;

    auto common = [&](CLI::App* sub, bool with_f) {
        if (with_f) sub->add_option("--f", c.f, "input expression in x");
        sub->add_option("--w", c.w, "weight expression");
        sub->add_option("--phi", c.phi, "substitution expression, strictly increasing");
        sub->add_option("--a", c.a, "left endpoint");
        sub->add_option("--out", c.out, "output CSV (stdout when omitted)");
    };

    auto* eval = app.add_subcommand("eval", "apply an operator on a grid");
    common(eval, true);
    eval->add_option("--op", e.op, "rl-int, rl-der or caputo-der");
    eval->add_option("--alpha", e.alpha, "order >= 0");
    eval->add_option("--grid", e.grid, "start:end:count[:graded[=r]]")->required();
    eval->add_option("--path", e.path, "direct, conj-out, conj-in or both");
    eval->add_option("--preset", e.preset, "tempered, kober, hadamard or erdelyi-kober");
    eval->add_option("--beta", e.beta);
    eval->add_option("--eta", e.eta);
    eval->add_option("--sigma", e.sigma);

    auto* transform = app.add_subcommand("transform", "weighted Laplace transform");
    common(transform, true);
    transform->add_option("--s", s_list, "comma-separated transform variables");

    auto* convolve = app.add_subcommand("convolve", "weighted convolution on a grid");
    common(convolve, true);
    convolve->add_option("--g", gtext, "second input")->required();
    convolve->add_option("--grid", conv_grid, "start:end:count[:graded[=r]]")->required();

    auto* solve = app.add_subcommand("solve", "linear weighted Caputo system");
    common(solve, false);
    solve->add_option("--A", sv.A, "matrix rows separated by ';', entries by ','")->required();
    solve->add_option("--g", sv.g, "forcing components separated by ';'")->required();
    solve->add_option("--eta", sv.eta, "initial values, comma-separated")->required();
    solve->add_option("--alpha", sv.alpha, "order in (0, 1)");
    solve->add_option("--T", sv.T, "horizon length in x");
    solve->add_option("--steps", sv.steps, "time steps");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", suite, "conjugation, semigroup, eigenfunction, presets, laplace, convolution, fde or all");
    verify->add_option("--tol", tol, "override every case tolerance");
    verify->add_option("--out", c.out, "JSON report (default verify_report.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return 2;
    }

    try {
        if (*eval) return run_eval(c, e);
        if (*transform) return run_transform(c, s_list);
        if (*convolve) return run_convolve(c, gtext, conv_grid);
        if (*solve) return run_solve(c, sv);
        return run_verify(suite, tol, c.out);
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const DomainError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    } catch (const LaplaceConvergenceError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    } catch (const DivergentLimitError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    } catch (const InversionError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& ex) {
        // library-side validation (weight sign, monotonicity, domain of a preset)
        std::cerr << "error: " << flag_for(ex.what()) << ": " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
}
