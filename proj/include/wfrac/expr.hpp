#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wfrac {

enum class NodeKind : std::uint8_t {
    Constant,
    Variable,
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Erf,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    MittagLeffler,  // m-th derivative of E_{alpha,beta} at the child
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class DomainError : public std::domain_error {
public:
    DomainError(const std::string& node, double x);
    const std::string& node() const { return node_; }
    double x() const { return x_; }

private:
    std::string node_;
    double x_;
};

struct MlParams {
    double alpha = 1.0;
    double beta = 1.0;
    int derivative = 0;
};

class Expr;

namespace detail {
struct ExprNode;
}

class Expr {
public:
    Expr();  // constant 0
    Expr(double c);  // NOLINT: literal constants read naturally

    static Expr constant(double c);
    static Expr variable();
    // raw builders, no simplification; the parser uses these
    static Expr make_unary(NodeKind k, Expr arg);
    static Expr make_binary(NodeKind k, Expr lhs, Expr rhs);
    static Expr make_ml(MlParams p, Expr arg);

    NodeKind kind() const;
    double value() const;  // Constant only
    Expr arg() const;  // unary and ML child
    Expr lhs() const;
    Expr rhs() const;
    const MlParams& ml() const;

    bool is_constant() const { return kind() == NodeKind::Constant; }
    bool is_constant(double c) const { return is_constant() && value() == c; }

    double operator()(double x) const;

    const detail::ExprNode* node() const { return node_.get(); }
    static Expr from_node(const detail::ExprNode* n);

private:
    explicit Expr(std::shared_ptr<const detail::ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::ExprNode> node_;
};

namespace detail {
struct ExprNode : std::enable_shared_from_this<ExprNode> {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;
    MlParams ml;
    std::shared_ptr<const ExprNode> a, b;
};
}  // namespace detail

// simplifying builders: fold literal arithmetic, drop 0/1 identities
Expr operator+(const Expr& l, const Expr& r);
Expr operator-(const Expr& l, const Expr& r);
Expr operator-(const Expr& e);
Expr operator*(const Expr& l, const Expr& r);
Expr operator/(const Expr& l, const Expr& r);
Expr pow(const Expr& l, const Expr& r);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sqrt(const Expr& e);
Expr erf(const Expr& e);
Expr mittag_leffler(MlParams p, const Expr& e);

Expr parse_expr(std::string_view text);
std::string to_string(const Expr& e);
double eval_expr(const Expr& e, double x);
Expr diff_expr(const Expr& e);
Expr diff_expr(const Expr& e, int n);
bool structurally_equal(const Expr& l, const Expr& r);
// true if x does not occur
bool is_constant_expr(const Expr& e);
// replace every occurrence of x by `by`
Expr substitute(const Expr& e, const Expr& by);

}  // namespace wfrac
