#include "wfrac/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "wfrac/special.hpp"

namespace wfrac {

ParseError::ParseError(const std::string& msg, std::size_t offset)
    : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {
std::string domain_message(const std::string& node, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return "domain error in '" + node + "' at x = " + buf;
}
}  // namespace

DomainError::DomainError(const std::string& node, double x)
    : std::domain_error(domain_message(node, x)), node_(node), x_(x) {}

// ---- node construction -------------------------------------------------

namespace {
std::shared_ptr<detail::ExprNode> new_node(NodeKind k) {
    auto n = std::make_shared<detail::ExprNode>();
    n->kind = k;
    return n;
}
}  // namespace

Expr::Expr() {
    static const std::shared_ptr<const detail::ExprNode> zero = new_node(NodeKind::Constant);
    node_ = zero;
}

Expr::Expr(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("Expr: non-finite constant");
    auto n = new_node(NodeKind::Constant);
    n->value = c;
    node_ = std::move(n);
}

Expr Expr::constant(double c) { return Expr(c); }

Expr Expr::variable() {
    static const std::shared_ptr<const detail::ExprNode> var = new_node(NodeKind::Variable);
    return Expr(var);
}

Expr Expr::make_unary(NodeKind k, Expr arg) {
    auto n = new_node(k);
    n->a = std::move(arg.node_);
    return Expr(std::shared_ptr<const detail::ExprNode>(std::move(n)));
}

Expr Expr::make_binary(NodeKind k, Expr lhs, Expr rhs) {
    auto n = new_node(k);
    n->a = std::move(lhs.node_);
    n->b = std::move(rhs.node_);
    return Expr(std::shared_ptr<const detail::ExprNode>(std::move(n)));
}

Expr Expr::make_ml(MlParams p, Expr arg) {
    if (!(p.alpha > 0.0)) throw std::invalid_argument("ml: alpha must be positive");
    if (p.derivative < 0) throw std::invalid_argument("ml: negative derivative order");
    auto n = new_node(NodeKind::MittagLeffler);
    n->ml = p;
    n->a = std::move(arg.node_);
    return Expr(std::shared_ptr<const detail::ExprNode>(std::move(n)));
}

Expr Expr::from_node(const detail::ExprNode* n) { return Expr(n->shared_from_this()); }

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
Expr Expr::arg() const { return Expr(node_->a); }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
const MlParams& Expr::ml() const { return node_->ml; }

double Expr::operator()(double x) const { return eval_expr(*this, x); }

// ---- simplifying builders ----------------------------------------------

namespace {
bool is_neg_const(const Expr& e) { return e.is_constant() && std::signbit(e.value()) && e.value() != 0.0; }

Expr fold_or(double v, NodeKind k, const Expr& a) {
    if (std::isfinite(v)) return Expr(v);
    return Expr::make_unary(k, a);
}
}  // namespace

Expr operator-(const Expr& e) {
    if (e.is_constant()) return Expr(-e.value());
    if (e.kind() == NodeKind::Neg) return e.arg();
    return Expr::make_unary(NodeKind::Neg, e);
}

Expr operator+(const Expr& l, const Expr& r) {
    if (l.is_constant() && r.is_constant()) return Expr(l.value() + r.value());
    if (l.is_constant(0.0)) return r;
    if (r.is_constant(0.0)) return l;
    if (r.kind() == NodeKind::Neg) return l - r.arg();
    if (is_neg_const(r)) return l - Expr(-r.value());
    return Expr::make_binary(NodeKind::Add, l, r);
}

Expr operator-(const Expr& l, const Expr& r) {
    if (l.is_constant() && r.is_constant()) return Expr(l.value() - r.value());
    if (r.is_constant(0.0)) return l;
    if (l.is_constant(0.0)) return -r;
    if (r.kind() == NodeKind::Neg) return l + r.arg();
    if (is_neg_const(r)) return l + Expr(-r.value());
    return Expr::make_binary(NodeKind::Sub, l, r);
}

Expr operator*(const Expr& l, const Expr& r) {
    if (l.is_constant() && r.is_constant()) return Expr(l.value() * r.value());
    if (l.is_constant(0.0) || r.is_constant(0.0)) return Expr(0.0);
    if (l.is_constant(1.0)) return r;
    if (r.is_constant(1.0)) return l;
    if (l.is_constant(-1.0)) return -r;
    if (r.is_constant(-1.0)) return -l;
    if (r.is_constant()) return r * l;
    if (is_neg_const(l)) return -(Expr(-l.value()) * r);
    if (l.kind() == NodeKind::Neg) return -(l.arg() * r);
    if (r.kind() == NodeKind::Neg) return -(l * r.arg());
    if (l.is_constant() && r.kind() == NodeKind::Mul && r.lhs().is_constant())
        return Expr(l.value() * r.lhs().value()) * r.rhs();
    return Expr::make_binary(NodeKind::Mul, l, r);
}

Expr operator/(const Expr& l, const Expr& r) {
    if (l.is_constant() && r.is_constant() && r.value() != 0.0) return Expr(l.value() / r.value());
    if (r.is_constant(1.0)) return l;
    if (l.is_constant(0.0) && !r.is_constant(0.0)) return Expr(0.0);
    if (is_neg_const(l)) return -(Expr(-l.value()) / r);
    if (l.kind() == NodeKind::Neg) return -(l.arg() / r);
    if (r.kind() == NodeKind::Neg) return -(l / r.arg());
    return Expr::make_binary(NodeKind::Div, l, r);
}

Expr pow(const Expr& l, const Expr& r) {
    if (l.is_constant() && r.is_constant()) {
        const double b = l.value(), p = r.value();
        const bool ok = !(b < 0.0 && p != std::floor(p)) && !(b == 0.0 && p < 0.0);
        const double v = std::pow(b, p);
        if (ok && std::isfinite(v)) return Expr(v);
    }
    if (r.is_constant(1.0)) return l;
    if (r.is_constant(0.0)) return Expr(1.0);
    if (l.is_constant(1.0)) return Expr(1.0);
    return Expr::make_binary(NodeKind::Pow, l, r);
}

Expr exp(const Expr& e) {
    if (e.is_constant()) return fold_or(std::exp(e.value()), NodeKind::Exp, e);
    return Expr::make_unary(NodeKind::Exp, e);
}

Expr log(const Expr& e) {
    if (e.is_constant() && e.value() > 0.0) return Expr(std::log(e.value()));
    return Expr::make_unary(NodeKind::Log, e);
}

Expr sin(const Expr& e) {
    if (e.is_constant()) return Expr(std::sin(e.value()));
    return Expr::make_unary(NodeKind::Sin, e);
}

Expr cos(const Expr& e) {
    if (e.is_constant()) return Expr(std::cos(e.value()));
    return Expr::make_unary(NodeKind::Cos, e);
}

Expr sqrt(const Expr& e) {
    if (e.is_constant() && e.value() >= 0.0) return Expr(std::sqrt(e.value()));
    return Expr::make_unary(NodeKind::Sqrt, e);
}

Expr erf(const Expr& e) {
    if (e.is_constant()) return Expr(std::erf(e.value()));
    return Expr::make_unary(NodeKind::Erf, e);
}

Expr mittag_leffler(MlParams p, const Expr& e) { return Expr::make_ml(p, e); }

// ---- parser -------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool starts_number() {
        const char c = peek();
        if (c >= '0' && c <= '9') return true;
        return c == '.' && pos_ + 1 < s_.size() && s_[pos_ + 1] >= '0' && s_[pos_ + 1] <= '9';
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
        };
        digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && s_[p] >= '0' && s_[p] <= '9') {
                pos_ = p;
                digits();
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        if (!std::isfinite(v)) {
            pos_ = start;
            fail("number out of range");
        }
        return v;
    }

    double signed_number() {
        bool neg = false;
        if (peek() == '-') {
            ++pos_;
            neg = true;
        }
        if (!starts_number()) fail("expected a number");
        const double v = number();
        return neg ? -v : v;
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                e = Expr::make_binary(NodeKind::Add, e, term());
            } else if (c == '-') {
                ++pos_;
                e = Expr::make_binary(NodeKind::Sub, e, term());
            } else {
                return e;
            }
        }
    }

    Expr term() {
        if (peek() == '-') {
            ++pos_;
            if (starts_number()) {
                // a bare signed literal becomes a negative constant
                const std::size_t save = pos_;
                const double v = number();
                const char nx = peek();
                if (nx != '*' && nx != '/' && nx != '^') return Expr(-v);
                pos_ = save;
            }
            return Expr::make_unary(NodeKind::Neg, term());
        }
        return product();
    }

    Expr product() {
        Expr e = power();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                e = Expr::make_binary(NodeKind::Mul, e, power());
            } else if (c == '/') {
                ++pos_;
                e = Expr::make_binary(NodeKind::Div, e, power());
            } else {
                return e;
            }
        }
    }

    Expr power() {
        Expr base = atom();
        if (peek() == '^') {
            ++pos_;
            if (peek() == '-') fail("signed exponent must be parenthesized");
            return Expr::make_binary(NodeKind::Pow, base, power());
        }
        return base;
    }

    Expr atom() {
        const char c = peek();
        if (c == '\0') fail("unexpected end of input");
        if (starts_number()) return Expr(number());
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if (id == "x") return Expr::variable();
            if (id == "pi") return Expr(std::numbers::pi);
            if (id == "e") return Expr(std::numbers::e);
            NodeKind k{};
            if (id == "exp") k = NodeKind::Exp;
            else if (id == "log") k = NodeKind::Log;
            else if (id == "sin") k = NodeKind::Sin;
            else if (id == "cos") k = NodeKind::Cos;
            else if (id == "sqrt") k = NodeKind::Sqrt;
            else if (id == "erf") k = NodeKind::Erf;
            else if (id == "ml") return ml_call();
            else {
                pos_ = start;
                fail("unknown identifier '" + std::string(id) + "'");
            }
            expect('(');
            Expr a = expr();
            expect(')');
            return Expr::make_unary(k, a);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr ml_call() {
        expect('(');
        MlParams p;
        const std::size_t at = pos_;
        p.alpha = signed_number();
        if (!(p.alpha > 0.0)) {
            pos_ = at;
            fail("ml: alpha must be positive");
        }
        expect(',');
        p.beta = signed_number();
        expect(',');
        Expr a = expr();
        if (peek() == ',') {
            ++pos_;
            skip_ws();
            const std::size_t s0 = pos_;
            while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
            if (pos_ == s0) fail("ml: expected derivative order");
            std::from_chars(s_.data() + s0, s_.data() + pos_, p.derivative);
        }
        expect(')');
        return Expr::make_ml(p, a);
    }
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

// ---- printer ------------------------------------------------------------

namespace {

enum Level { kSum = 0, kTerm = 1, kProduct = 2, kPower = 3, kAtom = 4 };

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Level own_level(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Constant: return std::signbit(e.value()) ? kTerm : kAtom;
        case NodeKind::Add:
        case NodeKind::Sub: return kSum;
        case NodeKind::Neg: return kTerm;
        case NodeKind::Mul:
        case NodeKind::Div: return kProduct;
        case NodeKind::Pow: return kPower;
        default: return kAtom;
    }
}

const char* fn_name(NodeKind k) {
    switch (k) {
        case NodeKind::Exp: return "exp";
        case NodeKind::Log: return "log";
        case NodeKind::Sin: return "sin";
        case NodeKind::Cos: return "cos";
        case NodeKind::Sqrt: return "sqrt";
        case NodeKind::Erf: return "erf";
        default: return "?";
    }
}

void print(const Expr& e, Level ctx, std::string& out) {
    const bool paren = own_level(e) < ctx;
    if (paren) out += '(';
    switch (e.kind()) {
        case NodeKind::Constant: out += fmt_num(e.value()); break;
        case NodeKind::Variable: out += 'x'; break;
        case NodeKind::Neg:
            out += '-';
            // "-2" would re-parse as a literal, so guard a constant child
            if (e.arg().is_constant() && !std::signbit(e.arg().value())) {
                out += '(';
                print(e.arg(), kSum, out);
                out += ')';
            } else {
                print(e.arg(), kTerm, out);
            }
            break;
        case NodeKind::Add:
        case NodeKind::Sub:
            print(e.lhs(), kSum, out);
            out += e.kind() == NodeKind::Add ? " + " : " - ";
            print(e.rhs(), kTerm, out);
            break;
        case NodeKind::Mul:
        case NodeKind::Div:
            print(e.lhs(), kProduct, out);
            out += e.kind() == NodeKind::Mul ? '*' : '/';
            print(e.rhs(), kPower, out);
            break;
        case NodeKind::Pow:
            print(e.lhs(), kAtom, out);
            out += '^';
            print(e.rhs(), kPower, out);
            break;
        case NodeKind::MittagLeffler:
            out += "ml(" + fmt_num(e.ml().alpha) + ", " + fmt_num(e.ml().beta) + ", ";
            print(e.arg(), kSum, out);
            if (e.ml().derivative > 0) out += ", " + std::to_string(e.ml().derivative);
            out += ')';
            break;
        default:
            out += fn_name(e.kind());
            out += '(';
            print(e.arg(), kSum, out);
            out += ')';
            break;
    }
    if (paren) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, kSum, out);
    return out;
}

// ---- evaluation ---------------------------------------------------------

namespace {

using detail::ExprNode;

[[noreturn]] void domain_fail(const ExprNode* n, double x) {
    throw DomainError(to_string(Expr::from_node(n)), x);
}

double eval_rec(const ExprNode* n, double x) {
    double v = 0.0;
    switch (n->kind) {
        case NodeKind::Constant: return n->value;
        case NodeKind::Variable: return x;
        case NodeKind::Neg: return -eval_rec(n->a.get(), x);
        case NodeKind::Exp: v = std::exp(eval_rec(n->a.get(), x)); break;
        case NodeKind::Log: {
            const double a = eval_rec(n->a.get(), x);
            if (!(a > 0.0)) domain_fail(n, x);
            v = std::log(a);
            break;
        }
        case NodeKind::Sin: v = std::sin(eval_rec(n->a.get(), x)); break;
        case NodeKind::Cos: v = std::cos(eval_rec(n->a.get(), x)); break;
        case NodeKind::Sqrt: {
            const double a = eval_rec(n->a.get(), x);
            if (a < 0.0) domain_fail(n, x);
            v = std::sqrt(a);
            break;
        }
        case NodeKind::Erf: v = std::erf(eval_rec(n->a.get(), x)); break;
        case NodeKind::Add: v = eval_rec(n->a.get(), x) + eval_rec(n->b.get(), x); break;
        case NodeKind::Sub: v = eval_rec(n->a.get(), x) - eval_rec(n->b.get(), x); break;
        case NodeKind::Mul: v = eval_rec(n->a.get(), x) * eval_rec(n->b.get(), x); break;
        case NodeKind::Div: {
            const double num = eval_rec(n->a.get(), x);
            const double den = eval_rec(n->b.get(), x);
            if (den == 0.0) domain_fail(n, x);
            v = num / den;
            break;
        }
        case NodeKind::Pow: {
            const double b = eval_rec(n->a.get(), x);
            const double p = eval_rec(n->b.get(), x);
            if (b < 0.0 && p != std::floor(p)) domain_fail(n, x);
            if (b == 0.0 && p < 0.0) domain_fail(n, x);
            v = p == 2.0 ? b * b : std::pow(b, p);
            break;
        }
        case NodeKind::MittagLeffler:
            v = mittag_leffler_deriv(n->ml.alpha, n->ml.beta, n->ml.derivative, eval_rec(n->a.get(), x));
            break;
    }
    if (!std::isfinite(v)) domain_fail(n, x);
    return v;
}

}  // namespace

double eval_expr(const Expr& e, double x) { return eval_rec(e.node(), x); }

// ---- differentiation ----------------------------------------------------

bool is_constant_expr(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Constant: return true;
        case NodeKind::Variable: return false;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow: return is_constant_expr(e.lhs()) && is_constant_expr(e.rhs());
        default: return is_constant_expr(e.arg());
    }
}

Expr diff_expr(const Expr& e) {
    if (is_constant_expr(e)) return Expr(0.0);
    switch (e.kind()) {
        case NodeKind::Constant: return Expr(0.0);
        case NodeKind::Variable: return Expr(1.0);
        case NodeKind::Neg: return -diff_expr(e.arg());
        case NodeKind::Exp: return diff_expr(e.arg()) * e;
        case NodeKind::Log: return diff_expr(e.arg()) / e.arg();
        case NodeKind::Sin: return diff_expr(e.arg()) * cos(e.arg());
        case NodeKind::Cos: return -(diff_expr(e.arg()) * sin(e.arg()));
        case NodeKind::Sqrt: return diff_expr(e.arg()) / (Expr(2.0) * e);
        case NodeKind::Erf:
            return (Expr(2.0 / std::sqrt(std::numbers::pi)) * diff_expr(e.arg())) *
                   exp(-pow(e.arg(), Expr(2.0)));
        case NodeKind::Add: return diff_expr(e.lhs()) + diff_expr(e.rhs());
        case NodeKind::Sub: return diff_expr(e.lhs()) - diff_expr(e.rhs());
        case NodeKind::Mul:
            return diff_expr(e.lhs()) * e.rhs() + e.lhs() * diff_expr(e.rhs());
        case NodeKind::Div: {
            const Expr& u = e.lhs();
            const Expr& v = e.rhs();
            if (is_constant_expr(v)) return diff_expr(u) / v;
            return (diff_expr(u) * v - u * diff_expr(v)) / pow(v, Expr(2.0));
        }
        case NodeKind::Pow: {
            const Expr& u = e.lhs();
            const Expr& p = e.rhs();
            if (is_constant_expr(p)) return (p * pow(u, p - Expr(1.0))) * diff_expr(u);
            if (is_constant_expr(u)) return (e * log(u)) * diff_expr(p);
            return e * (diff_expr(p) * log(u) + p * diff_expr(u) / u);
        }
        case NodeKind::MittagLeffler: {
            MlParams m = e.ml();
            m.derivative += 1;
            return diff_expr(e.arg()) * Expr::make_ml(m, e.arg());
        }
    }
    return Expr(0.0);
}

Expr diff_expr(const Expr& e, int n) {
    Expr d = e;
    for (int k = 0; k < n; ++k) d = diff_expr(d);
    return d;
}

bool structurally_equal(const Expr& l, const Expr& r) {
    if (l.kind() != r.kind()) return false;
    switch (l.kind()) {
        case NodeKind::Constant: return l.value() == r.value();
        case NodeKind::Variable: return true;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow:
            return structurally_equal(l.lhs(), r.lhs()) && structurally_equal(l.rhs(), r.rhs());
        case NodeKind::MittagLeffler:
            if (l.ml().alpha != r.ml().alpha || l.ml().beta != r.ml().beta ||
                l.ml().derivative != r.ml().derivative)
                return false;
            return structurally_equal(l.arg(), r.arg());
        default: return structurally_equal(l.arg(), r.arg());
    }
}

Expr substitute(const Expr& e, const Expr& by) {
    switch (e.kind()) {
        case NodeKind::Constant: return e;
        case NodeKind::Variable: return by;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow:
            return Expr::make_binary(e.kind(), substitute(e.lhs(), by), substitute(e.rhs(), by));
        case NodeKind::MittagLeffler: return Expr::make_ml(e.ml(), substitute(e.arg(), by));
        default: return Expr::make_unary(e.kind(), substitute(e.arg(), by));
    }
}

}  // namespace wfrac
