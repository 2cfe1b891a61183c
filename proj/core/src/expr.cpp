#include "qismet/expr.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cctype>
#include <numbers>
#include <sstream>

namespace qismet {

struct Expr::Node {
    ExprOp op = ExprOp::Constant;
    double value = 0.0;                 // Constant
    int var = -1;                       // Variable index
    std::string name;                   // Variable name
    std::shared_ptr<const Node> a, b;   // children
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->op = ExprOp::Constant;
    n->value = v;
    return n;
}

bool is_const(const NodePtr& n, double v) {
    return n->op == ExprOp::Constant && n->value == v;
}

bool is_const_any(const NodePtr& n) { return n->op == ExprOp::Constant; }

double apply_unary_checked(ExprOp op, double x) {
    switch (op) {
        case ExprOp::Neg: return -x;
        case ExprOp::Sqrt:
            if (x < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(x);
        case ExprOp::Sin: return std::sin(x);
        case ExprOp::Cos: return std::cos(x);
        case ExprOp::Exp: return std::exp(x);
        case ExprOp::Log:
            if (x <= 0.0) throw DomainError("log of nonpositive value");
            return std::log(x);
        default: assert(false); return 0.0;
    }
}

double apply_binary_checked(ExprOp op, double x, double y) {
    switch (op) {
        case ExprOp::Add: return x + y;
        case ExprOp::Sub: return x - y;
        case ExprOp::Mul: return x * y;
        case ExprOp::Div:
            if (y == 0.0) throw DomainError("division by zero");
            return x / y;
        case ExprOp::Pow: {
            if (x == 0.0 && y < 0.0) throw DomainError("zero raised to negative power");
            if (x < 0.0 && y != std::nearbyint(y))
                throw DomainError("fractional power of negative base");
            return std::pow(x, y);
        }
        default: assert(false); return 0.0;
    }
}

// Constant-fold only when the result is a finite, in-domain value.
NodePtr try_fold_unary(ExprOp op, const NodePtr& a) {
    if (!is_const_any(a)) return nullptr;
    try {
        double v = apply_unary_checked(op, a->value);
        if (!std::isfinite(v)) return nullptr;
        return make_const(v);
    } catch (const DomainError&) {
        return nullptr;
    }
}

NodePtr try_fold_binary(ExprOp op, const NodePtr& a, const NodePtr& b) {
    if (!is_const_any(a) || !is_const_any(b)) return nullptr;
    try {
        double v = apply_binary_checked(op, a->value, b->value);
        if (!std::isfinite(v)) return nullptr;
        return make_const(v);
    } catch (const DomainError&) {
        return nullptr;
    }
}

NodePtr make_unary(ExprOp op, NodePtr a) {
    if (auto f = try_fold_unary(op, a)) return f;
    if (op == ExprOp::Neg && a->op == ExprOp::Neg) return a->a;  // -(-x) -> x
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(ExprOp op, NodePtr a, NodePtr b) {
    if (auto f = try_fold_binary(op, a, b)) return f;
    switch (op) {
        case ExprOp::Add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            break;
        case ExprOp::Sub:
            if (is_const(b, 0.0)) return a;
            if (is_const(a, 0.0)) return make_unary(ExprOp::Neg, b);
            break;
        case ExprOp::Mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            break;
        case ExprOp::Div:
            if (is_const(b, 1.0)) return a;
            break;
        case ExprOp::Pow:
            if (is_const(b, 1.0)) return a;
            if (is_const(b, 0.0)) return make_const(1.0);
            break;
        default:
            break;
    }
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

double eval_node(const Expr::Node& n, std::span<const double> p) {
    switch (n.op) {
        case ExprOp::Constant: return n.value;
        case ExprOp::Variable:
            if (n.var < 0 || static_cast<std::size_t>(n.var) >= p.size())
                throw DomainError("point dimension does not cover variable '" + n.name + "'");
            return p[static_cast<std::size_t>(n.var)];
        case ExprOp::Neg:
        case ExprOp::Sqrt:
        case ExprOp::Sin:
        case ExprOp::Cos:
        case ExprOp::Exp:
        case ExprOp::Log: {
            double v = apply_unary_checked(n.op, eval_node(*n.a, p));
            if (!std::isfinite(v)) throw DomainError("non-finite result");
            return v;
        }
        default: {
            double v = apply_binary_checked(n.op, eval_node(*n.a, p), eval_node(*n.b, p));
            if (!std::isfinite(v)) throw DomainError("non-finite result");
            return v;
        }
    }
}

NodePtr diff_node(const NodePtr& n, int index);

NodePtr diff_pow(const NodePtr& u, const NodePtr& v, int index) {
    // Constant exponent: d(u^c) = c*u^(c-1)*u'.  Valid for negative bases
    // with integer c, which the general formula is not.
    if (is_const_any(v)) {
        double c = v->value;
        NodePtr du = diff_node(u, index);
        NodePtr p = make_binary(ExprOp::Pow, u, make_const(c - 1.0));
        return make_binary(ExprOp::Mul, make_binary(ExprOp::Mul, make_const(c), p), du);
    }
    // d(u^v) = u^v * (v' log u + v u'/u)
    NodePtr du = diff_node(u, index);
    NodePtr dv = diff_node(v, index);
    NodePtr self = make_binary(ExprOp::Pow, u, v);
    NodePtr t1 = make_binary(ExprOp::Mul, dv, make_unary(ExprOp::Log, u));
    NodePtr t2 = make_binary(ExprOp::Div, make_binary(ExprOp::Mul, v, du), u);
    return make_binary(ExprOp::Mul, self, make_binary(ExprOp::Add, t1, t2));
}

NodePtr diff_node(const NodePtr& n, int index) {
    switch (n->op) {
        case ExprOp::Constant: return make_const(0.0);
        case ExprOp::Variable: return make_const(n->var == index ? 1.0 : 0.0);
        case ExprOp::Neg: return make_unary(ExprOp::Neg, diff_node(n->a, index));
        case ExprOp::Sqrt: {
            // u' / (2 sqrt u)
            NodePtr du = diff_node(n->a, index);
            NodePtr den = make_binary(ExprOp::Mul, make_const(2.0),
                                      make_unary(ExprOp::Sqrt, n->a));
            return make_binary(ExprOp::Div, du, den);
        }
        case ExprOp::Sin:
            return make_binary(ExprOp::Mul, make_unary(ExprOp::Cos, n->a),
                               diff_node(n->a, index));
        case ExprOp::Cos:
            return make_unary(ExprOp::Neg,
                              make_binary(ExprOp::Mul, make_unary(ExprOp::Sin, n->a),
                                          diff_node(n->a, index)));
        case ExprOp::Exp:
            return make_binary(ExprOp::Mul, make_unary(ExprOp::Exp, n->a),
                               diff_node(n->a, index));
        case ExprOp::Log:
            return make_binary(ExprOp::Div, diff_node(n->a, index), n->a);
        case ExprOp::Add:
            return make_binary(ExprOp::Add, diff_node(n->a, index), diff_node(n->b, index));
        case ExprOp::Sub:
            return make_binary(ExprOp::Sub, diff_node(n->a, index), diff_node(n->b, index));
        case ExprOp::Mul: {
            NodePtr t1 = make_binary(ExprOp::Mul, diff_node(n->a, index), n->b);
            NodePtr t2 = make_binary(ExprOp::Mul, n->a, diff_node(n->b, index));
            return make_binary(ExprOp::Add, t1, t2);
        }
        case ExprOp::Div: {
            // (u'v - uv') / v^2
            NodePtr t1 = make_binary(ExprOp::Mul, diff_node(n->a, index), n->b);
            NodePtr t2 = make_binary(ExprOp::Mul, n->a, diff_node(n->b, index));
            NodePtr num = make_binary(ExprOp::Sub, t1, t2);
            NodePtr den = make_binary(ExprOp::Mul, n->b, n->b);
            return make_binary(ExprOp::Div, num, den);
        }
        case ExprOp::Pow: return diff_pow(n->a, n->b, index);
    }
    assert(false);
    return make_const(0.0);
}

// Printing with minimal parentheses.  Precedence: add/sub 1, mul/div 2,
// unary minus 3, pow 4, atoms 5.
int prec(const Expr::Node& n) {
    switch (n.op) {
        case ExprOp::Add:
        case ExprOp::Sub: return 1;
        case ExprOp::Mul:
        case ExprOp::Div: return 2;
        case ExprOp::Neg: return 3;
        case ExprOp::Pow: return 4;
        default: return 5;
    }
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_node(const Expr::Node& n, std::string& out);

void print_child(const Expr::Node& c, int parent_prec, bool need_parens_on_tie,
                 std::string& out) {
    int cp = prec(c);
    bool parens = cp < parent_prec || (cp == parent_prec && need_parens_on_tie);
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
}

void print_node(const Expr::Node& n, std::string& out) {
    switch (n.op) {
        case ExprOp::Constant: {
            if (n.value < 0.0 || std::signbit(n.value)) {
                out += '(';
                out += format_double(n.value);
                out += ')';
            } else {
                out += format_double(n.value);
            }
            return;
        }
        case ExprOp::Variable: out += n.name; return;
        case ExprOp::Neg:
            out += '-';
            print_child(*n.a, 3, false, out);
            return;
        case ExprOp::Sqrt: out += "sqrt("; break;
        case ExprOp::Sin: out += "sin("; break;
        case ExprOp::Cos: out += "cos("; break;
        case ExprOp::Exp: out += "exp("; break;
        case ExprOp::Log: out += "log("; break;
        case ExprOp::Add:
            print_child(*n.a, 1, false, out);
            out += '+';
            print_child(*n.b, 1, true, out);
            return;
        case ExprOp::Sub:
            print_child(*n.a, 1, false, out);
            out += '-';
            print_child(*n.b, 1, true, out);
            return;
        case ExprOp::Mul:
            print_child(*n.a, 2, false, out);
            out += '*';
            print_child(*n.b, 2, true, out);
            return;
        case ExprOp::Div:
            print_child(*n.a, 2, false, out);
            out += '/';
            print_child(*n.b, 2, true, out);
            return;
        case ExprOp::Pow:
            // Left child of '^' needs parens even at equal precedence
            // (right-associative), and so does a unary minus: (-x)^2.
            print_child(*n.a, 4, true, out);
            out += '^';
            print_child(*n.b, 4, false, out);
            return;
    }
    // unary function call
    print_node(*n.a, out);
    out += ')';
}

std::size_t count_nodes(const Expr::Node& n) {
    std::size_t c = 1;
    if (n.a) c += count_nodes(*n.a);
    if (n.b) c += count_nodes(*n.b);
    return c;
}

} // namespace

Expr::Expr() : node_(make_const(0.0)) {}

Expr Expr::constant(double value) { return Expr(make_const(value)); }

Expr Expr::variable(std::string_view name, int index) {
    auto n = std::make_shared<Node>();
    n->op = ExprOp::Variable;
    n->var = index;
    n->name = std::string(name);
    return Expr(std::move(n));
}

Expr Expr::neg(Expr a) { return Expr(make_unary(ExprOp::Neg, std::move(a.node_))); }
Expr Expr::sqrt(Expr a) { return Expr(make_unary(ExprOp::Sqrt, std::move(a.node_))); }
Expr Expr::sin(Expr a) { return Expr(make_unary(ExprOp::Sin, std::move(a.node_))); }
Expr Expr::cos(Expr a) { return Expr(make_unary(ExprOp::Cos, std::move(a.node_))); }
Expr Expr::exp(Expr a) { return Expr(make_unary(ExprOp::Exp, std::move(a.node_))); }
Expr Expr::log(Expr a) { return Expr(make_unary(ExprOp::Log, std::move(a.node_))); }

Expr Expr::add(Expr a, Expr b) {
    return Expr(make_binary(ExprOp::Add, std::move(a.node_), std::move(b.node_)));
}
Expr Expr::sub(Expr a, Expr b) {
    return Expr(make_binary(ExprOp::Sub, std::move(a.node_), std::move(b.node_)));
}
Expr Expr::mul(Expr a, Expr b) {
    return Expr(make_binary(ExprOp::Mul, std::move(a.node_), std::move(b.node_)));
}
Expr Expr::div(Expr a, Expr b) {
    return Expr(make_binary(ExprOp::Div, std::move(a.node_), std::move(b.node_)));
}
Expr Expr::pow(Expr a, Expr b) {
    return Expr(make_binary(ExprOp::Pow, std::move(a.node_), std::move(b.node_)));
}

double Expr::eval(std::span<const double> point) const { return eval_node(*node_, point); }

Expr Expr::diff(int index) const { return Expr(diff_node(node_, index)); }

std::string Expr::str() const {
    std::string out;
    print_node(*node_, out);
    return out;
}

bool Expr::is_constant(double v) const { return is_const(node_, v); }

std::size_t Expr::node_count() const { return count_nodes(*node_); }

namespace {

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> vars)
        : text_(text), vars_(vars) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::span<const std::string> vars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = Expr::add(e, parse_term());
            else if (accept('-')) e = Expr::sub(e, parse_term());
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*')) e = Expr::mul(e, parse_unary());
            else if (accept('/')) e = Expr::div(e, parse_unary());
            else return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::neg(parse_unary());
        return parse_factor();
    }

    Expr parse_factor() {
        Expr base = parse_base();
        if (accept('^')) return Expr::pow(base, parse_unary());
        return base;
    }

    Expr parse_base() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' was an identifier boundary, not an exponent
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_)
            throw ParseError("malformed number", start);
        return Expr::constant(value);
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        static const char* kFuncs[] = {"sqrt", "sin", "cos", "exp", "log"};
        for (const char* f : kFuncs) {
            if (name == f) {
                expect('(');
                Expr arg = parse_expr();
                expect(')');
                if (name == "sqrt") return Expr::sqrt(arg);
                if (name == "sin") return Expr::sin(arg);
                if (name == "cos") return Expr::cos(arg);
                if (name == "exp") return Expr::exp(arg);
                return Expr::log(arg);
            }
        }
        if (name == "pi") return Expr::constant(std::numbers::pi);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return Expr::variable(name, static_cast<int>(i));
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
};

} // namespace

Expr parse_expr(std::string_view text, std::span<const std::string> vars) {
    return Parser(text, vars).run();
}

std::string format_real(double v) { return format_double(v); }

} // namespace qismet
