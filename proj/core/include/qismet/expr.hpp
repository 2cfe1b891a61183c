#ifndef QISMET_EXPR_HPP
#define QISMET_EXPR_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qismet/error.hpp"

namespace qismet {

enum class ExprOp : std::uint8_t {
    Constant,
    Variable,
    Neg,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

/// Immutable symbolic scalar expression over named chart coordinates.
///
/// Expressions are cheap to copy (shared tree nodes), pure to evaluate, and
/// closed under differentiation.  The factory functions apply a small fixed
/// simplification rule set (x*0 -> 0, x*1 -> x, x+0 -> x, constant folding);
/// nothing beyond that, so evaluated values are preserved exactly.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr constant(double value);
    /// Variable with its index into the owning coordinate list.
    static Expr variable(std::string_view name, int index);

    static Expr neg(Expr a);
    static Expr sqrt(Expr a);
    static Expr sin(Expr a);
    static Expr cos(Expr a);
    static Expr exp(Expr a);
    static Expr log(Expr a);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr pow(Expr a, Expr b);

    /// Evaluate at a point given as coordinate values (indexed by the
    /// variable indices baked in at parse time).  Throws DomainError on
    /// division by zero, log/sqrt of a nonpositive argument, fractional
    /// powers of negative bases, or non-finite results.
    double eval(std::span<const double> point) const;

    /// Exact symbolic partial derivative with respect to variable `index`.
    Expr diff(int index) const;

    /// Canonical, reparseable text form.  Printing is a fixed point:
    /// parse(print(e)) prints identically.
    std::string str() const;

    /// True if this is the literal constant `v`.
    bool is_constant(double v) const;

    /// Number of nodes in the tree (diagnostics).
    std::size_t node_count() const;

    friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
    friend Expr operator-(const Expr& a) { return neg(a); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse `text` against the declared coordinate names.  The constant `pi`
/// is always available.  Grammar:
///
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | factor
///   factor := base ('^' unary)?
///   base   := number | ident | '(' expr ')' | func '(' expr ')'
///   func   := sqrt | sin | cos | exp | log
///
/// '^' binds tighter than unary minus: -x^2 == -(x^2).
Expr parse_expr(std::string_view text, std::span<const std::string> vars);

/// Shortest round-trip decimal form of v (shared by expression printing and
/// the definition-file writer).
std::string format_real(double v);

} // namespace qismet

#endif // QISMET_EXPR_HPP
