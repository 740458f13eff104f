#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "forge/grid.hpp"

namespace forge {

/// Operators and primitives an expression tree may contain.
enum class ExprOp {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Sqrt,
};

/// Immutable expression in the single variable `r`.
///
/// Nodes are shared and never mutated, so copies are cheap and an expression
/// may be evaluated from several threads at once. Evaluation throws
/// DomainError instead of returning a non-finite value (log of a non-positive
/// number, square root of a negative number, division by zero, non-integer
/// power of a non-positive base, overflow).
class AnalyticExpr {
public:
    /// The constant 0.
    AnalyticExpr();

    static AnalyticExpr constant(double value);
    static AnalyticExpr variable();

    /// Builders perform constant folding and drop additive/multiplicative
    /// identities; no further simplification is attempted.
    static AnalyticExpr unary(ExprOp op, const AnalyticExpr& arg);
    static AnalyticExpr binary(ExprOp op, const AnalyticExpr& lhs, const AnalyticExpr& rhs);

    double operator()(double r) const;

    ExprOp op() const noexcept;
    bool depends_on_r() const noexcept;
    /// Value of a Constant node. Undefined for other nodes.
    double constant_value() const noexcept;

    /// Canonical infix text. `parse(to_string())` reproduces the same tree.
    std::string to_string() const;

    /// Number of nodes in the tree (shared subtrees counted once per use).
    std::size_t size() const noexcept;

    /// Opaque tree node; defined in the implementation.
    struct Node;

private:
    explicit AnalyticExpr(std::shared_ptr<const Node> node);

    std::shared_ptr<const Node> node_;

    friend AnalyticExpr differentiate(const AnalyticExpr& e);
};

AnalyticExpr operator+(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator-(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator*(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator/(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator-(const AnalyticExpr& a);
AnalyticExpr pow(const AnalyticExpr& base, const AnalyticExpr& exponent);

/// Parses infix text in the variable `r`. See README for the grammar.
/// Throws ParseError with the byte offset of the first offending token.
AnalyticExpr parse(std::string_view text);

/// Exact symbolic derivative d/dr. The result is not simplified beyond the
/// identity folding done by the builders.
AnalyticExpr differentiate(const AnalyticExpr& e);

/// Samples `e` and its symbolic derivative at every node of `grid`.
/// Throws DomainError naming the first node where evaluation fails.
SampledField evaluate_on_grid(const AnalyticExpr& e, const RadialGrid& grid);

}  // namespace forge
