#pragma once

#include "cartanlab/rational.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cartanlab {

enum class NodeKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Exp, Log, Sqrt };

struct ExprNode {
    NodeKind kind;
    double value = 0;          // Number
    std::string text;          // Number literal as written
    std::size_t var = 0;       // Var index into the coordinate list
    long exponent = 0;         // Pow
    Func func = Func::Sin;     // Call
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

/// Immutable scalar expression bound to a list of coordinate names.
class Expr {
public:
    Expr() = default;
    Expr(NodePtr root, std::vector<std::string> coords) : root_(std::move(root)), coords_(std::move(coords)) {}

    const NodePtr& root() const { return root_; }
    const std::vector<std::string>& coords() const { return coords_; }

    /// Throws DomainError for log/sqrt outside their domain and division by zero.
    double eval(std::span<const double> point) const;

    std::string to_string() const;

    static Expr constant(const Rational& q, std::vector<std::string> coords);
    static Expr zero(std::vector<std::string> coords);

private:
    NodePtr root_;
    std::vector<std::string> coords_;
};

/// Grammar: sum := prod (('+'|'-') prod)*; prod := unary (('*'|'/') unary)*;
/// unary := '-' unary | power; power := atom ('^' ['-'] INT ('^' ...)*)?  (right associative).
/// Throws SyntaxError(offset) and UnknownIdentifier(name).
Expr parse(const std::string& src, const std::vector<std::string>& coords);

/// Linear combination sum_j c_j e_j with zero terms dropped and unit coefficients elided.
/// All expressions must share the coordinate list.
Expr linear_combination(const std::vector<Rational>& coeffs, const std::vector<Expr>& exprs,
                        const std::vector<std::string>& coords);

}  // namespace cartanlab
