#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpvembed/types.hpp"

namespace lpv {

enum class UnaryOp : std::uint8_t { Negate, Sin, Cos, Tan, Exp, Abs };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div };

/// Arithmetic expression over indexed variables, stored as a flat tree in
/// evaluation order (children always precede parents), so evaluation is a
/// single forward pass without recursion. Immutable after construction and
/// safe to evaluate from multiple threads.
class Expr {
public:
    /// Constant zero.
    Expr();

    static Expr constant(double value);
    static Expr variable(int index);
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    /// Power with a constant integer exponent. Negative exponents are
    /// permitted and get the same runtime domain checks as division.
    static Expr power(Expr base, int exponent);

    /// Evaluates with variable i bound to alpha[i]. Throws EvalError on
    /// division by zero, 0 raised to a negative power, or a non-finite
    /// intermediate. Deterministic: fixed operation order.
    double eval(std::span<const double> alpha) const;

    bool is_constant_zero() const;
    /// Contains a division or a negative exponent, i.e. needs a runtime
    /// domain check.
    bool needs_domain_check() const;
    /// Largest variable index referenced, -1 if none.
    int max_variable_index() const;

    /// Canonical text form using the given variable names. Reparsing the
    /// output reproduces the tree exactly.
    std::string print(std::span<const std::string> names) const;

    bool structurally_equal(const Expr& other) const;

private:
    enum class Kind : std::uint8_t { Constant, Variable, Unary, Binary, Power };

    struct Node {
        Kind kind = Kind::Constant;
        UnaryOp uop = UnaryOp::Negate;
        BinaryOp bop = BinaryOp::Add;
        std::int32_t a = -1;        // child indices within nodes_
        std::int32_t b = -1;
        std::int32_t var = -1;      // Kind::Variable
        std::int32_t exponent = 0;  // Kind::Power
        double value = 0.0;         // Kind::Constant
    };

    std::vector<Node> nodes_;  // root is nodes_.back()

    std::int32_t absorb(const Expr& sub);
    void print_node(std::int32_t idx, int parent_precedence, bool right_operand,
                    std::span<const std::string> names, std::string& out) const;

    friend class ExpressionParser;
};

/// Parses an arithmetic expression over the named variables. Grammar:
/// sums/products with usual precedence, unary minus, functions
/// sin/cos/tan/exp/abs, `^` with a constant integer exponent, parentheses,
/// and the constant `pi`. Errors carry line/column positions; `line` offsets
/// the reported line for expressions embedded in larger documents.
Expr parse_expression(std::string_view text, std::span<const std::string> variables,
                      int line = 1, int column = 1);

}  // namespace lpv
