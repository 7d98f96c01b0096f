#include "lpvembed/expression.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace lpv {

namespace {

// Precedence levels used by both the parser and the canonical printer.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPower = 4;
constexpr int kPrecAtom = 5;

double int_power(double base, int exponent) {
    if (exponent < 0) {
        if (base == 0.0) throw EvalError("0 raised to a negative power");
        return 1.0 / int_power(base, -exponent);
    }
    double result = 1.0;
    double factor = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1u) result *= factor;
        factor *= factor;
        e >>= 1;
    }
    return result;
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc());
    return std::string(buf, end);
}

}  // namespace

Expr::Expr() { nodes_.push_back(Node{}); }

Expr Expr::constant(double value) {
    Expr e;
    e.nodes_.back().value = value;
    return e;
}

Expr Expr::variable(int index) {
    Expr e;
    e.nodes_.back().kind = Kind::Variable;
    e.nodes_.back().var = index;
    return e;
}

Expr Expr::unary(UnaryOp op, Expr operand) {
    Expr e = std::move(operand);
    Node n;
    n.kind = Kind::Unary;
    n.uop = op;
    n.a = static_cast<std::int32_t>(e.nodes_.size()) - 1;
    e.nodes_.push_back(n);
    return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e = std::move(lhs);
    const std::int32_t left = static_cast<std::int32_t>(e.nodes_.size()) - 1;
    const std::int32_t right = e.absorb(rhs);
    Node n;
    n.kind = Kind::Binary;
    n.bop = op;
    n.a = left;
    n.b = right;
    e.nodes_.push_back(n);
    return e;
}

Expr Expr::power(Expr base, int exponent) {
    Expr e = std::move(base);
    Node n;
    n.kind = Kind::Power;
    n.a = static_cast<std::int32_t>(e.nodes_.size()) - 1;
    n.exponent = exponent;
    e.nodes_.push_back(n);
    return e;
}

std::int32_t Expr::absorb(const Expr& sub) {
    const std::int32_t offset = static_cast<std::int32_t>(nodes_.size());
    for (Node n : sub.nodes_) {
        if (n.a >= 0) n.a += offset;
        if (n.b >= 0) n.b += offset;
        nodes_.push_back(n);
    }
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

double Expr::eval(std::span<const double> alpha) const {
    // nodes_ is in topological order; a single pass suffices.
    std::vector<double> value(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        double v = 0.0;
        switch (n.kind) {
            case Kind::Constant:
                v = n.value;
                break;
            case Kind::Variable:
                if (n.var < 0 || static_cast<std::size_t>(n.var) >= alpha.size())
                    throw EvalError("variable index " + std::to_string(n.var) +
                                    " out of range for evaluation point of size " +
                                    std::to_string(alpha.size()));
                v = alpha[static_cast<std::size_t>(n.var)];
                break;
            case Kind::Unary:
                switch (n.uop) {
                    case UnaryOp::Negate: v = -value[n.a]; break;
                    case UnaryOp::Sin: v = std::sin(value[n.a]); break;
                    case UnaryOp::Cos: v = std::cos(value[n.a]); break;
                    case UnaryOp::Tan: v = std::tan(value[n.a]); break;
                    case UnaryOp::Exp: v = std::exp(value[n.a]); break;
                    case UnaryOp::Abs: v = std::abs(value[n.a]); break;
                }
                break;
            case Kind::Binary:
                switch (n.bop) {
                    case BinaryOp::Add: v = value[n.a] + value[n.b]; break;
                    case BinaryOp::Sub: v = value[n.a] - value[n.b]; break;
                    case BinaryOp::Mul: v = value[n.a] * value[n.b]; break;
                    case BinaryOp::Div:
                        if (value[n.b] == 0.0) throw EvalError("division by zero");
                        v = value[n.a] / value[n.b];
                        break;
                }
                break;
            case Kind::Power:
                v = int_power(value[n.a], n.exponent);
                break;
        }
        if (!std::isfinite(v)) throw EvalError("non-finite value during evaluation");
        value[i] = v;
    }
    return value.back();
}

bool Expr::is_constant_zero() const {
    return nodes_.size() == 1 && nodes_[0].kind == Kind::Constant && nodes_[0].value == 0.0;
}

bool Expr::needs_domain_check() const {
    for (const Node& n : nodes_) {
        if (n.kind == Kind::Binary && n.bop == BinaryOp::Div) return true;
        if (n.kind == Kind::Power && n.exponent < 0) return true;
    }
    return false;
}

int Expr::max_variable_index() const {
    int max = -1;
    for (const Node& n : nodes_)
        if (n.kind == Kind::Variable && n.var > max) max = n.var;
    return max;
}

void Expr::print_node(std::int32_t idx, int parent_precedence, bool right_operand,
                      std::span<const std::string> names, std::string& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    int prec = kPrecAtom;
    switch (n.kind) {
        case Kind::Constant:
        case Kind::Variable: prec = kPrecAtom; break;
        case Kind::Unary: prec = n.uop == UnaryOp::Negate ? kPrecUnary : kPrecAtom; break;
        case Kind::Binary:
            prec = (n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub) ? kPrecAdd : kPrecMul;
            break;
        case Kind::Power: prec = kPrecPower; break;
    }
    // The parser is left-associative, so a right operand at equal precedence
    // needs parentheses to reparse into the same tree.
    const bool parens = prec < parent_precedence || (right_operand && prec == parent_precedence);
    if (parens) out += '(';
    switch (n.kind) {
        case Kind::Constant:
            if (n.value < 0.0 && !parens) {
                out += '(';
                out += format_double(n.value);
                out += ')';
            } else {
                out += format_double(n.value);
            }
            break;
        case Kind::Variable:
            out += names[static_cast<std::size_t>(n.var)];
            break;
        case Kind::Unary:
            switch (n.uop) {
                case UnaryOp::Negate:
                    out += '-';
                    print_node(n.a, kPrecUnary, false, names, out);
                    if (parens) out += ')';
                    return;
                case UnaryOp::Sin: out += "sin"; break;
                case UnaryOp::Cos: out += "cos"; break;
                case UnaryOp::Tan: out += "tan"; break;
                case UnaryOp::Exp: out += "exp"; break;
                case UnaryOp::Abs: out += "abs"; break;
            }
            out += '(';
            print_node(n.a, 0, false, names, out);
            out += ')';
            break;
        case Kind::Binary: {
            print_node(n.a, prec, false, names, out);
            const char* op = "";
            switch (n.bop) {
                case BinaryOp::Add: op = "+"; break;
                case BinaryOp::Sub: op = "-"; break;
                case BinaryOp::Mul: op = "*"; break;
                case BinaryOp::Div: op = "/"; break;
            }
            out += op;
            print_node(n.b, prec, true, names, out);
            break;
        }
        case Kind::Power:
            print_node(n.a, kPrecAtom, false, names, out);
            out += '^';
            out += std::to_string(n.exponent);
            break;
    }
    if (parens) out += ')';
}

std::string Expr::print(std::span<const std::string> names) const {
    std::string out;
    print_node(static_cast<std::int32_t>(nodes_.size()) - 1, 0, false, names, out);
    return out;
}

bool Expr::structurally_equal(const Expr& other) const {
    if (nodes_.size() != other.nodes_.size()) return false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& x = nodes_[i];
        const Node& y = other.nodes_[i];
        if (x.kind != y.kind || x.a != y.a || x.b != y.b) return false;
        switch (x.kind) {
            case Kind::Constant:
                if (x.value != y.value) return false;
                break;
            case Kind::Variable:
                if (x.var != y.var) return false;
                break;
            case Kind::Unary:
                if (x.uop != y.uop) return false;
                break;
            case Kind::Binary:
                if (x.bop != y.bop) return false;
                break;
            case Kind::Power:
                if (x.exponent != y.exponent) return false;
                break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Recursive descent parser.

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, std::span<const std::string> variables,
                     int line, int column)
        : text_(text), variables_(variables), line_(line), column_base_(column) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_spaces();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::span<const std::string> variables_;
    int line_;
    int column_base_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, column_base_ + static_cast<int>(pos_));
    }

    void skip_spaces() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool consume(char c) {
        skip_spaces();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_spaces();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (consume('+')) {
                e = Expr::binary(BinaryOp::Add, std::move(e), parse_term());
            } else if (consume('-')) {
                e = Expr::binary(BinaryOp::Sub, std::move(e), parse_term());
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (consume('*')) {
                e = Expr::binary(BinaryOp::Mul, std::move(e), parse_factor());
            } else if (consume('/')) {
                e = Expr::binary(BinaryOp::Div, std::move(e), parse_factor());
            } else {
                return e;
            }
        }
    }

    Expr parse_factor() {
        if (consume('-')) {
            Expr operand = parse_factor();
            // Fold negated literals so printed negative constants reparse to
            // the same node instead of a Negate wrapper.
            if (operand.nodes_.size() == 1 && operand.nodes_[0].kind == Expr::Kind::Constant)
                return Expr::constant(-operand.nodes_[0].value);
            return Expr::unary(UnaryOp::Negate, std::move(operand));
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (!consume('^')) return base;
        skip_spaces();
        bool negative = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            negative = text_[pos_] == '-';
            ++pos_;
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("exponent must be a constant integer");
        long exponent = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            exponent = exponent * 10 + (text_[pos_] - '0');
            if (exponent > 1000) fail("exponent too large");
            ++pos_;
        }
        return Expr::power(std::move(base), static_cast<int>(negative ? -exponent : exponent));
    }

    Expr parse_atom() {
        skip_spaces();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        const char* begin = text_.data() + pos_;
        double value = 0.0;
        auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
        if (ec != std::errc() || end == begin) fail("malformed number");
        pos_ = static_cast<std::size_t>(end - text_.data());
        return Expr::constant(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (peek() == '(') {
            UnaryOp op;
            if (name == "sin") op = UnaryOp::Sin;
            else if (name == "cos") op = UnaryOp::Cos;
            else if (name == "tan") op = UnaryOp::Tan;
            else if (name == "exp") op = UnaryOp::Exp;
            else if (name == "abs") op = UnaryOp::Abs;
            else {
                pos_ = start;
                fail("unknown function '" + std::string(name) + "'");
            }
            consume('(');
            Expr arg = parse_sum();
            if (!consume(')')) fail("expected ')'");
            return Expr::unary(op, std::move(arg));
        }
        if (name == "pi") return Expr::constant(3.14159265358979323846);
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i] == name) return Expr::variable(static_cast<int>(i));
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }
};

Expr parse_expression(std::string_view text, std::span<const std::string> variables,
                      int line, int column) {
    return ExpressionParser(text, variables, line, column).parse();
}

}  // namespace lpv
