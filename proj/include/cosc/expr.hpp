// expr.hpp - closed-form expression trees in one variable t, with symbolic
// differentiation, a small infix parser and a printer.
//
// Grammar (precedence low to high):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | log | sqrt

#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cosc {

class SampledCurve;

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

enum class Op {
    Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt, Sampled
};

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    Op op{Op::Const};
    double value{0.0};              // Const
    Expr lhs;                       // unary argument or binary left operand
    Expr rhs;                       // binary right operand
    std::shared_ptr<const SampledCurve> curve;  // Sampled
    int order{0};                   // derivative order of a Sampled leaf
};

namespace expr {

Expr constant(double v);
Expr var();
Expr sampled(std::shared_ptr<const SampledCurve> curve, int order = 0);

// Smart constructors fold constants and drop neutral elements.
Expr neg(const Expr& a);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& a, const Expr& b);
Expr pow(const Expr& a, double exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);

bool is_const(const Expr& e, double* v = nullptr);
bool contains_sampled(const Expr& e);

double eval(const Expr& e, double t);
Expr derivative(const Expr& e);

Expr parse(std::string_view text);

/// Prints a form that parse() accepts again. Sampled leaves have no textual
/// form and make this throw std::logic_error.
std::string to_string(const Expr& e);

}  // namespace expr
}  // namespace cosc
