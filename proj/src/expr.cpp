#include "cosc/expr.hpp"

#include "cosc/schedule.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace cosc::expr {

namespace {

Expr make(Op op, Expr lhs = nullptr, Expr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

}  // namespace

Expr constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

Expr var() { return make(Op::Var); }

Expr sampled(std::shared_ptr<const SampledCurve> curve, int order) {
    if (!curve) throw std::invalid_argument("sampled leaf without curve");
    auto n = std::make_shared<Node>();
    n->op = Op::Sampled;
    n->curve = std::move(curve);
    n->order = order;
    return n;
}

bool is_const(const Expr& e, double* v) {
    if (e->op != Op::Const) return false;
    if (v) *v = e->value;
    return true;
}

bool contains_sampled(const Expr& e) {
    if (!e) return false;
    if (e->op == Op::Sampled) return true;
    return contains_sampled(e->lhs) || contains_sampled(e->rhs);
}

Expr neg(const Expr& a) {
    double va = 0.0;
    if (is_const(a, &va)) return constant(-va);
    if (a->op == Op::Neg) return a->lhs;
    return make(Op::Neg, a);
}

Expr add(const Expr& a, const Expr& b) {
    double va = 0.0, vb = 0.0;
    const bool ca = is_const(a, &va), cb = is_const(b, &vb);
    if (ca && cb) return constant(va + vb);
    if (ca && va == 0.0) return b;
    if (cb && vb == 0.0) return a;
    if (b->op == Op::Neg) return sub(a, b->lhs);
    return make(Op::Add, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
    double va = 0.0, vb = 0.0;
    const bool ca = is_const(a, &va), cb = is_const(b, &vb);
    if (ca && cb) return constant(va - vb);
    if (cb && vb == 0.0) return a;
    if (ca && va == 0.0) return neg(b);
    if (b->op == Op::Neg) return add(a, b->lhs);
    return make(Op::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
    double va = 0.0, vb = 0.0;
    const bool ca = is_const(a, &va), cb = is_const(b, &vb);
    if (ca && cb) return constant(va * vb);
    if ((ca && va == 0.0) || (cb && vb == 0.0)) return constant(0.0);
    if (ca && va == 1.0) return b;
    if (cb && vb == 1.0) return a;
    if (ca && va == -1.0) return neg(b);
    if (cb && vb == -1.0) return neg(a);
    if (a->op == Op::Neg) return neg(mul(a->lhs, b));
    if (b->op == Op::Neg) return neg(mul(a, b->lhs));
    return make(Op::Mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
    double va = 0.0, vb = 0.0;
    const bool ca = is_const(a, &va), cb = is_const(b, &vb);
    if (ca && cb && vb != 0.0) return constant(va / vb);
    if (ca && va == 0.0) return constant(0.0);
    if (cb && vb == 1.0) return a;
    if (a->op == Op::Neg) return neg(div(a->lhs, b));
    return make(Op::Div, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
    double va = 0.0, vb = 0.0;
    const bool ca = is_const(a, &va), cb = is_const(b, &vb);
    if (ca && cb) return constant(std::pow(va, vb));
    if (cb && vb == 0.0) return constant(1.0);
    if (cb && vb == 1.0) return a;
    return make(Op::Pow, a, b);
}

Expr pow(const Expr& a, double exponent) { return pow(a, constant(exponent)); }

Expr sin(const Expr& a) {
    double va = 0.0;
    if (is_const(a, &va)) return constant(std::sin(va));
    return make(Op::Sin, a);
}

Expr cos(const Expr& a) {
    double va = 0.0;
    if (is_const(a, &va)) return constant(std::cos(va));
    return make(Op::Cos, a);
}

Expr exp(const Expr& a) {
    double va = 0.0;
    if (is_const(a, &va)) return constant(std::exp(va));
    return make(Op::Exp, a);
}

Expr log(const Expr& a) {
    double va = 0.0;
    if (is_const(a, &va)) return constant(std::log(va));
    return make(Op::Log, a);
}

Expr sqrt(const Expr& a) {
    double va = 0.0;
    if (is_const(a, &va)) return constant(std::sqrt(va));
    return make(Op::Sqrt, a);
}

double eval(const Expr& e, double t) {
    switch (e->op) {
    case Op::Const: return e->value;
    case Op::Var: return t;
    case Op::Neg: return -eval(e->lhs, t);
    case Op::Add: return eval(e->lhs, t) + eval(e->rhs, t);
    case Op::Sub: return eval(e->lhs, t) - eval(e->rhs, t);
    case Op::Mul: return eval(e->lhs, t) * eval(e->rhs, t);
    case Op::Div: return eval(e->lhs, t) / eval(e->rhs, t);
    case Op::Pow: {
        double vb = 0.0;
        if (is_const(e->rhs, &vb)) {
            const double base = eval(e->lhs, t);
            if (vb == 2.0) return base * base;
            if (vb == 3.0) return base * base * base;
            if (vb == -1.0) return 1.0 / base;
            return std::pow(base, vb);
        }
        return std::pow(eval(e->lhs, t), eval(e->rhs, t));
    }
    case Op::Sin: return std::sin(eval(e->lhs, t));
    case Op::Cos: return std::cos(eval(e->lhs, t));
    case Op::Exp: return std::exp(eval(e->lhs, t));
    case Op::Log: return std::log(eval(e->lhs, t));
    case Op::Sqrt: return std::sqrt(eval(e->lhs, t));
    case Op::Sampled: return e->curve->derivative(t, e->order);
    }
    throw std::logic_error("unknown expression node");
}

Expr derivative(const Expr& e) {
    const Expr& u = e->lhs;
    const Expr& v = e->rhs;
    switch (e->op) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(1.0);
    case Op::Neg: return neg(derivative(u));
    case Op::Add: return add(derivative(u), derivative(v));
    case Op::Sub: return sub(derivative(u), derivative(v));
    case Op::Mul: return add(mul(derivative(u), v), mul(u, derivative(v)));
    case Op::Div: {
        // (u'v - uv') / v^2
        return div(sub(mul(derivative(u), v), mul(u, derivative(v))), pow(v, 2.0));
    }
    case Op::Pow: {
        double c = 0.0;
        if (is_const(v, &c)) {
            return mul(mul(constant(c), pow(u, c - 1.0)), derivative(u));
        }
        // u^v (v' ln u + v u'/u)
        return mul(e, add(mul(derivative(v), log(u)), div(mul(v, derivative(u)), u)));
    }
    case Op::Sin: return mul(cos(u), derivative(u));
    case Op::Cos: return neg(mul(sin(u), derivative(u)));
    case Op::Exp: return mul(e, derivative(u));
    case Op::Log: return div(derivative(u), u);
    case Op::Sqrt: return div(derivative(u), mul(constant(2.0), e));
    case Op::Sampled: return sampled(e->curve, e->order + 1);
    }
    throw std::logic_error("unknown expression node");
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_{0};

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = add(e, parse_term());
            else if (accept('-')) e = sub(e, parse_term());
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*')) e = mul(e, parse_unary());
            else if (accept('/')) e = div(e, parse_unary());
            else return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return neg(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) return pow(base, parse_unary());
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if (id == "t") return var();
            if (id == "pi") return constant(std::numbers::pi);
            Expr (*fn)(const Expr&) = nullptr;
            if (id == "sin") fn = &expr::sin;
            else if (id == "cos") fn = &expr::cos;
            else if (id == "exp") fn = &expr::exp;
            else if (id == "log") fn = &expr::log;
            else if (id == "sqrt") fn = &expr::sqrt;
            else throw ParseError("unknown identifier '" + std::string(id) + "'", start);
            expect('(');
            Expr arg = parse_expr();
            expect(')');
            return fn(arg);
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        const std::string text(s_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'", start);
        return constant(v);
    }
};

int precedence(const Expr& e) {
    switch (e->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string wrap(const Expr& e, int min_prec) {
    std::string s = to_string(e);
    // negative literals behave like unary minus
    const bool negative_literal = e->op == Op::Const && std::signbit(e->value);
    const int p = negative_literal ? 3 : precedence(e);
    if (p < min_prec) return "(" + s + ")";
    return s;
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Expr& e) {
    switch (e->op) {
    case Op::Const: return format_number(e->value);
    case Op::Var: return "t";
    case Op::Neg: return "-" + wrap(e->lhs, 4);
    case Op::Add: return wrap(e->lhs, 1) + " + " + wrap(e->rhs, 2);
    case Op::Sub: return wrap(e->lhs, 1) + " - " + wrap(e->rhs, 2);
    case Op::Mul: return wrap(e->lhs, 2) + "*" + wrap(e->rhs, 3);
    case Op::Div: return wrap(e->lhs, 2) + "/" + wrap(e->rhs, 3);
    case Op::Pow: return wrap(e->lhs, 5) + "^" + wrap(e->rhs, 5);
    case Op::Sin: return "sin(" + to_string(e->lhs) + ")";
    case Op::Cos: return "cos(" + to_string(e->lhs) + ")";
    case Op::Exp: return "exp(" + to_string(e->lhs) + ")";
    case Op::Log: return "log(" + to_string(e->lhs) + ")";
    case Op::Sqrt: return "sqrt(" + to_string(e->lhs) + ")";
    case Op::Sampled: throw std::logic_error("sampled schedule has no closed-form text");
    }
    throw std::logic_error("unknown expression node");
}

}  // namespace cosc::expr
