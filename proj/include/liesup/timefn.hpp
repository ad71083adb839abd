#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "lexer.hpp"
#include "rational.hpp"

namespace liesup {

/// Closed-form scalar function of time: literals, t, + - * /, integer powers,
/// sin, cos, exp. Immutable; copies share the expression tree.
class TimeFunction {
public:
    enum class Op { Literal, Time, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

    TimeFunction() : TimeFunction(Rational(0)) {}
    TimeFunction(const Rational& value)  // NOLINT(google-explicit-constructor)
        : node_(std::make_shared<Node>(Node{Op::Literal, value, 0, nullptr, nullptr})) {}

    static TimeFunction time() { return TimeFunction(std::make_shared<Node>(Node{Op::Time, {}, 0, nullptr, nullptr})); }

    Op op() const noexcept { return node_->op; }
    bool is_literal() const noexcept { return node_->op == Op::Literal; }
    const Rational& literal() const noexcept { return node_->value; }

    /// Throws DomainError on division by zero or a non-finite result.
    double operator()(double t) const {
        double v = eval(*node_, t);
        if (!std::isfinite(v)) throw DomainError("time function is not finite at t=" + std::to_string(t));
        return v;
    }

    /// Canonical text; parse_timefn(f.to_string()) renders back identically.
    std::string to_string() const { return render(*node_); }

    friend bool operator==(const TimeFunction& a, const TimeFunction& b) { return a.to_string() == b.to_string(); }

    friend TimeFunction operator+(const TimeFunction& a, const TimeFunction& b) { return binary(Op::Add, a, b); }
    friend TimeFunction operator-(const TimeFunction& a, const TimeFunction& b) { return binary(Op::Sub, a, b); }
    friend TimeFunction operator*(const TimeFunction& a, const TimeFunction& b) { return binary(Op::Mul, a, b); }
    friend TimeFunction operator/(const TimeFunction& a, const TimeFunction& b) { return binary(Op::Div, a, b); }
    TimeFunction operator-() const { return unary(Op::Neg, *this); }

    TimeFunction pow(long exponent) const {
        auto n = std::make_shared<Node>(Node{Op::Pow, {}, exponent, node_, nullptr});
        return TimeFunction(std::move(n));
    }
    static TimeFunction sin(const TimeFunction& a) { return unary(Op::Sin, a); }
    static TimeFunction cos(const TimeFunction& a) { return unary(Op::Cos, a); }
    static TimeFunction exp(const TimeFunction& a) { return unary(Op::Exp, a); }

private:
    struct Node {
        Op op;
        Rational value;
        long exponent;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    explicit TimeFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static TimeFunction binary(Op op, const TimeFunction& a, const TimeFunction& b) {
        return TimeFunction(std::make_shared<Node>(Node{op, {}, 0, a.node_, b.node_}));
    }
    static TimeFunction unary(Op op, const TimeFunction& a) {
        return TimeFunction(std::make_shared<Node>(Node{op, {}, 0, a.node_, nullptr}));
    }

    static double eval(const Node& n, double t) {
        switch (n.op) {
            case Op::Literal: return n.value.to_double();
            case Op::Time: return t;
            case Op::Add: return eval(*n.lhs, t) + eval(*n.rhs, t);
            case Op::Sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
            case Op::Mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
            case Op::Div: {
                double d = eval(*n.rhs, t);
                if (d == 0.0) throw DomainError("division by zero in time function at t=" + std::to_string(t));
                return eval(*n.lhs, t) / d;
            }
            case Op::Pow: {
                double b = eval(*n.lhs, t);
                if (b == 0.0 && n.exponent < 0) throw DomainError("negative power of zero in time function at t=" + std::to_string(t));
                return std::pow(b, static_cast<double>(n.exponent));
            }
            case Op::Neg: return -eval(*n.lhs, t);
            case Op::Sin: return std::sin(eval(*n.lhs, t));
            case Op::Cos: return std::cos(eval(*n.lhs, t));
            case Op::Exp: return std::exp(eval(*n.lhs, t));
        }
        return 0.0;
    }

    // Binding strength used to decide parenthesization.
    static int precedence(const Node& n) {
        switch (n.op) {
            case Op::Add:
            case Op::Sub:
            case Op::Neg: return 1;
            case Op::Mul:
            case Op::Div: return 2;
            case Op::Pow: return 4;
            case Op::Literal: return n.value.sign() < 0 ? 1 : (is_decimal(n.value) ? 5 : 2);
            default: return 5;
        }
    }

    static bool is_decimal(const Rational& r) {
        mpz_class d = r.denominator();
        while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) d /= 2;
        while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) d /= 5;
        return d == 1;
    }

    static std::string decimal_text(const Rational& r) {
        mpz_class den = r.denominator();
        unsigned twos = 0, fives = 0;
        mpz_class d = den;
        while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) { d /= 2; ++twos; }
        while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) { d /= 5; ++fives; }
        unsigned digits = std::max(twos, fives);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
        mpz_class scaled = abs(r.numerator()) * (scale / den);
        std::string s = scaled.get_str();
        if (digits > 0) {
            if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
            s.insert(s.size() - digits, ".");
        }
        return s;
    }

    static std::string render_child(const Node& child, int min_prec) {
        std::string s = render(child);
        return precedence(child) < min_prec ? "(" + s + ")" : s;
    }

    static std::string render(const Node& n) {
        switch (n.op) {
            case Op::Literal: {
                if (is_decimal(n.value)) {
                    std::string s = decimal_text(n.value);
                    return n.value.sign() < 0 ? "-" + s : s;
                }
                std::string s = decimal_text(Rational(mpq_class(abs(n.value.numerator())))) + "/" + n.value.denominator().get_str();
                return n.value.sign() < 0 ? "-" + s : s;
            }
            case Op::Time: return "t";
            case Op::Add: return render_child(*n.lhs, 1) + " + " + render_child(*n.rhs, 1);
            case Op::Sub: return render_child(*n.lhs, 1) + " - " + render_child(*n.rhs, 2);
            case Op::Mul: return render_child(*n.lhs, 2) + "*" + render_child(*n.rhs, 3);
            case Op::Div: return render_child(*n.lhs, 2) + "/" + render_child(*n.rhs, 3);
            case Op::Neg: return "-" + render_child(*n.lhs, 3);
            case Op::Pow: return render_child(*n.lhs, 5) + "^" + (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent));
            case Op::Sin: return "sin(" + render(*n.lhs) + ")";
            case Op::Cos: return "cos(" + render(*n.lhs) + ")";
            case Op::Exp: return "exp(" + render(*n.lhs) + ")";
        }
        return {};
    }

    std::shared_ptr<const Node> node_;
};

namespace detail {

// Grammar: expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
// unary := '-' unary | factor ; factor := base ('^' integer)?
// base := number | 't' | fn '(' expr ')' | '(' expr ')' ; fn := sin | cos | exp
// Unary minus and parenthesized negative exponents extend the base grammar.
class TimeFunctionParser {
public:
    explicit TimeFunctionParser(std::string_view src) : lex_(src) {}

    TimeFunction parse() {
        TimeFunction f = expr();
        if (lex_.peek().kind != TokenKind::End) {
            throw ParseError("unexpected " + Lexer::describe(lex_.peek()), lex_.peek().position);
        }
        return f;
    }

private:
    TimeFunction expr() {
        TimeFunction acc = term();
        while (lex_.peek().is('+') || lex_.peek().is('-')) {
            bool plus = lex_.take().is('+');
            TimeFunction rhs = term();
            acc = plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    TimeFunction term() {
        TimeFunction acc = unary();
        while (lex_.peek().is('*') || lex_.peek().is('/')) {
            bool mul = lex_.take().is('*');
            TimeFunction rhs = unary();
            acc = mul ? acc * rhs : acc / rhs;
        }
        return acc;
    }

    TimeFunction unary() {
        if (lex_.peek().is('-')) {
            lex_.take();
            return -unary();
        }
        return factor();
    }

    TimeFunction factor() {
        TimeFunction b = base();
        if (!lex_.peek().is('^')) return b;
        lex_.take();
        long sign = 1;
        bool paren = false;
        if (lex_.peek().is('(')) {
            lex_.take();
            paren = true;
            if (lex_.peek().is('-')) {
                lex_.take();
                sign = -1;
            }
        }
        Token e = lex_.take();
        if (e.kind != TokenKind::Number || e.text.find('.') != std::string::npos) {
            throw ParseError("exponent must be an integer", e.position);
        }
        if (paren) lex_.expect(')');
        return b.pow(sign * std::stol(e.text));
    }

    TimeFunction base() {
        Token tok = lex_.take();
        if (tok.kind == TokenKind::Number) return TimeFunction(Rational::parse(tok.text));
        if (tok.kind == TokenKind::Identifier) {
            if (tok.text == "t") return TimeFunction::time();
            if (tok.text == "sin" || tok.text == "cos" || tok.text == "exp") {
                lex_.expect('(');
                TimeFunction arg = expr();
                lex_.expect(')');
                if (tok.text == "sin") return TimeFunction::sin(arg);
                if (tok.text == "cos") return TimeFunction::cos(arg);
                return TimeFunction::exp(arg);
            }
            throw ParseError("unknown identifier '" + tok.text + "'", tok.position);
        }
        if (tok.is('(')) {
            TimeFunction inner = expr();
            lex_.expect(')');
            return inner;
        }
        throw ParseError("unexpected " + Lexer::describe(tok), tok.position);
    }

    Lexer lex_;
};

}  // namespace detail

inline TimeFunction parse_timefn(std::string_view src) { return detail::TimeFunctionParser(src).parse(); }

}  // namespace liesup
