#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexer.hpp"
#include "poly.hpp"

namespace liesup {

/// Maps an identifier to a variable index, or nullopt when unknown.
using VariableResolver = std::function<std::optional<std::size_t>(std::string_view)>;

namespace detail {

// expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
// unary := '-' unary | power ; power := primary ('^' integer)?
// primary := number | identifier | '(' expr ')'
class PolyParser {
public:
    PolyParser(std::string_view src, std::size_t arity, VariableResolver resolve)
        : lex_(src), arity_(arity), resolve_(std::move(resolve)) {}

    Poly parse() {
        Poly p = expr();
        if (lex_.peek().kind != TokenKind::End) {
            throw ParseError("unexpected " + Lexer::describe(lex_.peek()), lex_.peek().position);
        }
        return p;
    }

private:
    Poly expr() {
        Poly acc = term();
        while (lex_.peek().is('+') || lex_.peek().is('-')) {
            bool plus = lex_.take().is('+');
            Poly rhs = term();
            if (plus) acc += rhs; else acc -= rhs;
        }
        return acc;
    }

    Poly term() {
        Poly acc = unary();
        while (lex_.peek().is('*') || lex_.peek().is('/')) {
            Token op = lex_.take();
            std::size_t pos = lex_.peek().position;
            Poly rhs = unary();
            if (op.is('*')) {
                acc = acc * rhs;
            } else {
                if (!rhs.is_constant() || rhs.is_zero()) {
                    throw ParseError("division only by a nonzero constant", pos);
                }
                acc *= Rational(1) / rhs.terms().begin()->second;
            }
        }
        return acc;
    }

    Poly unary() {
        if (lex_.peek().is('-')) {
            lex_.take();
            return -unary();
        }
        return power();
    }

    Poly power() {
        Poly base = primary();
        if (lex_.peek().is('^')) {
            lex_.take();
            Token e = lex_.take();
            if (e.kind != TokenKind::Number || e.text.find('.') != std::string::npos) {
                throw ParseError("exponent must be a non-negative integer", e.position);
            }
            base = base.pow(static_cast<unsigned>(std::stoul(e.text)));
        }
        return base;
    }

    Poly primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case TokenKind::Number:
                return Poly::constant(arity_, Rational::parse(t.text));
            case TokenKind::Identifier: {
                auto idx = resolve_(t.text);
                if (!idx) throw ParseError("unknown identifier '" + t.text + "'", t.position);
                return Poly::variable(arity_, *idx);
            }
            case TokenKind::Symbol:
                if (t.is('(')) {
                    Poly inner = expr();
                    lex_.expect(')');
                    return inner;
                }
                [[fallthrough]];
            default:
                throw ParseError("unexpected " + Lexer::describe(t), t.position);
        }
    }

    Lexer lex_;
    std::size_t arity_;
    VariableResolver resolve_;
};

}  // namespace detail

/// Parses a polynomial over the variables `names` (exact; decimal literals become rationals).
inline Poly parse_poly(std::string_view src, const std::vector<std::string>& names) {
    auto resolve = [&names](std::string_view id) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == id) return i;
        }
        return std::nullopt;
    };
    return detail::PolyParser(src, names.size(), resolve).parse();
}

inline Poly parse_poly(std::string_view src, std::size_t arity, VariableResolver resolve) {
    return detail::PolyParser(src, arity, std::move(resolve)).parse();
}

}  // namespace liesup
