#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "error.hpp"

namespace liesup::detail {

enum class TokenKind { Number, Identifier, Symbol, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t position = 0;

    bool is(char c) const { return kind == TokenKind::Symbol && text.size() == 1 && text[0] == c; }
};

/// Tokenizer shared by the polynomial and time-function grammars.
class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const noexcept { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    void expect(char c) {
        if (!current_.is(c)) {
            throw ParseError(std::string("expected '") + c + "' but found " + describe(current_), current_.position);
        }
        advance();
    }

    static std::string describe(const Token& t) {
        return t.kind == TokenKind::End ? std::string("end of input") : "'" + t.text + "'";
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_ = Token{};
        current_.position = pos_;
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            bool seen_dot = false;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (d == '.') {
                    if (seen_dot) break;
                    seen_dot = true;
                } else if (!std::isdigit(static_cast<unsigned char>(d))) {
                    break;
                }
                ++pos_;
            }
            current_.kind = TokenKind::Number;
            current_.text = std::string(src_.substr(start, pos_ - start));
            if (current_.text == ".") throw ParseError("malformed number", start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            current_.kind = TokenKind::Identifier;
            current_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
            current_.kind = TokenKind::Symbol;
            current_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

}  // namespace liesup::detail
