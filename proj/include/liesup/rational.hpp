#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "error.hpp"

namespace liesup {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value wrapper over GMP's mpq_class; every constructor canonicalizes so
/// that structural equality coincides with numeric equality.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
    Rational(long num, long den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }
    explicit Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }
    explicit Rational(const mpz_class& value) : value_(value) {}

    /// Parses "12", "-3/4" or a decimal literal such as "0.125" exactly.
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw DomainError("empty rational literal");
        if (auto dot = s.find('.'); dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = s.size() - dot - 1;
            if (digits.empty() || digits == "-" || digits == "+") {
                throw DomainError("malformed decimal literal '" + s + "'");
            }
            mpz_class num;
            if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) {
                throw DomainError("malformed decimal literal '" + s + "'");
            }
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
            return Rational(mpq_class(num, den));
        }
        mpq_class q;
        if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0 || q.get_den() == 0) {
            throw DomainError("malformed rational literal '" + s + "'");
        }
        return Rational(q);
    }

    /// Nearest-exact conversion of a finite double (every double is a dyadic rational).
    static Rational from_double(double value) { return Rational(mpq_class(value)); }

    const mpq_class& raw() const noexcept { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const noexcept { return sgn(value_) == 0; }
    bool is_one() const noexcept { return value_ == 1; }
    bool is_integer() const noexcept { return value_.get_den() == 1; }
    int sign() const noexcept { return sgn(value_); }
    double to_double() const { return value_.get_d(); }

    std::string to_string() const { return value_.get_str(); }

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("rational division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class value_{0};
};

inline Rational pow(const Rational& base, unsigned exponent) {
    Rational result(1);
    for (unsigned i = 0; i < exponent; ++i) result *= base;
    return result;
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace liesup
