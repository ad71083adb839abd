#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace liesup {

/// Exponent vector of a monomial; its length equals the arity of the owning polynomial.
using Monomial = std::vector<std::uint32_t>;

inline std::uint32_t total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), std::uint32_t{0});
}

/// Graded lexicographic order, largest monomial first.
struct GradedLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

/// Multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored and terms are kept in graded-lex order,
/// so two polynomials are equal iff their term maps are equal.
class Poly {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexGreater>;

    explicit Poly(std::size_t arity = 0) : arity_(arity) {}

    static Poly constant(std::size_t arity, const Rational& c) {
        Poly p(arity);
        if (!c.is_zero()) p.terms_.emplace(Monomial(arity, 0), c);
        return p;
    }

    static Poly variable(std::size_t arity, std::size_t index) {
        if (index >= arity) throw IndexOutOfRange("variable index " + std::to_string(index) + " >= arity " + std::to_string(arity));
        Monomial m(arity, 0);
        m[index] = 1;
        return monomial(arity, Rational(1), std::move(m));
    }

    static Poly monomial(std::size_t arity, const Rational& c, Monomial exponents) {
        if (exponents.size() != arity) throw DimensionMismatch("monomial length does not match arity");
        Poly p(arity);
        if (!c.is_zero()) p.terms_.emplace(std::move(exponents), c);
        return p;
    }

    std::size_t arity() const noexcept { return arity_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    std::uint32_t degree() const { return terms_.empty() ? 0 : total_degree(terms_.begin()->first); }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Adds c·x^m in place.
    void add_term(const Monomial& m, const Rational& c) {
        if (m.size() != arity_) throw DimensionMismatch("monomial length does not match arity");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        check_arity(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Poly& operator-=(const Poly& o) {
        check_arity(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    Poly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_arity(b);
        Poly r(a.arity_);
        Monomial m(a.arity_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) = default;

    Poly pow(unsigned exponent) const {
        Poly r = constant(arity_, Rational(1));
        for (unsigned i = 0; i < exponent; ++i) r = r * *this;
        return r;
    }

    double evaluate(std::span<const double> point) const {
        if (point.size() != arity_) throw DimensionMismatch("evaluation point has wrong length");
        double sum = 0.0;
        for (const auto& [m, c] : terms_) {
            double term = c.to_double();
            for (std::size_t i = 0; i < arity_; ++i) {
                if (m[i] != 0) term *= std::pow(point[i], static_cast<int>(m[i]));
            }
            sum += term;
        }
        return sum;
    }

    Rational evaluate(std::span<const Rational> point) const {
        if (point.size() != arity_) throw DimensionMismatch("evaluation point has wrong length");
        Rational sum(0);
        for (const auto& [m, c] : terms_) {
            Rational term = c;
            for (std::size_t i = 0; i < arity_; ++i) {
                if (m[i] != 0) term *= liesup::pow(point[i], m[i]);
            }
            sum += term;
        }
        return sum;
    }

    /// Canonical text: terms in graded-lex order, explicit `*` and `^`.
    /// Variables are named `names[i]` or `x<i>` when no names are given.
    std::string to_string(std::span<const std::string> names = {}) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::string body;
            for (std::size_t i = 0; i < arity_; ++i) {
                if (m[i] == 0) continue;
                if (!body.empty()) body += '*';
                body += i < names.size() ? names[i] : "x" + std::to_string(i);
                if (m[i] > 1) body += "^" + std::to_string(m[i]);
            }
            Rational mag = abs(c);
            std::string term;
            if (body.empty()) {
                term = mag.to_string();
            } else if (mag.is_one()) {
                term = body;
            } else {
                term = mag.to_string() + "*" + body;
            }
            if (first) {
                out = (c.sign() < 0 ? "-" : "") + term;
                first = false;
            } else {
                out += (c.sign() < 0 ? " - " : " + ") + term;
            }
        }
        return out;
    }

private:
    void check_arity(const Poly& o) const {
        if (o.arity_ != arity_) {
            throw DimensionMismatch("polynomial arity mismatch: " + std::to_string(arity_) + " vs " + std::to_string(o.arity_));
        }
    }

    std::size_t arity_;
    TermMap terms_;
};

/// Exact partial derivative with respect to variable `var_index`.
inline Poly poly_partial(const Poly& p, std::size_t var_index) {
    if (var_index >= p.arity()) {
        throw IndexOutOfRange("partial derivative index " + std::to_string(var_index) + " >= arity " + std::to_string(p.arity()));
    }
    Poly r(p.arity());
    for (const auto& [m, c] : p.terms()) {
        if (m[var_index] == 0) continue;
        Monomial d = m;
        d[var_index] -= 1;
        r.add_term(d, c * Rational(static_cast<long>(m[var_index])));
    }
    return r;
}

/// Re-expresses `p` in a larger variable set, mapping variable i to `offset + i`.
inline Poly embed(const Poly& p, std::size_t new_arity, std::size_t offset) {
    if (offset + p.arity() > new_arity) throw DimensionMismatch("embedding does not fit in target arity");
    Poly r(new_arity);
    Monomial m(new_arity, 0);
    for (const auto& [e, c] : p.terms()) {
        std::fill(m.begin(), m.end(), 0);
        std::copy(e.begin(), e.end(), m.begin() + static_cast<std::ptrdiff_t>(offset));
        r.add_term(m, c);
    }
    return r;
}

}  // namespace liesup
