#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poly.hpp"
#include "poly_parser.hpp"

namespace liesup {

namespace detail {

inline std::uint32_t padded(const Monomial& m, std::size_t i) { return i < m.size() ? m[i] : 0; }

inline Monomial trimmed(Monomial m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
    return m;
}

// -1/0/+1 lexicographic comparison treating missing trailing entries as zero.
inline int lex_compare(const Monomial& a, const Monomial& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto x = padded(a, i), y = padded(b, i);
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

inline std::string render_sum(const std::vector<std::pair<Rational, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& [c, body] = terms[i];
        Rational mag = abs(c);
        std::string t = body.empty() ? mag.to_string() : (mag.is_one() ? body : mag.to_string() + "*" + body);
        if (i == 0) {
            out = (c.sign() < 0 ? "-" : "") + t;
        } else {
            out += (c.sign() < 0 ? " - " : " + ") + t;
        }
    }
    return out;
}

inline std::string render_monomial(const Monomial& m, char prefix) {
    std::string body;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!body.empty()) body += '*';
        body += prefix + std::to_string(i);
        if (m[i] > 1) body += "^" + std::to_string(m[i]);
    }
    return body;
}

}  // namespace detail

/// Term key of a differential polynomial: exponents over the jet y0, y1, ... and
/// over the coefficient symbols b0, b1, ...; both stored without trailing zeros.
struct JetTerm {
    Monomial y;
    Monomial b;

    friend bool operator==(const JetTerm&, const JetTerm&) = default;
};

/// Canonical order: grouped by b-monomial (b-free group first, then ascending
/// b-degree with b0 before b1), graded-lex descending within a group.
struct JetTermOrder {
    bool operator()(const JetTerm& a, const JetTerm& c) const {
        auto db_a = total_degree(a.b), db_c = total_degree(c.b);
        if (db_a != db_c) return db_a < db_c;
        if (int lb = detail::lex_compare(a.b, c.b); lb != 0) return lb > 0;
        auto dy_a = total_degree(a.y), dy_c = total_degree(c.y);
        if (dy_a != dy_c) return dy_a > dy_c;
        return detail::lex_compare(a.y, c.y) > 0;
    }
};

/// Differential polynomial in one dependent variable y and its derivatives,
/// with rational coefficients and polynomial dependence on symbols b_l.
///
/// The b_l are constants for differentiation purposes: total_derivative only
/// acts on the jet variables.
class DiffPoly {
public:
    using TermMap = std::map<JetTerm, Rational, JetTermOrder>;

    DiffPoly() = default;

    static DiffPoly constant(const Rational& c) {
        DiffPoly d;
        d.add_term({}, c);
        return d;
    }

    /// The jet variable y_order (the order-th derivative of y).
    static DiffPoly y(std::size_t order) {
        JetTerm k;
        k.y.assign(order + 1, 0);
        k.y[order] = 1;
        DiffPoly d;
        d.add_term(k, Rational(1));
        return d;
    }

    /// The coefficient symbol b_index.
    static DiffPoly b(std::size_t index) {
        JetTerm k;
        k.b.assign(index + 1, 0);
        k.b[index] = 1;
        DiffPoly d;
        d.add_term(k, Rational(1));
        return d;
    }

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(JetTerm key, const Rational& c) {
        if (c.is_zero()) return;
        key.y = detail::trimmed(std::move(key.y));
        key.b = detail::trimmed(std::move(key.b));
        auto [it, inserted] = terms_.try_emplace(std::move(key), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rational coefficient(const JetTerm& key) const {
        JetTerm k{detail::trimmed(key.y), detail::trimmed(key.b)};
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Highest derivative index present, or nullopt when no jet variable occurs.
    std::optional<std::size_t> max_order() const {
        std::optional<std::size_t> r;
        for (const auto& [k, c] : terms_) {
            if (!k.y.empty() && (!r || k.y.size() - 1 > *r)) r = k.y.size() - 1;
        }
        return r;
    }

    /// One past the highest b index present.
    std::size_t b_count() const {
        std::size_t r = 0;
        for (const auto& [k, c] : terms_) r = std::max(r, k.b.size());
        return r;
    }

    DiffPoly operator-() const {
        DiffPoly r(*this);
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    DiffPoly& operator+=(const DiffPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    DiffPoly& operator*=(const Rational& s) {
        if (s.is_zero()) terms_.clear();
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(DiffPoly a, const Rational& s) { return a *= s; }
    friend DiffPoly operator*(const Rational& s, DiffPoly a) { return a *= s; }

    friend DiffPoly operator*(const DiffPoly& p, const DiffPoly& q) {
        DiffPoly r;
        for (const auto& [kp, cp] : p.terms_) {
            for (const auto& [kq, cq] : q.terms_) {
                JetTerm k;
                k.y.resize(std::max(kp.y.size(), kq.y.size()));
                for (std::size_t i = 0; i < k.y.size(); ++i) k.y[i] = detail::padded(kp.y, i) + detail::padded(kq.y, i);
                k.b.resize(std::max(kp.b.size(), kq.b.size()));
                for (std::size_t i = 0; i < k.b.size(); ++i) k.b[i] = detail::padded(kp.b, i) + detail::padded(kq.b, i);
                r.add_term(std::move(k), cp * cq);
            }
        }
        return r;
    }

    friend bool operator==(const DiffPoly&, const DiffPoly&) = default;

    /// Splits into b-free coefficient polynomials, one per b-monomial.
    std::map<Monomial, DiffPoly> by_b_monomial() const {
        std::map<Monomial, DiffPoly> groups;
        for (const auto& [k, c] : terms_) groups[k.b].add_term(JetTerm{k.y, {}}, c);
        return groups;
    }

    /// Converts a b-free differential polynomial into a Poly over y0..y_{arity-1}.
    Poly to_poly(std::size_t arity) const {
        Poly p(arity);
        for (const auto& [k, c] : terms_) {
            if (!k.b.empty()) throw DomainError("differential polynomial still depends on b symbols");
            if (k.y.size() > arity) throw DimensionMismatch("jet order exceeds target arity");
            Monomial m(arity, 0);
            std::copy(k.y.begin(), k.y.end(), m.begin());
            p.add_term(m, c);
        }
        return p;
    }

    static DiffPoly from_poly(const Poly& p) {
        DiffPoly d;
        for (const auto& [m, c] : p.terms()) d.add_term(JetTerm{m, {}}, c);
        return d;
    }

    /// Canonical rendering, e.g. `-y0^3 - 3*y0*y1 - b0 - b1*y0 - b2*(y0^2 + y1)`.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::vector<std::pair<Rational, std::string>> groups;
        auto it = terms_.begin();
        while (it != terms_.end()) {
            const Monomial& bm = it->first.b;
            std::vector<std::pair<Rational, std::string>> inner;
            for (; it != terms_.end() && it->first.b == bm; ++it) {
                inner.emplace_back(it->second, detail::render_monomial(it->first.y, 'y'));
            }
            if (bm.empty()) {
                for (auto& t : inner) groups.push_back(std::move(t));
                continue;
            }
            std::string bname = detail::render_monomial(bm, 'b');
            if (inner.size() == 1) {
                auto& [c, body] = inner.front();
                groups.emplace_back(c, body.empty() ? bname : bname + "*" + body);
            } else {
                Rational lead(inner.front().first.sign() < 0 ? -1 : 1);
                for (auto& t : inner) t.first *= lead;
                groups.emplace_back(lead, bname + "*(" + detail::render_sum(inner) + ")");
            }
        }
        return detail::render_sum(groups);
    }

private:
    TermMap terms_;
};

/// Total derivative along the jet: y_i -> y_{i+1}, b symbols held constant.
inline DiffPoly diff_total_derivative(const DiffPoly& q) {
    DiffPoly r;
    for (const auto& [k, c] : q.terms()) {
        for (std::size_t i = 0; i < k.y.size(); ++i) {
            if (k.y[i] == 0) continue;
            JetTerm d = k;
            d.y[i] -= 1;
            if (d.y.size() < i + 2) d.y.resize(i + 2, 0);
            d.y[i + 1] += 1;
            r.add_term(std::move(d), c * Rational(static_cast<long>(k.y[i])));
        }
    }
    return r;
}

/// Double-precision substitution of a y-jet and b values.
inline double diff_eval(const DiffPoly& q, std::span<const double> yjet, std::span<const double> bvals) {
    if (auto order = q.max_order(); order && *order >= yjet.size()) {
        throw DimensionMismatch("y-jet of length " + std::to_string(yjet.size()) + " does not cover y" + std::to_string(*order));
    }
    if (q.b_count() > bvals.size()) {
        throw DimensionMismatch("b values of length " + std::to_string(bvals.size()) + " do not cover b" + std::to_string(q.b_count() - 1));
    }
    double sum = 0.0;
    for (const auto& [k, c] : q.terms()) {
        double term = c.to_double();
        for (std::size_t i = 0; i < k.y.size(); ++i) {
            if (k.y[i] != 0) term *= std::pow(yjet[i], static_cast<int>(k.y[i]));
        }
        for (std::size_t i = 0; i < k.b.size(); ++i) {
            if (k.b[i] != 0) term *= std::pow(bvals[i], static_cast<int>(k.b[i]));
        }
        sum += term;
    }
    return sum;
}

/// Parses text over the symbols y<k> and b<k> (k < 32), e.g. "-b0 - b1*y0 - y0^2".
inline DiffPoly parse_diffpoly(std::string_view src) {
    constexpr std::size_t kSlots = 32;
    auto resolve = [](std::string_view id) -> std::optional<std::size_t> {
        if (id.size() < 2 || (id[0] != 'y' && id[0] != 'b')) return std::nullopt;
        std::size_t k = 0;
        for (char ch : id.substr(1)) {
            if (ch < '0' || ch > '9') return std::nullopt;
            k = k * 10 + static_cast<std::size_t>(ch - '0');
            if (k >= kSlots) return std::nullopt;
        }
        return id[0] == 'y' ? k : kSlots + k;
    };
    Poly p = parse_poly(src, 2 * kSlots, resolve);
    DiffPoly d;
    for (const auto& [m, c] : p.terms()) {
        JetTerm k{Monomial(m.begin(), m.begin() + kSlots), Monomial(m.begin() + kSlots, m.end())};
        d.add_term(std::move(k), c);
    }
    return d;
}

}  // namespace liesup
