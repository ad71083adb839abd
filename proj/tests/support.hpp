#pragma once

#include <random>

#include "liesup/diffpoly.hpp"
#include "liesup/poly.hpp"

namespace testing_support {

using liesup::DiffPoly;
using liesup::JetTerm;
using liesup::Monomial;
using liesup::Poly;
using liesup::Rational;

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 12);
    return Rational(num(rng), den(rng));
}

inline Poly random_poly(std::size_t arity, std::uint32_t max_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> terms(0, 5);
    std::uniform_int_distribution<std::uint32_t> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, arity - 1);
    Poly p(arity);
    for (int k = terms(rng); k > 0; --k) {
        Monomial m(arity, 0);
        for (auto d = deg(rng); d > 0; --d) ++m[var(rng)];
        p.add_term(m, random_rational(rng));
    }
    return p;
}

inline DiffPoly random_diffpoly(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> terms(0, 4), order(0, 3), bsym(0, 2), deg(0, 3);
    DiffPoly q;
    for (int k = terms(rng); k > 0; --k) {
        JetTerm key;
        key.y.assign(4, 0);
        for (int d = deg(rng); d > 0; --d) ++key.y[static_cast<std::size_t>(order(rng))];
        if (const int b = bsym(rng); b < 2) {
            key.b.assign(2, 0);
            key.b[static_cast<std::size_t>(b)] = 1;
        }
        q.add_term(key, random_rational(rng));
    }
    return q;
}

}  // namespace testing_support
