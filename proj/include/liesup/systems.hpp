#pragma once

#include <cmath>
#include <vector>

#include "hierarchy.hpp"
#include "vectorfield.hpp"

namespace liesup::systems {

/// dx/dt = a(t) x + b(t).
inline TDVectorField linear_affine(const TimeFunction& a, const TimeFunction& b) {
    return TDVectorField(1, {{a, PolyVectorField::along(0, Poly::variable(1, 0))},
                             {b, PolyVectorField::coordinate(1, 0)}});
}

/// dx/dt = a(t) x.
inline TDVectorField linear_homogeneous(const TimeFunction& a) {
    return TDVectorField(1, {{a, PolyVectorField::along(0, Poly::variable(1, 0))}});
}

/// dx/dt = a(t) x + b(t) x^n for integer n >= 0, n != 1.
inline TDVectorField bernoulli(const TimeFunction& a, const TimeFunction& b, long n) {
    if (n == 1 || n < 0) throw DomainError("Bernoulli systems need an integer n >= 0 with n != 1");
    Monomial m{static_cast<std::uint32_t>(n)};
    return TDVectorField(1, {{a, PolyVectorField::along(0, Poly::variable(1, 0))},
                             {b, PolyVectorField::along(0, Poly::monomial(1, Rational(1), m))}});
}

/// dx/dt = p, dp/dt = -omega(t)^2 x on (x, p).
inline TDVectorField oscillator(const TimeFunction& omega) {
    return TDVectorField(2, {{TimeFunction(Rational(1)), PolyVectorField::along(0, Poly::variable(2, 1))},
                             {omega.pow(2), PolyVectorField::along(1, -Poly::variable(2, 0))}});
}

/// dx/dt = p, dp/dt = -omega(t)^2 x + c / x^3 (Milne-Pinney); x = 0 is a singularity.
inline CallableRHS pinney(const TimeFunction& omega, double c) {
    return CallableRHS(2, [omega, c](double t, std::span<const double> x, std::span<double> dx) {
        if (x[0] == 0.0) throw DomainError("Pinney system is singular at x = 0");
        const double w = omega(t);
        dx[0] = x[1];
        dx[1] = -w * w * x[0] + c / (x[0] * x[0] * x[0]);
    });
}

/// dy/dt = -b0(t) - b1(t) y - y^2, the order-2 hierarchy member.
inline TDVectorField riccati(const TimeFunction& b0, const TimeFunction& b1) {
    return member_td_field(generate_member(2), {b0, b1});
}

}  // namespace liesup::systems
