#pragma once

#include <string>
#include <vector>

#include "diffpoly.hpp"
#include "liealg.hpp"
#include "vectorfield.hpp"

namespace liesup {

/// d^s x/dt^s = -sum_l b_l(t) d^l x/dt^l with s >= 2.
struct LinearODESpec {
    std::size_t order = 2;
    std::vector<TimeFunction> b;

    void validate() const {
        if (order < 1) throw DomainError("linear ODE order must be positive");
        if (b.size() != order) {
            throw DimensionMismatch("linear ODE of order " + std::to_string(order) + " needs " + std::to_string(order) + " coefficients");
        }
    }
};

/// y^{(s-1)} = F_b(y, ..., y^{(s-2)}), with the b_l kept symbolic in `rhs`.
struct HierarchyMember {
    std::size_t order = 2;
    DiffPoly rhs;

    /// e.g. `y1 = -y0^2 - b0 - b1*y0`.
    std::string to_string() const { return "y" + std::to_string(order - 1) + " = " + rhs.to_string(); }
};

/// P_0 = 1, P_{l+1} = D(P_l) + y0 P_l, so that d^l x/dt^l = x P_l when y = x'/x.
inline std::vector<DiffPoly> p_sequence(std::size_t s) {
    if (s < 1) throw DomainError("p_sequence needs s >= 1");
    std::vector<DiffPoly> p{DiffPoly::constant(Rational(1))};
    const DiffPoly y0 = DiffPoly::y(0);
    for (std::size_t l = 0; l < s; ++l) p.push_back(diff_total_derivative(p.back()) + y0 * p.back());
    return p;
}

/// Isolates y_{s-1} from P_s + sum_l b_l P_l = 0 using the unit coefficient of y_{s-1} in P_s.
inline HierarchyMember generate_member(std::size_t s) {
    if (s < 2) throw DomainError("hierarchy members need order s >= 2, got " + std::to_string(s));
    auto p = p_sequence(s);
    DiffPoly rhs = -(p[s] - DiffPoly::y(s - 1));
    for (std::size_t l = 0; l < s; ++l) rhs -= DiffPoly::b(l) * p[l];
    return HierarchyMember{s, std::move(rhs)};
}

/// X_{i,j} = u^j d/du^i on R^s.
inline PolyVectorField gl_field(std::size_t s, std::size_t i, std::size_t j) {
    return PolyVectorField::along(i, Poly::variable(s, j));
}

/// Delta = X_{0,1} + ... + X_{s-2,s-1} + X_{s-1,0}.
inline PolyVectorField delta_field(std::size_t s) {
    auto d = PolyVectorField::zero(s);
    for (std::size_t i = 0; i < s; ++i) d += gl_field(s, i, (i + 1) % s);
    return d;
}

/// First-order companion system du^i = u^{i+1}, du^{s-1} = -sum_l b_l u^l, in
/// decomposed form: one constant shift term and one term -X_{s-1,l} per b_l.
inline TDVectorField companion_linear_system(const LinearODESpec& spec) {
    spec.validate();
    const std::size_t s = spec.order;
    std::vector<TDVectorField::Term> terms;
    auto shift = PolyVectorField::zero(s);
    for (std::size_t i = 0; i + 1 < s; ++i) shift += gl_field(s, i, i + 1);
    if (!shift.is_zero()) terms.push_back({TimeFunction(Rational(1)), shift});
    for (std::size_t l = 0; l < s; ++l) terms.push_back({spec.b[l], -gl_field(s, s - 1, l)});
    return TDVectorField(s, std::move(terms));
}

/// dv^i = v^{i+1} (i < s-2), dv^{s-2} = F_b(v) with b bound to time functions.
inline GenericRHS member_first_order_system(const HierarchyMember& member, std::vector<TimeFunction> bvals) {
    if (bvals.size() != member.order) {
        throw DimensionMismatch("member of order " + std::to_string(member.order) + " needs " + std::to_string(member.order) +
                                " coefficient functions, got " + std::to_string(bvals.size()));
    }
    std::vector<DiffPoly> comps;
    for (std::size_t i = 0; i + 2 < member.order; ++i) comps.push_back(DiffPoly::y(i + 1));
    comps.push_back(member.rhs);
    return GenericRHS(std::move(comps), std::move(bvals));
}

/// Polynomial decomposition of the member's first-order system on R^{s-1}:
/// element 0 is the b-free part, element l+1 multiplies b_l.
inline std::vector<PolyVectorField> member_generators(const HierarchyMember& member) {
    const std::size_t n = member.order - 1;
    auto groups = member.rhs.by_b_monomial();
    auto last = [&](const DiffPoly& d) { return PolyVectorField::along(n - 1, d.to_poly(n)); };
    auto shift = PolyVectorField::zero(n);
    for (std::size_t i = 0; i + 1 < n; ++i) shift += PolyVectorField::along(i, Poly::variable(n, i + 1));
    std::vector<PolyVectorField> out;
    auto free_part = groups.find(Monomial{});
    out.push_back(shift + (free_part == groups.end() ? PolyVectorField::zero(n) : last(free_part->second)));
    for (std::size_t l = 0; l < member.order; ++l) {
        Monomial bl(l + 1, 0);
        bl[l] = 1;
        auto g = groups.find(bl);
        out.push_back(g == groups.end() ? PolyVectorField::zero(n) : last(g->second));
    }
    return out;
}

/// The member's system as a time-dependent field sum b_l(t) Y_l (plus the b-free part).
inline TDVectorField member_td_field(const HierarchyMember& member, const std::vector<TimeFunction>& bvals) {
    if (bvals.size() != member.order) throw DimensionMismatch("member_td_field: wrong number of coefficient functions");
    auto gens = member_generators(member);
    std::vector<TDVectorField::Term> terms{{TimeFunction(Rational(1)), gens[0]}};
    for (std::size_t l = 0; l < member.order; ++l) terms.push_back({bvals[l], gens[l + 1]});
    return TDVectorField(member.order - 1, std::move(terms));
}

/// The s^2 fields X_{i,j}, ordered with i major.
inline LieBasis gl_basis(std::size_t s) {
    if (s < 1) throw DomainError("gl_basis needs s >= 1");
    std::vector<PolyVectorField> fields;
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) fields.push_back(gl_field(s, i, j));
    }
    return LieBasis::from_fields(std::move(fields));
}

/// X_{s-1,0}, ..., X_{s-1,s-1} and Delta: they span the same space as the
/// companion system's fields for all t.
inline std::vector<PolyVectorField> linear_generators(std::size_t s) {
    if (s < 2) throw DomainError("linear_generators needs s >= 2");
    std::vector<PolyVectorField> out;
    for (std::size_t j = 0; j < s; ++j) out.push_back(gl_field(s, s - 1, j));
    out.push_back(delta_field(s));
    return out;
}

}  // namespace liesup
