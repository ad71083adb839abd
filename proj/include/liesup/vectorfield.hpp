#pragma once

#include <concepts>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diffpoly.hpp"
#include "poly.hpp"
#include "timefn.hpp"

namespace liesup {

/// Autonomous vector field on R^n with polynomial components over x0..x{n-1}.
class PolyVectorField {
public:
    PolyVectorField() = default;

    explicit PolyVectorField(std::vector<Poly> components) : components_(std::move(components)) {
        for (const auto& c : components_) {
            if (c.arity() != components_.size()) {
                throw DimensionMismatch("vector field component arity " + std::to_string(c.arity()) +
                                        " differs from dimension " + std::to_string(components_.size()));
            }
        }
    }

    static PolyVectorField zero(std::size_t n) { return PolyVectorField(std::vector<Poly>(n, Poly(n))); }

    /// The coordinate field d/dx_index.
    static PolyVectorField coordinate(std::size_t n, std::size_t index) {
        auto f = zero(n);
        f.components_.at(index) = Poly::constant(n, Rational(1));
        return f;
    }

    /// The field coeff * d/dx_index.
    static PolyVectorField along(std::size_t index, Poly coeff) {
        std::size_t n = coeff.arity();
        auto f = zero(n);
        f.components_.at(index) = std::move(coeff);
        return f;
    }

    std::size_t dimension() const noexcept { return components_.size(); }
    const std::vector<Poly>& components() const noexcept { return components_; }
    const Poly& operator[](std::size_t i) const { return components_.at(i); }

    bool is_zero() const {
        for (const auto& c : components_) {
            if (!c.is_zero()) return false;
        }
        return true;
    }

    PolyVectorField& operator+=(const PolyVectorField& o) {
        check(o);
        for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += o.components_[i];
        return *this;
    }
    PolyVectorField& operator-=(const PolyVectorField& o) {
        check(o);
        for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= o.components_[i];
        return *this;
    }
    PolyVectorField& operator*=(const Rational& s) {
        for (auto& c : components_) c *= s;
        return *this;
    }

    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
    friend PolyVectorField operator*(const Rational& s, PolyVectorField a) { return a *= s; }
    friend PolyVectorField operator*(PolyVectorField a, const Rational& s) { return a *= s; }
    PolyVectorField operator-() const { return Rational(-1) * *this; }

    friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;

    std::vector<double> evaluate(std::span<const double> x) const {
        std::vector<double> out(components_.size());
        for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i].evaluate(x);
        return out;
    }

    std::vector<Rational> evaluate(std::span<const Rational> x) const {
        std::vector<Rational> out(components_.size());
        for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i].evaluate(x);
        return out;
    }

    /// Component tuple, e.g. `(x1, -x0)`.
    std::string to_string(std::span<const std::string> names = {}) const {
        std::string s = "(";
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (i) s += ", ";
            s += components_[i].to_string(names);
        }
        return s + ")";
    }

private:
    void check(const PolyVectorField& o) const {
        if (o.dimension() != dimension()) throw DimensionMismatch("vector field dimension mismatch");
    }

    std::vector<Poly> components_;
};

/// [X,Y]^i = sum_j X^j d_j Y^i - Y^j d_j X^i, computed exactly.
inline PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y) {
    if (x.dimension() != y.dimension()) {
        throw DimensionMismatch("lie_bracket: dimensions " + std::to_string(x.dimension()) + " and " + std::to_string(y.dimension()));
    }
    const std::size_t n = x.dimension();
    std::vector<Poly> out(n, Poly(n));
    for (std::size_t j = 0; j < n; ++j) {
        const bool xj = !x[j].is_zero(), yj = !y[j].is_zero();
        if (!xj && !yj) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (xj && !y[i].is_zero()) out[i] += x[j] * poly_partial(y[i], j);
            if (yj && !x[i].is_zero()) out[i] -= y[j] * poly_partial(x[i], j);
        }
    }
    return PolyVectorField(std::move(out));
}

/// Field on R^{n*copies} acting as X on each block of n coordinates.
inline PolyVectorField diagonal_prolong(const PolyVectorField& x, std::size_t copies) {
    if (copies == 0) throw DomainError("diagonal_prolong requires at least one copy");
    const std::size_t n = x.dimension(), total = n * copies;
    std::vector<Poly> out;
    out.reserve(total);
    for (std::size_t a = 0; a < copies; ++a) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(embed(x[i], total, a * n));
    }
    return PolyVectorField(std::move(out));
}

namespace detail {

// Double-coefficient copy of a polynomial for fast repeated evaluation.
struct NumericPoly {
    std::vector<std::pair<double, Monomial>> terms;

    explicit NumericPoly(const Poly& p) {
        for (const auto& [m, c] : p.terms()) terms.emplace_back(c.to_double(), m);
    }

    double operator()(std::span<const double> x) const {
        double sum = 0.0;
        for (const auto& [c, m] : terms) {
            double v = c;
            for (std::size_t i = 0; i < m.size(); ++i) {
                for (std::uint32_t k = 0; k < m[i]; ++k) v *= x[i];
            }
            sum += v;
        }
        return sum;
    }
};

}  // namespace detail

/// Anything that can be integrated: a dimension and an in-place evaluator dx = f(t, x).
template <class R>
concept OdeRhs = requires(const R& r, double t, std::span<const double> x, std::span<double> dx) {
    { r.dimension() } -> std::convertible_to<std::size_t>;
    r.evaluate(t, x, dx);
};

/// Time-dependent field X^t = sum_a b_a(t) Y_a with polynomial Y_a.
class TDVectorField {
public:
    struct Term {
        TimeFunction coefficient;
        PolyVectorField field;
    };

    explicit TDVectorField(std::size_t dimension, std::vector<Term> terms = {})
        : dimension_(dimension), terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (t.field.dimension() != dimension_) throw DimensionMismatch("time-dependent field term has wrong dimension");
        }
        compile();
    }

    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// The autonomous fields Y_a of the decomposition.
    std::vector<PolyVectorField> fields() const {
        std::vector<PolyVectorField> out;
        for (const auto& t : terms_) out.push_back(t.field);
        return out;
    }

    void evaluate(double t, std::span<const double> x, std::span<double> dx) const {
        if (x.size() != dimension_ || dx.size() != dimension_) throw DimensionMismatch("state length does not match field dimension");
        std::fill(dx.begin(), dx.end(), 0.0);
        for (std::size_t a = 0; a < terms_.size(); ++a) {
            double b = terms_[a].coefficient(t);
            if (b == 0.0) continue;
            const auto& comps = (*compiled_)[a];
            for (std::size_t i = 0; i < dimension_; ++i) {
                if (!comps[i].terms.empty()) dx[i] += b * comps[i](x);
            }
        }
    }

    /// Terms with textually equal coefficients merged; zero fields dropped.
    TDVectorField normalized() const {
        std::vector<Term> merged;
        for (const auto& t : terms_) {
            auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return m.coefficient == t.coefficient; });
            if (it == merged.end()) {
                merged.push_back(t);
            } else {
                it->field += t.field;
            }
        }
        std::erase_if(merged, [](const Term& m) { return m.field.is_zero(); });
        return TDVectorField(dimension_, std::move(merged));
    }

    friend bool operator==(const TDVectorField& a, const TDVectorField& b) {
        if (a.dimension_ != b.dimension_ || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (!(a.terms_[i].coefficient == b.terms_[i].coefficient) || !(a.terms_[i].field == b.terms_[i].field)) return false;
        }
        return true;
    }

private:
    void compile() {
        auto c = std::make_shared<std::vector<std::vector<detail::NumericPoly>>>();
        for (const auto& t : terms_) {
            std::vector<detail::NumericPoly> comps;
            for (const auto& p : t.field.components()) comps.emplace_back(p);
            c->push_back(std::move(comps));
        }
        compiled_ = std::move(c);
    }

    std::size_t dimension_;
    std::vector<Term> terms_;
    std::shared_ptr<const std::vector<std::vector<detail::NumericPoly>>> compiled_;
};

/// Diagonal prolongation of every term of a time-dependent field.
inline TDVectorField diagonal_prolong(const TDVectorField& x, std::size_t copies) {
    std::vector<TDVectorField::Term> terms;
    for (const auto& t : x.terms()) terms.push_back({t.coefficient, diagonal_prolong(t.field, copies)});
    return TDVectorField(x.dimension() * copies, std::move(terms));
}

/// Joint field on the product space; factor a occupies its own coordinate block.
/// Terms sharing a coefficient are merged, so the product of m copies of X is the
/// diagonal prolongation of X.
inline TDVectorField direct_product(const std::vector<TDVectorField>& systems) {
    if (systems.empty()) throw DomainError("direct_product of an empty list");
    if (systems.size() == 1) return systems.front();
    std::size_t total = 0;
    for (const auto& s : systems) total += s.dimension();
    std::vector<TDVectorField::Term> terms;
    std::size_t offset = 0;
    for (const auto& s : systems) {
        for (const auto& t : s.terms()) {
            std::vector<Poly> comps(total, Poly(total));
            for (std::size_t i = 0; i < s.dimension(); ++i) comps[offset + i] = embed(t.field[i], total, offset);
            terms.push_back({t.coefficient, PolyVectorField(std::move(comps))});
        }
        offset += s.dimension();
    }
    return TDVectorField(total, std::move(terms)).normalized();
}

/// First-order system whose coordinate derivatives are differential polynomials
/// in the state (state[i] plays y_i) with b symbols bound to time functions.
class GenericRHS {
public:
    GenericRHS(std::vector<DiffPoly> components, std::vector<TimeFunction> bvals)
        : components_(std::move(components)), bvals_(std::move(bvals)) {
        for (std::size_t i = 0; i < components_.size(); ++i) {
            const auto& c = components_[i];
            if (auto ord = c.max_order(); ord && *ord >= components_.size()) {
                throw DimensionMismatch("component " + std::to_string(i) + " references y" + std::to_string(*ord) + " beyond the state");
            }
            if (c.b_count() > bvals_.size()) throw DimensionMismatch("component " + std::to_string(i) + " references an unbound b symbol");
        }
    }

    std::size_t dimension() const noexcept { return components_.size(); }
    const std::vector<DiffPoly>& components() const noexcept { return components_; }
    const std::vector<TimeFunction>& bvals() const noexcept { return bvals_; }

    void evaluate(double t, std::span<const double> x, std::span<double> dx) const {
        if (x.size() != dimension() || dx.size() != dimension()) throw DimensionMismatch("state length does not match system dimension");
        std::vector<double> b(bvals_.size());
        for (std::size_t l = 0; l < b.size(); ++l) b[l] = bvals_[l](t);
        for (std::size_t i = 0; i < components_.size(); ++i) dx[i] = diff_eval(components_[i], x, b);
    }

private:
    std::vector<DiffPoly> components_;
    std::vector<TimeFunction> bvals_;
};

/// Type-erased right-hand side, used for systems outside the polynomial families
/// and for joint systems built from heterogeneous factors.
class CallableRHS {
public:
    using Fn = std::function<void(double, std::span<const double>, std::span<double>)>;

    CallableRHS(std::size_t dimension, Fn fn) : dimension_(dimension), fn_(std::move(fn)) {}

    template <OdeRhs R>
        requires(!std::same_as<std::remove_cvref_t<R>, CallableRHS>)
    explicit CallableRHS(R rhs)
        : dimension_(rhs.dimension()),
          fn_([r = std::move(rhs)](double t, std::span<const double> x, std::span<double> dx) { r.evaluate(t, x, dx); }) {}

    std::size_t dimension() const noexcept { return dimension_; }
    void evaluate(double t, std::span<const double> x, std::span<double> dx) const { fn_(t, x, dx); }

private:
    std::size_t dimension_;
    Fn fn_;
};

/// Joint system of heterogeneous factors stacked block-wise.
inline CallableRHS product_rhs(std::vector<CallableRHS> factors) {
    if (factors.empty()) throw DomainError("product of an empty list of systems");
    std::size_t total = 0;
    for (const auto& f : factors) total += f.dimension();
    return CallableRHS(total, [fs = std::move(factors)](double t, std::span<const double> x, std::span<double> dx) {
        std::size_t off = 0;
        for (const auto& f : fs) {
            f.evaluate(t, x.subspan(off, f.dimension()), dx.subspan(off, f.dimension()));
            off += f.dimension();
        }
    });
}

template <OdeRhs R>
std::vector<double> eval_rhs(const R& rhs, double t, std::span<const double> state) {
    if (state.size() != rhs.dimension()) {
        throw DimensionMismatch("eval_rhs: state of length " + std::to_string(state.size()) + " for dimension " + std::to_string(rhs.dimension()));
    }
    std::vector<double> dx(rhs.dimension());
    rhs.evaluate(t, state, dx);
    return dx;
}

}  // namespace liesup
