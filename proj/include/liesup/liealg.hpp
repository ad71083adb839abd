#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "exact_linalg.hpp"
#include "vectorfield.hpp"

namespace liesup {

/// The closure grew past the configured cap: the generated algebra is not
/// finite-dimensional up to that cap.
class CapExceeded : public Error {
public:
    CapExceeded(std::size_t cap, std::size_t reached)
        : Error("cap exceeded at dimension " + std::to_string(reached)), cap_(cap), reached_(reached) {}
    std::size_t cap() const noexcept { return cap_; }
    std::size_t reached() const noexcept { return reached_; }

private:
    std::size_t cap_, reached_;
};

/// The bracket of basis elements alpha and beta is not in their span.
class NotClosed : public Error {
public:
    NotClosed(std::size_t alpha, std::size_t beta)
        : Error("bracket [" + std::to_string(alpha) + "," + std::to_string(beta) + "] leaves the span"), alpha_(alpha), beta_(beta) {}
    std::size_t alpha() const noexcept { return alpha_; }
    std::size_t beta() const noexcept { return beta_; }

private:
    std::size_t alpha_, beta_;
};

namespace detail {

// Coordinate of a polynomial field in coefficient space: (component, monomial).
using FieldKey = std::pair<std::size_t, Monomial>;

struct FieldKeyLess {
    bool operator()(const FieldKey& a, const FieldKey& b) const {
        if (a.first != b.first) return a.first < b.first;
        return GradedLexGreater{}(a.second, b.second);
    }
};

using FieldReducer = SpanReducer<FieldKey, FieldKeyLess>;

inline FieldReducer::Vector flatten(const PolyVectorField& f) {
    FieldReducer::Vector v;
    for (std::size_t i = 0; i < f.dimension(); ++i) {
        for (const auto& [m, c] : f[i].terms()) v.emplace(FieldKey{i, m}, c);
    }
    return v;
}

}  // namespace detail

/// A list of polynomial vector fields that are linearly independent over the reals.
class LieBasis {
public:
    /// Throws DomainError if the fields are linearly dependent.
    static LieBasis from_fields(std::vector<PolyVectorField> fields) {
        LieBasis b;
        for (auto& f : fields) {
            if (!b.try_add(std::move(f))) throw DomainError("basis fields are linearly dependent");
        }
        return b;
    }

    LieBasis() = default;

    std::size_t size() const noexcept { return fields_.size(); }
    /// Dimension of the ambient space (0 for an empty basis).
    std::size_t space_dimension() const noexcept { return fields_.empty() ? 0 : fields_.front().dimension(); }
    const std::vector<PolyVectorField>& fields() const noexcept { return fields_; }
    const PolyVectorField& operator[](std::size_t i) const { return fields_.at(i); }

    /// Exact coordinates of `f` in this basis, or nullopt if f is outside the span.
    std::optional<std::vector<Rational>> coordinates(const PolyVectorField& f) const {
        return reducer_.coordinates(detail::flatten(f));
    }

    bool contains(const PolyVectorField& f) const { return reducer_.contains(detail::flatten(f)); }

    /// Appends `f` when it is independent of the current span.
    bool try_add(PolyVectorField f) {
        if (!fields_.empty() && f.dimension() != space_dimension()) throw DimensionMismatch("basis fields must share a dimension");
        if (!reducer_.add(detail::flatten(f))) return false;
        fields_.push_back(std::move(f));
        return true;
    }

    /// One row per field over the shared (component, monomial) index.
    RationalMatrix coefficient_matrix() const {
        std::map<detail::FieldKey, std::size_t, detail::FieldKeyLess> index;
        for (const auto& f : fields_) {
            for (const auto& [k, c] : detail::flatten(f)) index.emplace(k, 0);
        }
        std::size_t col = 0;
        for (auto& [k, i] : index) i = col++;
        RationalMatrix m(fields_.size(), index.size());
        for (std::size_t r = 0; r < fields_.size(); ++r) {
            for (const auto& [k, c] : detail::flatten(fields_[r])) m(r, index.at(k)) = c;
        }
        return m;
    }

private:
    std::vector<PolyVectorField> fields_;
    detail::FieldReducer reducer_;
};

/// Exact rank of a family of polynomial fields over the reals.
inline std::size_t independence_rank(const std::vector<PolyVectorField>& fields) {
    if (fields.empty()) return 0;
    detail::FieldReducer reducer;
    for (const auto& f : fields) {
        if (f.dimension() != fields.front().dimension()) throw DimensionMismatch("independence_rank: fields of different dimension");
        reducer.add(detail::flatten(f));
    }
    return reducer.size();
}

/// Basis of the smallest Lie algebra containing `generators`.
///
/// Independent generators seed the basis; each round brackets the newly added
/// elements against every earlier element, in index order, and appends brackets
/// that leave the current span. Throws CapExceeded once the basis exceeds `cap`.
inline LieBasis closure(const std::vector<PolyVectorField>& generators, std::size_t cap = 64) {
    if (generators.empty()) throw DomainError("closure of an empty generator list");
    if (cap == 0) throw DomainError("closure cap must be at least 1");
    LieBasis basis;
    for (const auto& g : generators) {
        if (g.dimension() != generators.front().dimension()) throw DimensionMismatch("closure: generators of different dimension");
        if (basis.try_add(g) && basis.size() > cap) throw CapExceeded(cap, basis.size());
    }
    std::size_t first_new = 0;
    while (first_new < basis.size()) {
        const std::size_t end = basis.size();
        for (std::size_t j = first_new; j < end; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                if (basis.try_add(lie_bracket(basis[i], basis[j])) && basis.size() > cap) {
                    throw CapExceeded(cap, basis.size());
                }
            }
        }
        first_new = end;
    }
    return basis;
}

/// c(a,b,g) with [Y_a, Y_b] = sum_g c(a,b,g) Y_g.
class StructureConstants {
public:
    explicit StructureConstants(std::size_t r) : r_(r), c_(r * r * r) {}

    std::size_t dimension() const noexcept { return r_; }
    Rational& operator()(std::size_t a, std::size_t b, std::size_t g) { return c_[(a * r_ + b) * r_ + g]; }
    const Rational& operator()(std::size_t a, std::size_t b, std::size_t g) const { return c_[(a * r_ + b) * r_ + g]; }

    friend bool operator==(const StructureConstants&, const StructureConstants&) = default;

    bool is_antisymmetric() const {
        for (std::size_t a = 0; a < r_; ++a) {
            for (std::size_t b = 0; b < r_; ++b) {
                for (std::size_t g = 0; g < r_; ++g) {
                    if ((*this)(a, b, g) != -(*this)(b, a, g)) return false;
                }
            }
        }
        return true;
    }

    /// Jacobi identity expressed on the constants.
    bool satisfies_jacobi() const {
        for (std::size_t a = 0; a < r_; ++a) {
            for (std::size_t b = 0; b < r_; ++b) {
                for (std::size_t g = 0; g < r_; ++g) {
                    for (std::size_t e = 0; e < r_; ++e) {
                        Rational s(0);
                        for (std::size_t d = 0; d < r_; ++d) {
                            s += (*this)(b, g, d) * (*this)(a, d, e) + (*this)(g, a, d) * (*this)(b, d, e) +
                                 (*this)(a, b, d) * (*this)(g, d, e);
                        }
                        if (!s.is_zero()) return false;
                    }
                }
            }
        }
        return true;
    }

private:
    std::size_t r_;
    std::vector<Rational> c_;
};

/// Throws NotClosed when some bracket of basis elements escapes the span.
inline StructureConstants structure_constants(const LieBasis& basis) {
    const std::size_t r = basis.size();
    StructureConstants sc(r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
            auto coords = basis.coordinates(lie_bracket(basis[a], basis[b]));
            if (!coords) throw NotClosed(a, b);
            for (std::size_t g = 0; g < r; ++g) {
                sc(a, b, g) = (*coords)[g];
                sc(b, a, g) = -(*coords)[g];
            }
        }
    }
    return sc;
}

/// K(a,b) = tr(ad Y_a ad Y_b) = sum_{g,d} c(a,g,d) c(b,d,g).
inline RationalMatrix killing_form(const StructureConstants& sc) {
    const std::size_t r = sc.dimension();
    RationalMatrix k(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a; b < r; ++b) {
            Rational s(0);
            for (std::size_t g = 0; g < r; ++g) {
                for (std::size_t d = 0; d < r; ++d) {
                    if (!sc(a, g, d).is_zero() && !sc(b, d, g).is_zero()) s += sc(a, g, d) * sc(b, d, g);
                }
            }
            k(a, b) = s;
            k(b, a) = s;
        }
    }
    return k;
}

/// Dimension of {v : [v, Y_b] = 0 for all b}.
inline std::size_t center_dimension(const StructureConstants& sc) {
    const std::size_t r = sc.dimension();
    if (r == 0) return 0;
    // Rows indexed by (b, d): sum_a v_a c(a,b,d) = 0.
    RationalMatrix m(r * r, r);
    for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t d = 0; d < r; ++d) {
            for (std::size_t a = 0; a < r; ++a) m(b * r + d, a) = sc(a, b, d);
        }
    }
    return r - rank(std::move(m));
}

/// Seeded rational sample points with coordinates in [-10, 10] and denominators <= 16.
inline std::vector<std::vector<Rational>> sample_rational_points(std::size_t n, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> den_dist(1, 16);
    std::vector<std::vector<Rational>> pts;
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<Rational> p;
        for (std::size_t i = 0; i < n; ++i) {
            long den = den_dist(rng);
            std::uniform_int_distribution<long> num_dist(-10 * den, 10 * den);
            p.emplace_back(num_dist(rng), den);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

/// Rank of the fields as vectors at a single point.
inline std::size_t pointwise_rank(const std::vector<PolyVectorField>& fields, std::span<const Rational> point) {
    if (fields.empty()) return 0;
    RationalMatrix m(fields.size(), fields.front().dimension());
    for (std::size_t r = 0; r < fields.size(); ++r) {
        auto v = fields[r].evaluate(point);
        for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[c];
    }
    return rank(std::move(m));
}

/// True iff the fields are linearly independent at one of `samples` seeded
/// rational points, i.e. independent at a generic point.
inline bool is_modular_basis(const std::vector<PolyVectorField>& fields, std::size_t samples = 20, std::uint64_t seed = 0) {
    if (samples == 0) throw DomainError("is_modular_basis needs at least one sample");
    if (fields.empty()) return true;
    const std::size_t n = fields.front().dimension();
    if (fields.size() > n) return false;
    for (const auto& p : sample_rational_points(n, samples, seed)) {
        if (pointwise_rank(fields, p) == fields.size()) return true;
    }
    return false;
}

inline bool is_modular_basis(const LieBasis& basis, std::size_t samples = 20, std::uint64_t seed = 0) {
    return is_modular_basis(basis.fields(), samples, seed);
}

/// Extended Lie condition: the algebra dimension is bounded by the total component dimension.
inline bool check_lie_condition(std::size_t closure_dim, const std::vector<std::size_t>& component_dims) {
    std::size_t total = 0;
    for (auto d : component_dims) total += d;
    return closure_dim <= total;
}

}  // namespace liesup
