#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace liesup {

/// Dense row-major matrix of rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

    bool is_zero() const {
        for (const auto& v : data_) {
            if (!v.is_zero()) return false;
        }
        return true;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if ((*this)(i, j) != (*this)(j, i)) return false;
            }
        }
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

namespace detail {

// In-place reduction to row echelon form; returns the rank and accumulates the
// determinant factor (sign of swaps times pivots).
inline std::size_t echelon(RationalMatrix& m, Rational* det = nullptr) {
    std::size_t rank = 0;
    Rational d(1);
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
        if (pivot == m.rows()) {
            d = Rational(0);
            continue;
        }
        if (pivot != rank) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(rank, c));
            d = -d;
        }
        const Rational p = m(rank, col);
        d *= p;
        for (std::size_t r = rank + 1; r < m.rows(); ++r) {
            if (m(r, col).is_zero()) continue;
            Rational f = m(r, col) / p;
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(rank, c);
        }
        ++rank;
    }
    if (det) *det = rank == m.rows() ? d : Rational(0);
    return rank;
}

}  // namespace detail

inline std::size_t rank(RationalMatrix m) { return detail::echelon(m); }

inline Rational determinant(RationalMatrix m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
    if (m.rows() == 0) return Rational(1);
    Rational det;
    detail::echelon(m, &det);
    return det;
}

/// Incremental exact span membership over sparse vectors with ordered keys.
///
/// Each added vector is kept in echelon form together with its expression in
/// terms of the vectors added so far, so membership queries also return
/// coordinates with respect to the accepted vectors.
template <class Key, class Compare = std::less<Key>>
class SpanReducer {
public:
    using Vector = std::map<Key, Rational, Compare>;

    std::size_t size() const noexcept { return rows_.size(); }

    /// Coordinates of `v` over the accepted vectors, or nullopt when v is outside the span.
    std::optional<std::vector<Rational>> coordinates(const Vector& v) const {
        auto [residual, combo] = reduce(v);
        if (!residual.empty()) return std::nullopt;
        std::vector<Rational> coords(rows_.size());
        for (std::size_t i = 0; i < combo.size(); ++i) coords[i] = -combo[i];
        return coords;
    }

    bool contains(const Vector& v) const { return reduce(v).first.empty(); }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    bool add(const Vector& v) {
        auto [residual, combo] = reduce(v);
        if (residual.empty()) return false;
        combo.resize(rows_.size() + 1);
        combo.back() = Rational(1);
        const Rational lead = residual.begin()->second;
        Rational inv = Rational(1) / lead;
        for (auto& [k, c] : residual) c *= inv;
        for (auto& c : combo) c *= inv;
        pivots_.emplace(residual.begin()->first, rows_.size());
        rows_.push_back(Row{std::move(residual), std::move(combo)});
        return true;
    }

private:
    struct Row {
        Vector vec;                 // leading coefficient 1
        std::vector<Rational> combo;  // vec = sum combo[i] * input_i
    };

    // Returns residual = v - sum_i x_i input_i and the vector -x (as combo of inputs).
    std::pair<Vector, std::vector<Rational>> reduce(const Vector& v) const {
        Vector res = v;
        std::vector<Rational> combo(rows_.size());
        auto it = res.begin();
        while (it != res.end()) {
            auto p = pivots_.find(it->first);
            if (p == pivots_.end()) break;
            const Row& row = rows_[p->second];
            const Rational f = it->second;
            for (const auto& [k, c] : row.vec) {
                auto [slot, inserted] = res.try_emplace(k, -(f * c));
                if (!inserted) {
                    slot->second -= f * c;
                    if (slot->second.is_zero()) res.erase(slot);
                }
            }
            for (std::size_t i = 0; i < row.combo.size(); ++i) {
                if (!row.combo[i].is_zero()) combo[i] -= f * row.combo[i];
            }
            it = res.begin();
        }
        return {std::move(res), std::move(combo)};
    }

    std::vector<Row> rows_;
    std::map<Key, std::size_t, Compare> pivots_;
};

}  // namespace liesup
