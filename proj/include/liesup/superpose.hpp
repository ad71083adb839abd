#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hierarchy.hpp"

namespace liesup {

class DegenerateWronskian : public DomainError {
public:
    DegenerateWronskian() : DomainError("degenerate Wronskian: W = 0") {}
};

class RadicandNegative : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularDenominator : public DomainError {
public:
    using DomainError::DomainError;
};

class CoincidentSolutions : public DomainError {
public:
    CoincidentSolutions() : DomainError("particular solutions must be pairwise distinct") {}
};

class SingularJetMatrix : public DomainError {
public:
    SingularJetMatrix() : DomainError("jet matrix is singular") {}
};

class NonGenericNormalization : public DomainError {
public:
    NonGenericNormalization() : DomainError("last projective constant vanishes; cannot normalize k_s = 1") {}
};

enum class RuleKind { Linear, Bernoulli, Pinney, Hierarchy, RiccatiCrossRatio };

inline std::string_view rule_id(RuleKind k) {
    switch (k) {
        case RuleKind::Linear: return "linear";
        case RuleKind::Bernoulli: return "bernoulli";
        case RuleKind::Pinney: return "pinney";
        case RuleKind::Hierarchy: return "hierarchy";
        case RuleKind::RiccatiCrossRatio: return "riccati-cross-ratio";
    }
    return "";
}

inline std::optional<RuleKind> parse_rule_id(std::string_view id) {
    for (auto k : {RuleKind::Linear, RuleKind::Bernoulli, RuleKind::Pinney, RuleKind::Hierarchy, RuleKind::RiccatiCrossRatio}) {
        if (rule_id(k) == id) return k;
    }
    return std::nullopt;
}

/// Shape of a (mixed) superposition rule: which component systems feed it and
/// how many constants select a solution of the target system.
struct MixedRule {
    RuleKind kind = RuleKind::Linear;
    long bernoulli_n = 2;        // Bernoulli only
    double pinney_c = 0.0;       // Pinney only
    std::size_t order = 2;       // Hierarchy only
    std::vector<std::size_t> component_dims;
    std::size_t constant_count = 0;
    std::size_t target_dim = 0;

    static MixedRule linear() { return {RuleKind::Linear, 0, 0.0, 0, {1, 1}, 1, 1}; }

    static MixedRule bernoulli(long n) {
        if (n == 1) throw DomainError("Bernoulli rule requires n != 1");
        return {RuleKind::Bernoulli, n, 0.0, 0, {1, 1}, 1, 1};
    }

    static MixedRule pinney(double c) { return {RuleKind::Pinney, 0, c, 0, {2, 2}, 2, 2}; }

    /// m = s companion solutions of dimension s, s-1 constants (k_s = 1).
    static MixedRule hierarchy(std::size_t s) {
        if (s < 2) throw DomainError("hierarchy rule requires s >= 2");
        return {RuleKind::Hierarchy, 0, 0.0, s, std::vector<std::size_t>(s, s), s - 1, s - 1};
    }

    static MixedRule riccati_cross_ratio() { return {RuleKind::RiccatiCrossRatio, 0, 0.0, 0, {1, 1, 1}, 1, 1}; }

    std::string_view id() const { return rule_id(kind); }
};

/// x = x1 + k x2.
inline double eval_linear_rule(double x1, double x2, double k) { return x1 + k * x2; }

/// x = (x1^{1-n} + k x2^{1-n})^{1/(1-n)}.
inline double eval_bernoulli_rule(double x1, double x2, double k, long n) {
    if (n == 1) throw DomainError("Bernoulli rule requires n != 1");
    const long e = 1 - n;
    auto ipow = [](double b, long p) {
        if (b == 0.0 && p < 0) throw DomainError("Bernoulli rule: negative power of zero");
        return std::pow(b, static_cast<double>(p));
    };
    const double base = ipow(x1, e) + k * ipow(x2, e);
    if (e == 1 || e == -1) return ipow(base, e);
    if (!(base > 0.0)) throw DomainError("Bernoulli rule: base must be positive for exponent 1/" + std::to_string(e));
    return std::pow(base, 1.0 / static_cast<double>(e));
}

/// Milne-Pinney rule from two oscillator solutions (x, p); returns (x, p).
inline std::array<double, 2> eval_pinney_rule(std::array<double, 2> xi1, std::array<double, 2> xi2, double k1, double k2, double c) {
    const auto [x1, p1] = xi1;
    const auto [x2, p2] = xi2;
    const double w = x1 * p2 - p1 * x2;
    if (w == 0.0) throw DegenerateWronskian();
    const double disc = 4.0 * k1 * k2 - c * w * w;
    if (disc < 0.0) throw RadicandNegative("Pinney rule: 4 k1 k2 - c W^2 < 0");
    const double root = std::sqrt(disc);
    const double bracket = k1 * x1 * x1 + k2 * x2 * x2 + root * x1 * x2;
    if (!(bracket > 0.0)) throw RadicandNegative("Pinney rule: non-positive inner radicand");
    const double sb = std::sqrt(bracket), aw = std::abs(w);
    const double x = std::sqrt(2.0) / aw * sb;
    // sqrt(k1 k2 - c (W/2)^2) equals root / 2.
    const double p = std::sqrt(2.0) * (k1 * x1 * p1 + k2 * x2 * p2 + 0.5 * root * (p1 * x2 + x1 * p2)) / (aw * sb);
    return {x, p};
}

/// Classical three-solution rule for the Riccati equation.
inline double eval_riccati_cross_ratio(double y1, double y2, double y3, double k) {
    if (y1 == y2 || y2 == y3 || y1 == y3) throw CoincidentSolutions();
    const double den = (y3 - y2) + k * (y1 - y3);
    if (den == 0.0) throw SingularDenominator("Riccati rule: vanishing denominator");
    return (y1 * (y3 - y2) + k * y2 * (y1 - y3)) / den;
}

/// The constant k selecting y in eval_riccati_cross_ratio; a first integral of
/// four copies of a Riccati equation.
inline double riccati_cross_ratio_constant(double y, double y1, double y2, double y3) {
    const double den = (y - y2) * (y1 - y3);
    if (den == 0.0) throw SingularDenominator("cross ratio: vanishing denominator");
    return (y1 - y) * (y3 - y2) / den;
}

/// Mixed rule of the order-s hierarchy member in terms of s companion solutions.
///
/// With x = sum_a k_a x_(a) (k_s = 1) the jet c_j = x^{(j)} satisfies
/// c_l / c_0 = P_l(y-jet); the y-jet is recovered triangularly since P_l has a
/// unit coefficient on y_{l-1}.
class HierarchyRule {
public:
    explicit HierarchyRule(std::size_t s) : s_(s) {
        if (s < 2) throw DomainError("hierarchy rule requires s >= 2");
        auto p = p_sequence(s);
        for (std::size_t l = 0; l <= s; ++l) {
            p_.push_back(p[l]);
            tails_.push_back(l == 0 ? p[0] : p[l] - DiffPoly::y(l - 1));
        }
    }

    std::size_t order() const noexcept { return s_; }

    /// jets[a] = (u^0, ..., u^{s-1}) of the a-th companion solution; k has s-1 entries.
    std::vector<double> evaluate(std::span<const std::vector<double>> jets, std::span<const double> k) const {
        check_jets(jets);
        if (k.size() != s_ - 1) throw DimensionMismatch("hierarchy rule needs " + std::to_string(s_ - 1) + " constants");
        std::vector<double> c(s_, 0.0);
        for (std::size_t j = 0; j < s_; ++j) {
            double v = jets[s_ - 1][j];
            for (std::size_t a = 0; a + 1 < s_; ++a) v += k[a] * jets[a][j];
            c[j] = v;
        }
        if (c[0] == 0.0) throw SingularDenominator("hierarchy rule: c0 = 0");
        std::vector<double> y;
        y.reserve(s_ - 1);
        for (std::size_t l = 1; l < s_; ++l) {
            const double z = c[l] / c[0];
            y.push_back(z - diff_eval(tails_[l], y, {}));
        }
        return y;
    }

    /// Constants k (k_s = 1) for which the rule at these jets yields the y-jet v0.
    std::vector<double> solve_constants(std::span<const std::vector<double>> jets, std::span<const double> v0) const {
        check_jets(jets);
        if (v0.size() != s_ - 1) throw DimensionMismatch("target jet must have " + std::to_string(s_ - 1) + " entries");
        const auto n = static_cast<Eigen::Index>(s_);
        Eigen::MatrixXd m(n, n);
        Eigen::VectorXd chi(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index a = 0; a < n; ++a) m(j, a) = jets[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
            chi(j) = diff_eval(p_[static_cast<std::size_t>(j)], v0, {});
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        if (!lu.isInvertible()) throw SingularJetMatrix();
        Eigen::VectorXd kappa = lu.solve(chi);
        const double last = kappa(n - 1);
        if (std::abs(last) <= 1e-14 * kappa.cwiseAbs().maxCoeff()) throw NonGenericNormalization();
        std::vector<double> k(s_ - 1);
        for (std::size_t a = 0; a + 1 < s_; ++a) k[a] = kappa(static_cast<Eigen::Index>(a)) / last;
        return k;
    }

private:
    void check_jets(std::span<const std::vector<double>> jets) const {
        if (jets.size() != s_) throw DimensionMismatch("hierarchy rule needs " + std::to_string(s_) + " jets");
        for (const auto& j : jets) {
            if (j.size() != s_) throw DimensionMismatch("each jet must have " + std::to_string(s_) + " entries");
        }
    }

    std::size_t s_;
    std::vector<DiffPoly> p_;
    std::vector<DiffPoly> tails_;  // P_l - y_{l-1}
};

inline std::vector<double> eval_hierarchy_rule(std::size_t s, std::span<const std::vector<double>> jets, std::span<const double> k) {
    return HierarchyRule(s).evaluate(jets, k);
}

inline std::vector<double> solve_hierarchy_constants(std::size_t s, std::span<const std::vector<double>> jets_at_t0, std::span<const double> v0) {
    return HierarchyRule(s).solve_constants(jets_at_t0, v0);
}

}  // namespace liesup
