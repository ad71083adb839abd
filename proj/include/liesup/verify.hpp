#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "integrate.hpp"
#include "liealg.hpp"
#include "superpose.hpp"
#include "systems.hpp"

namespace liesup {

/// A rule together with the coefficient functions of its component systems.
struct RuleCase {
    MixedRule rule = MixedRule::linear();
    TimeFunction a{Rational(0)};      // linear, bernoulli
    TimeFunction b{Rational(0)};      // linear, bernoulli
    TimeFunction omega{Rational(1)};  // pinney
    std::vector<TimeFunction> coeffs;  // hierarchy: b_0..b_{s-1}; riccati-cross-ratio: b0, b1
    double t0 = 0.0;
    double t1 = 1.0;
    IntegratorConfig cfg;
    double near_singular_bound = 30.0;  // trials whose target leaves this max-norm ball are rejected

    void validate() const {
        if (!(t0 < t1)) throw DomainError("rule case needs t0 < t1");
        if (!(near_singular_bound > 0.0)) throw DomainError("near-singular bound must be positive");
        cfg.validate();
        switch (rule.kind) {
            case RuleKind::Hierarchy:
                if (coeffs.size() != rule.order) {
                    throw DimensionMismatch("hierarchy rule of order " + std::to_string(rule.order) + " needs " +
                                            std::to_string(rule.order) + " coefficient functions, got " + std::to_string(coeffs.size()));
                }
                break;
            case RuleKind::RiccatiCrossRatio:
                if (coeffs.size() != 2) throw DimensionMismatch("Riccati rule needs coefficient functions b0, b1");
                break;
            case RuleKind::Bernoulli:
                if (rule.bernoulli_n < 0 || rule.bernoulli_n == 1) throw DomainError("Bernoulli rule needs integer n >= 0, n != 1");
                break;
            default:
                break;
        }
    }
};

/// Initial states of the component systems (at t0) and the rule constants.
struct TrialInput {
    std::vector<std::vector<double>> components;
    std::vector<double> constants;
};

struct TrialRecord {
    TrialInput input;
    double max_error = 0.0;        // formula vs direct integration, max norm over the grid
    double max_drift = 0.0;        // first integral of the joint flow
    double max_fd_error = 0.0;     // Pinney: d/dt of the x-output vs the p-output
    double roundtrip_error = 0.0;  // Hierarchy: constants re-solved at t0
    std::optional<double> constant_sensitivity;  // separation from a perturbed constant
    std::size_t grid_points = 0;
    std::size_t rejections = 0;
    bool singular = false;
    std::string reason;
};

struct VerificationReport {
    std::string rule;
    std::size_t trials = 0;
    double max_error = 0.0;
    double max_drift = 0.0;
    double max_fd_error = 0.0;
    double max_roundtrip_error = 0.0;
    std::optional<double> min_constant_sensitivity;
    std::size_t singular_trials = 0;
    std::size_t rejections = 0;
    std::size_t closure_dim = 0;
    std::optional<std::size_t> companion_closure_dim;  // hierarchy: closure of the companion system, s^2
    std::vector<std::size_t> component_dims;
    bool lie_condition = false;
    std::vector<TrialRecord> records;
};

namespace detail {

inline std::vector<TDVectorField> component_systems(const RuleCase& rc) {
    switch (rc.rule.kind) {
        case RuleKind::Linear:
            return {systems::linear_affine(rc.a, rc.b), systems::linear_homogeneous(rc.a)};
        case RuleKind::Bernoulli:
            return {systems::bernoulli(rc.a, rc.b, rc.rule.bernoulli_n), systems::linear_homogeneous(rc.a)};
        case RuleKind::Pinney:
            return {systems::oscillator(rc.omega), systems::oscillator(rc.omega)};
        case RuleKind::Hierarchy: {
            auto comp = companion_linear_system(LinearODESpec{rc.rule.order, rc.coeffs});
            return std::vector<TDVectorField>(rc.rule.order, comp);
        }
        case RuleKind::RiccatiCrossRatio: {
            auto r = systems::riccati(rc.coeffs[0], rc.coeffs[1]);
            return {r, r, r};
        }
    }
    return {};
}

inline CallableRHS target_system(const RuleCase& rc) {
    switch (rc.rule.kind) {
        case RuleKind::Linear: return CallableRHS(systems::linear_affine(rc.a, rc.b));
        case RuleKind::Bernoulli: return CallableRHS(systems::bernoulli(rc.a, rc.b, rc.rule.bernoulli_n));
        case RuleKind::Pinney: return systems::pinney(rc.omega, rc.rule.pinney_c);
        case RuleKind::Hierarchy: return CallableRHS(member_first_order_system(generate_member(rc.rule.order), rc.coeffs));
        case RuleKind::RiccatiCrossRatio: return CallableRHS(systems::riccati(rc.coeffs[0], rc.coeffs[1]));
    }
    throw DomainError("unknown rule");
}

// Evaluates a rule on the joint component state.
class RuleEvaluator {
public:
    explicit RuleEvaluator(const MixedRule& rule)
        : rule_(rule), hierarchy_(rule.kind == RuleKind::Hierarchy ? std::optional<HierarchyRule>(HierarchyRule(rule.order)) : std::nullopt) {}

    std::vector<double> operator()(std::span<const double> joint, std::span<const double> k) const {
        switch (rule_.kind) {
            case RuleKind::Linear: return {eval_linear_rule(joint[0], joint[1], k[0])};
            case RuleKind::Bernoulli: return {eval_bernoulli_rule(joint[0], joint[1], k[0], rule_.bernoulli_n)};
            case RuleKind::Pinney: {
                auto r = eval_pinney_rule({joint[0], joint[1]}, {joint[2], joint[3]}, k[0], k[1], rule_.pinney_c);
                return {r[0], r[1]};
            }
            case RuleKind::Hierarchy: return hierarchy_->evaluate(jets(joint), k);
            case RuleKind::RiccatiCrossRatio: return {eval_riccati_cross_ratio(joint[0], joint[1], joint[2], k[0])};
        }
        return {};
    }

    /// First integral of the joint flow (components, then target) that the rule's constants realize.
    std::vector<double> invariant(std::span<const double> joint, std::span<const double> target) const {
        switch (rule_.kind) {
            case RuleKind::Linear: return {(target[0] - joint[0]) / joint[1]};
            case RuleKind::Bernoulli: {
                const double e = static_cast<double>(1 - rule_.bernoulli_n);
                return {(std::pow(target[0], e) - std::pow(joint[0], e)) / std::pow(joint[1], e)};
            }
            case RuleKind::Pinney: return {joint[0] * joint[3] - joint[1] * joint[2]};
            case RuleKind::Hierarchy: return hierarchy_->solve_constants(jets(joint), target);
            case RuleKind::RiccatiCrossRatio: return {riccati_cross_ratio_constant(target[0], joint[0], joint[1], joint[2])};
        }
        return {};
    }

    const std::optional<HierarchyRule>& hierarchy() const { return hierarchy_; }

    std::vector<std::vector<double>> jets(std::span<const double> joint) const {
        const std::size_t s = rule_.order;
        std::vector<std::vector<double>> j(s);
        for (std::size_t a = 0; a < s; ++a) j[a].assign(joint.begin() + static_cast<std::ptrdiff_t>(a * s), joint.begin() + static_cast<std::ptrdiff_t>((a + 1) * s));
        return j;
    }

private:
    MixedRule rule_;
    std::optional<HierarchyRule> hierarchy_;
};

inline std::vector<double> concat(const std::vector<std::vector<double>>& parts) {
    std::vector<double> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline TrialInput sample_trial(const RuleCase& rc, std::mt19937_64& rng) {
    auto u = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    TrialInput in;
    switch (rc.rule.kind) {
        case RuleKind::Linear:
            in.components = {{u(-1, 1)}, {u(0.5, 1.5)}};
            in.constants = {u(-2, 2)};
            break;
        case RuleKind::Bernoulli:
            in.components = {{u(0.3, 1.0)}, {u(0.3, 1.0)}};
            in.constants = {u(0.2, 2.0)};
            break;
        case RuleKind::Pinney: {
            std::vector<double> xi1{u(0.5, 1.5), u(-0.5, 0.5)}, xi2{u(-0.5, 0.5), u(0.5, 1.5)};
            const double w = xi1[0] * xi2[1] - xi1[1] * xi2[0];
            double k1 = 0, k2 = 0;
            do {
                k1 = u(0.5, 2.0);
                k2 = u(0.5, 2.0);
            } while (4 * k1 * k2 - rc.rule.pinney_c * w * w <= 0.0);
            in.components = {xi1, xi2};
            in.constants = {k1, k2};
            break;
        }
        case RuleKind::Hierarchy: {
            const std::size_t s = rc.rule.order;
            for (std::size_t a = 0; a < s; ++a) {
                std::vector<double> jet(s);
                for (auto& v : jet) v = u(-1, 1);
                in.components.push_back(std::move(jet));
            }
            for (std::size_t a = 0; a + 1 < s; ++a) in.constants.push_back(u(-1, 1));
            break;
        }
        case RuleKind::RiccatiCrossRatio:
            in.components = {{u(-1.0, -0.4)}, {u(-0.2, 0.2)}, {u(0.4, 1.0)}};
            in.constants = {u(-2, 2)};
            break;
    }
    return in;
}

// Fields whose closure bounds the target's algebra: the target's own decomposition
// where it is polynomial, otherwise the component system's.
inline std::vector<PolyVectorField> relevant_generators(const RuleCase& rc) {
    switch (rc.rule.kind) {
        case RuleKind::Linear: return systems::linear_affine(rc.a, rc.b).fields();
        case RuleKind::Bernoulli: return systems::bernoulli(rc.a, rc.b, rc.rule.bernoulli_n).fields();
        case RuleKind::Pinney: return systems::oscillator(rc.omega).fields();
        case RuleKind::Hierarchy: return member_generators(generate_member(rc.rule.order));
        case RuleKind::RiccatiCrossRatio: return member_generators(generate_member(2));
    }
    return {};
}

inline std::optional<std::vector<double>> perturbed_constants(const RuleCase& rc, const std::vector<double>& k) {
    switch (rc.rule.kind) {
        case RuleKind::Linear:
        case RuleKind::Hierarchy: {
            auto p = k;
            p[0] += 0.5;
            return p;
        }
        case RuleKind::Bernoulli: return std::vector<double>{k[0] * 1.5};
        default: return std::nullopt;
    }
}

}  // namespace detail

/// One forward trial: integrate the components jointly, evaluate the rule on the
/// target's grid, and compare with direct integration of the target system.
/// Singular integrations or rule-domain failures mark the record singular.
inline TrialRecord verify_rule(const RuleCase& rc, const TrialInput& input) {
    rc.validate();
    const auto& rule = rc.rule;
    if (input.components.size() != rule.component_dims.size()) throw DimensionMismatch("wrong number of component initial states");
    for (std::size_t a = 0; a < input.components.size(); ++a) {
        if (input.components[a].size() != rule.component_dims[a]) {
            throw DimensionMismatch("component " + std::to_string(a) + " initial state should have dimension " + std::to_string(rule.component_dims[a]));
        }
    }
    if (input.constants.size() != rule.constant_count) throw DimensionMismatch("rule needs " + std::to_string(rule.constant_count) + " constants");

    TrialRecord rec;
    rec.input = input;
    auto fail = [&rec](std::string why) {
        rec.singular = true;
        rec.reason = std::move(why);
        return rec;
    };

    const detail::RuleEvaluator phi(rule);
    auto components = direct_product(detail::component_systems(rc));
    const std::vector<double> joint_init = detail::concat(input.components);

    std::vector<double> target0;
    try {
        target0 = phi(joint_init, input.constants);
    } catch (const DomainError& e) {
        return fail(std::string("rule undefined at t0: ") + e.what());
    }

    if (rule.kind == RuleKind::Hierarchy) {
        try {
            auto k = phi.hierarchy()->solve_constants(phi.jets(joint_init), target0);
            auto back = phi(joint_init, k);
            rec.roundtrip_error = detail::max_abs_diff(back, target0);
        } catch (const DomainError& e) {
            return fail(std::string("constant round-trip failed: ") + e.what());
        }
    }

    const auto target_rhs = detail::target_system(rc);
    Trajectory target = integrate(target_rhs, target0, rc.t0, rc.t1, rc.cfg);
    if (!target.completed()) {
        return fail("target integration stopped" + (target.event() ? ": " + target.event()->detail : std::string()));
    }
    Trajectory joint = integrate_on_grid(components, joint_init, target.times(), rc.cfg);
    if (!joint.completed()) {
        return fail("component integration stopped" + (joint.event() ? ": " + joint.event()->detail : std::string()));
    }
    rec.grid_points = target.size();
    for (std::size_t r = 0; r < target.size(); ++r) {
        for (double v : target.state(r)) {
            if (std::abs(v) > rc.near_singular_bound) {
                return fail("target passes near a singularity at t = " + std::to_string(target.time(r)));
            }
        }
    }

    auto perturbed = detail::perturbed_constants(rc, input.constants);
    double sensitivity = 0.0;
    try {
        const auto psi0 = phi.invariant(joint.state(0), target.state(0));
        for (std::size_t r = 0; r < target.size(); ++r) {
            auto js = joint.state(r);
            auto formula = phi(js, input.constants);
            rec.max_error = std::max(rec.max_error, detail::max_abs_diff(formula, target.state(r)));
            rec.max_drift = std::max(rec.max_drift, detail::max_abs_diff(phi.invariant(js, target.state(r)), psi0));
            if (perturbed) {
                try {
                    sensitivity = std::max(sensitivity, detail::max_abs_diff(phi(js, *perturbed), formula));
                } catch (const DomainError&) {
                }
            }
            if (rule.kind == RuleKind::Pinney) {
                // Central difference of the x-output along the component flow.
                const double h = 1e-5;
                auto vel = eval_rhs(components, target.time(r), js);
                std::vector<double> fwd(js.begin(), js.end()), bwd(js.begin(), js.end());
                for (std::size_t i = 0; i < fwd.size(); ++i) {
                    fwd[i] += h * vel[i];
                    bwd[i] -= h * vel[i];
                }
                const double dxdt = (phi(fwd, input.constants)[0] - phi(bwd, input.constants)[0]) / (2 * h);
                rec.max_fd_error = std::max(rec.max_fd_error, std::abs(dxdt - formula[1]));
            }
        }
    } catch (const DomainError& e) {
        return fail(std::string("rule left its domain: ") + e.what());
    }
    if (perturbed) rec.constant_sensitivity = sensitivity;
    return rec;
}

/// Closure dimension of the rule's relevant algebra and the extended Lie condition.
inline std::pair<std::size_t, bool> rule_lie_condition(const RuleCase& rc, std::size_t cap = 64) {
    auto basis = closure(detail::relevant_generators(rc), cap);
    return {basis.size(), check_lie_condition(basis.size(), rc.rule.component_dims)};
}

namespace detail {

inline VerificationReport start_report(const RuleCase& rc) {
    VerificationReport rep;
    rep.rule = std::string(rc.rule.id());
    rep.component_dims = rc.rule.component_dims;
    std::tie(rep.closure_dim, rep.lie_condition) = rule_lie_condition(rc);
    if (rc.rule.kind == RuleKind::Hierarchy) {
        const std::size_t d = closure(linear_generators(rc.rule.order)).size();
        rep.companion_closure_dim = d;
        rep.lie_condition = rep.lie_condition && check_lie_condition(d, rc.rule.component_dims);
    }
    return rep;
}

inline void absorb(VerificationReport& rep, TrialRecord rec) {
    ++rep.trials;
    rep.rejections += rec.rejections;
    if (rec.singular) {
        ++rep.singular_trials;
    } else {
        rep.max_error = std::max(rep.max_error, rec.max_error);
        rep.max_drift = std::max(rep.max_drift, rec.max_drift);
        rep.max_fd_error = std::max(rep.max_fd_error, rec.max_fd_error);
        rep.max_roundtrip_error = std::max(rep.max_roundtrip_error, rec.roundtrip_error);
        if (rec.constant_sensitivity) {
            rep.min_constant_sensitivity =
                rep.min_constant_sensitivity ? std::min(*rep.min_constant_sensitivity, *rec.constant_sensitivity) : *rec.constant_sensitivity;
        }
    }
    rep.records.push_back(std::move(rec));
}

}  // namespace detail

/// Report for a single trial with explicit initial states and constants.
inline VerificationReport verify_rule_report(const RuleCase& rc, const TrialInput& input) {
    auto rep = detail::start_report(rc);
    detail::absorb(rep, verify_rule(rc, input));
    return rep;
}

/// Seeded trials with reject-and-resample of inputs whose rule or integration
/// hits a singularity on the span; rejections are counted in the report.
inline VerificationReport verify_rule_trials(const RuleCase& rc, std::size_t trials, std::uint64_t seed, std::size_t max_attempts = 50) {
    rc.validate();
    auto rep = detail::start_report(rc);
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        TrialRecord rec;
        std::size_t rejected = 0;
        for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
            rec = verify_rule(rc, detail::sample_trial(rc, rng));
            if (!rec.singular) break;
            ++rejected;
        }
        rec.rejections = rec.singular ? rejected - 1 : rejected;
        detail::absorb(rep, std::move(rec));
    }
    return rep;
}

/// Random polynomial field with small rational coefficients.
inline PolyVectorField random_poly_field(std::size_t n, std::uint32_t max_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> terms(0, 4), num(-5, 5), den(1, 4);
    std::uniform_int_distribution<std::uint32_t> deg(0, max_degree), var(0, static_cast<std::uint32_t>(n - 1));
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < n; ++i) {
        Poly p(n);
        const int count = terms(rng);
        for (int k = 0; k < count; ++k) {
            Monomial m(n, 0);
            const std::uint32_t d = deg(rng);
            for (std::uint32_t e = 0; e < d; ++e) ++m[var(rng)];
            p.add_term(m, Rational(num(rng), den(rng)));
        }
        comps.push_back(std::move(p));
    }
    return PolyVectorField(std::move(comps));
}

/// Checks that diagonal prolongation commutes with the bracket on seeded random
/// pairs (dimension <= 3, degree <= 3, copies in {2, 3}).
inline bool check_prolongation_identity(std::uint64_t seed, std::size_t trials) {
    if (trials == 0) throw DomainError("check_prolongation_identity needs at least one trial");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim(1, 3), copies(2, 3);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = dim(rng), m = copies(rng);
        auto x = random_poly_field(n, 3, rng);
        auto y = random_poly_field(n, 3, rng);
        if (diagonal_prolong(lie_bracket(x, y), m) != lie_bracket(diagonal_prolong(x, m), diagonal_prolong(y, m))) return false;
    }
    return true;
}

}  // namespace liesup
