#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "document.hpp"
#include "verify.hpp"

namespace liesup {

/// A suite item's outcome: the item as written, what was measured, and whether it passed.
struct ItemResult {
    doc::Json item;
    doc::Json measured;
    bool pass = false;
};

struct SuiteReport {
    std::vector<ItemResult> items;

    bool all_pass() const {
        for (const auto& r : items) {
            if (!r.pass) return false;
        }
        return true;
    }

    doc::Json to_json() const {
        doc::Json arr = doc::Json::array();
        for (const auto& r : items) {
            doc::Json j = r.item;
            j["measured"] = r.measured;
            j["pass"] = r.pass;
            arr.push_back(std::move(j));
        }
        return doc::Json{{"items", arr}, {"all_pass", all_pass()}};
    }
};

inline Method parse_method(std::string_view s) {
    if (s == "rkf45") return Method::RKF45;
    if (s == "rk4") return Method::RK4Fixed;
    throw DomainError("unknown method '" + std::string(s) + "' (expected rk4 or rkf45)");
}

inline const char* method_name(Method m) { return m == Method::RKF45 ? "rkf45" : "rk4"; }

/// Integrator settings from optional keys rtol, atol, step, method.
inline IntegratorConfig parse_integrator(const doc::Json& p, const std::string& path) {
    using namespace doc;
    IntegratorConfig cfg;
    if (p.contains("rtol")) cfg.rtol = as_number(p["rtol"], child(path, "rtol"));
    if (p.contains("atol")) cfg.atol = as_number(p["atol"], child(path, "atol"));
    if (p.contains("step")) cfg.step = as_number(p["step"], child(path, "step"));
    if (p.contains("method")) {
        try {
            cfg.method = parse_method(as_string(p["method"], child(path, "method")));
        } catch (const DomainError& e) {
            throw ValidationError(child(path, "method"), e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ValidationError(path, e.what());
    }
    return cfg;
}

/// Rule and coefficient functions from a rule item's parameters.
inline RuleCase parse_rule_case(const doc::Json& p, const std::string& path) {
    using namespace doc;
    RuleCase rc;
    const std::string rpath = child(path, "rule");
    const auto kind = parse_rule_id(as_string(require(p, "rule", path), rpath));
    if (!kind) throw ValidationError(rpath, "unknown rule id");
    const std::string cpath = child(path, "coefficients");
    const Json empty = Json::object();
    const Json& co = p.contains("coefficients") ? p["coefficients"] : empty;
    auto fn = [&](const char* key, const char* fallback) {
        return co.contains(key) ? as_timefn(co[key], child(cpath, key)) : parse_timefn(fallback);
    };
    try {
        switch (*kind) {
            case RuleKind::Linear:
                rc.rule = MixedRule::linear();
                rc.a = fn("a", "0");
                rc.b = fn("b", "1");
                break;
            case RuleKind::Bernoulli: {
                const auto n = as_integer(require(p, "n", path), child(path, "n"));
                if (n < 0 || n == 1 || n > 64) throw ValidationError(child(path, "n"), "n must be an integer in [0, 64] other than 1");
                rc.rule = MixedRule::bernoulli(static_cast<long>(n));
                rc.a = fn("a", "0");
                rc.b = fn("b", "1");
                break;
            }
            case RuleKind::Pinney:
                rc.rule = MixedRule::pinney(as_number(require(p, "c", path), child(path, "c")));
                rc.omega = fn("omega", "1");
                break;
            case RuleKind::Hierarchy: {
                const auto s = as_count(require(p, "order", path), child(path, "order"));
                if (s < 2 || s > 8) throw ValidationError(child(path, "order"), "order must be in [2, 8]");
                rc.rule = MixedRule::hierarchy(s);
                rc.coeffs = as_timefns(require(co, "b", cpath), child(cpath, "b"));
                if (rc.coeffs.size() != s) throw ValidationError(child(cpath, "b"), "expected " + std::to_string(s) + " coefficient functions");
                break;
            }
            case RuleKind::RiccatiCrossRatio:
                rc.rule = MixedRule::riccati_cross_ratio();
                rc.coeffs = {fn("b0", "1"), fn("b1", "0")};
                break;
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(path, e.what());
    }
    if (p.contains("tspan")) {
        const auto span = as_numbers(p["tspan"], child(path, "tspan"));
        if (span.size() != 2 || !(span[0] < span[1])) throw ValidationError(child(path, "tspan"), "expected [t0, t1] with t0 < t1");
        rc.t0 = span[0];
        rc.t1 = span[1];
    }
    if (p.contains("near_singular_bound")) {
        rc.near_singular_bound = as_number(p["near_singular_bound"], child(path, "near_singular_bound"));
        if (!(rc.near_singular_bound > 0)) throw ValidationError(child(path, "near_singular_bound"), "must be positive");
    }
    rc.cfg = parse_integrator(p, path);
    return rc;
}

inline TrialInput parse_trial_input(const doc::Json& j, const RuleCase& rc, const std::string& path) {
    using namespace doc;
    TrialInput in;
    const auto& comps = require_array(j, "components", path);
    const std::string cpath = child(path, "components");
    if (comps.size() != rc.rule.component_dims.size()) {
        throw ValidationError(cpath, "rule '" + std::string(rc.rule.id()) + "' takes " + std::to_string(rc.rule.component_dims.size()) + " components");
    }
    for (std::size_t a = 0; a < comps.size(); ++a) {
        in.components.push_back(as_numbers(comps[a], child(cpath, a)));
        if (in.components.back().size() != rc.rule.component_dims[a]) {
            throw ValidationError(child(cpath, a), "expected dimension " + std::to_string(rc.rule.component_dims[a]));
        }
    }
    in.constants = as_numbers(require(j, "constants", path), child(path, "constants"));
    if (in.constants.size() != rc.rule.constant_count) {
        throw ValidationError(child(path, "constants"), "expected " + std::to_string(rc.rule.constant_count) + " constants");
    }
    return in;
}

inline doc::Json report_json(const VerificationReport& r) {
    doc::Json j;
    j["rule"] = r.rule;
    j["trials"] = r.trials;
    j["max_error"] = r.max_error;
    j["max_drift"] = r.max_drift;
    if (r.rule == "pinney") j["max_fd_error"] = r.max_fd_error;
    if (r.rule == "hierarchy") j["max_roundtrip_error"] = r.max_roundtrip_error;
    if (r.min_constant_sensitivity) j["min_constant_sensitivity"] = *r.min_constant_sensitivity;
    j["singular_trials"] = r.singular_trials;
    j["rejections"] = r.rejections;
    j["closure_dim"] = r.closure_dim;
    if (r.companion_closure_dim) j["companion_closure_dim"] = *r.companion_closure_dim;
    j["component_dims"] = r.component_dims;
    j["lie_condition"] = r.lie_condition;
    doc::Json recs = doc::Json::array();
    for (const auto& t : r.records) {
        doc::Json rj{{"max_error", t.max_error}, {"max_drift", t.max_drift}, {"grid_points", t.grid_points}, {"rejections", t.rejections}};
        if (t.singular) {
            rj["singular"] = true;
            rj["reason"] = t.reason;
        }
        recs.push_back(std::move(rj));
    }
    j["records"] = recs;
    return j;
}

namespace detail {

// Comparisons against tolerances are strict: a measured value passes when it is below the bound.
inline bool below(double measured, double bound) { return measured < bound; }

using ItemRunner = std::function<ItemResult()>;

inline std::optional<double> optional_number(const doc::Json& p, const char* key, const std::string& path) {
    if (!p.contains(key)) return std::nullopt;
    return doc::as_number(p[key], doc::child(path, key));
}

inline std::vector<PolyVectorField> parse_generators(const doc::Json& p, const std::string& path) {
    using namespace doc;
    if (p.contains("generators")) {
        const std::string g = as_string(p["generators"], child(path, "generators"));
        const auto s = as_count(require(p, "order", path), child(path, "order"));
        if (s < 2 || s > 8) throw ValidationError(child(path, "order"), "order must be in [2, 8]");
        if (g == "linear") return linear_generators(s);
        if (g == "gl") return gl_basis(s).fields();
        if (g == "member") return member_generators(generate_member(s));
        throw ValidationError(child(path, "generators"), "expected linear, gl or member");
    }
    const auto& fields = require_array(p, "fields", path);
    if (fields.empty()) throw ValidationError(child(path, "fields"), "at least one generator is required");
    const std::string fpath = child(path, "fields");
    if (!fields[0].is_array()) throw ValidationError(child(fpath, 0), "expected a list of component polynomials");
    const auto names = variable_names(p, fields[0].size(), path);
    std::vector<PolyVectorField> out;
    for (std::size_t i = 0; i < fields.size(); ++i) out.push_back(as_field(fields[i], names, child(fpath, i)));
    return out;
}

inline ItemRunner plan_item(const doc::Json& item, const std::string& path) {
    using namespace doc;
    const std::string kpath = child(path, "kind");
    const std::string kind = as_string(require(item, "kind", path), kpath);
    const Json empty = Json::object();
    const Json& p = item.contains("parameters") ? item["parameters"] : empty;
    const std::string ppath = child(path, "parameters");
    if (!p.is_object()) throw ValidationError(ppath, "expected an object");
    const std::uint64_t seed = item.contains("seed") ? static_cast<std::uint64_t>(as_count(item["seed"], child(path, "seed"))) : 0;
    const std::optional<double> tolerance = optional_number(item, "tolerance", path);

    if (kind == "closure") {
        auto gens = parse_generators(p, ppath);
        const std::size_t cap = p.contains("cap") ? as_count(p["cap"], child(ppath, "cap")) : 64;
        std::optional<std::size_t> expected;
        if (p.contains("expected_dimension")) expected = as_count(p["expected_dimension"], child(ppath, "expected_dimension"));
        return [item, gens, cap, expected] {
            ItemResult r{item, Json::object(), false};
            try {
                auto basis = closure(gens, cap);
                auto sc = structure_constants(basis);
                r.measured["dimension"] = basis.size();
                r.measured["killing_determinant"] = determinant(killing_form(sc)).to_string();
                r.measured["center_dimension"] = center_dimension(sc);
                r.pass = !expected || basis.size() == *expected;
            } catch (const CapExceeded& e) {
                r.measured["error"] = e.what();
            }
            return r;
        };
    }
    if (kind == "prolongation") {
        const std::size_t trials = p.contains("trials") ? as_count(p["trials"], child(ppath, "trials")) : 200;
        if (trials == 0) throw ValidationError(child(ppath, "trials"), "must be at least 1");
        return [item, seed, trials] {
            const bool ok = check_prolongation_identity(seed, trials);
            return ItemResult{item, Json{{"trials", trials}, {"identity_holds", ok}}, ok};
        };
    }
    if (kind == "rule" || kind == "drift") {
        if (!tolerance) throw ValidationError(child(path, "tolerance"), "missing required key");
        RuleCase rc = parse_rule_case(p, ppath);
        std::optional<TrialInput> input;
        if (p.contains("initial")) input = parse_trial_input(p["initial"], rc, child(ppath, "initial"));
        const std::size_t trials = p.contains("trials") ? as_count(p["trials"], child(ppath, "trials")) : 20;
        if (!input && trials == 0) throw ValidationError(child(ppath, "trials"), "must be at least 1");
        const auto drift_tol = optional_number(p, "drift_tolerance", ppath);
        const auto fd_tol = optional_number(p, "fd_tolerance", ppath);
        const auto rt_tol = optional_number(p, "roundtrip_tolerance", ppath);
        const auto sens_floor = optional_number(p, "sensitivity_floor", ppath);
        const bool drift_item = kind == "drift";
        const double tol = *tolerance;
        return [=] {
            auto rep = input ? verify_rule_report(rc, *input) : verify_rule_trials(rc, trials, seed);
            bool ok = rep.singular_trials == 0 && rep.lie_condition;
            ok = ok && below(drift_item ? rep.max_drift : rep.max_error, tol);
            if (drift_tol) ok = ok && below(rep.max_drift, *drift_tol);
            if (fd_tol) ok = ok && below(rep.max_fd_error, *fd_tol);
            if (rt_tol) ok = ok && below(rep.max_roundtrip_error, *rt_tol);
            if (sens_floor) ok = ok && rep.min_constant_sensitivity && *rep.min_constant_sensitivity > *sens_floor;
            return ItemResult{item, report_json(rep), ok};
        };
    }
    throw ValidationError(kpath, "unknown item kind '" + kind + "' (expected closure, rule, drift or prolongation)");
}

}  // namespace detail

/// Validates every item first (all offending paths are reported together), then runs them in order.
inline SuiteReport run_suite(const doc::Json& suite) {
    using namespace doc;
    const auto& items = require_array(suite, "items", "");
    std::vector<detail::ItemRunner> plan;
    std::vector<std::string> problems;
    std::string first_path;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string path = child(std::string("items"), i);
        try {
            plan.push_back(detail::plan_item(items[i], path));
        } catch (const ValidationError& e) {
            if (problems.empty()) first_path = e.path();
            problems.emplace_back(e.what());
        }
    }
    if (!problems.empty()) {
        std::string msg = problems.front();
        for (std::size_t i = 1; i < problems.size(); ++i) msg += "\n" + problems[i];
        throw ValidationError(first_path, msg.substr(first_path.size() + 2));
    }
    SuiteReport rep;
    for (auto& run : plan) rep.items.push_back(run());
    return rep;
}

}  // namespace liesup
