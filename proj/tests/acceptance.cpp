// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "liesup/cli.hpp"
#include "liesup/poly_parser.hpp"
#include "liesup/verify.hpp"
#include "support.hpp"

using namespace liesup;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

TimeFunction fn(const char* s) { return parse_timefn(s); }

PolyVectorField field(std::vector<std::string> comps, const std::vector<std::string>& names) {
    std::vector<Poly> ps;
    for (const auto& c : comps) ps.push_back(parse_poly(c, names));
    return PolyVectorField(std::move(ps));
}

std::vector<PolyVectorField> recombine(const std::vector<PolyVectorField>& fs, std::mt19937_64& rng) {
    const std::size_t r = fs.size();
    std::vector<std::vector<Rational>> lower(r, std::vector<Rational>(r)), upper(r, std::vector<Rational>(r));
    for (std::size_t i = 0; i < r; ++i) {
        lower[i][i] = Rational(1);
        for (std::size_t j = 0; j < i; ++j) lower[i][j] = testing_support::random_rational(rng);
        Rational d;
        do d = testing_support::random_rational(rng);
        while (d.is_zero());
        upper[i][i] = d;
        for (std::size_t j = i + 1; j < r; ++j) upper[i][j] = testing_support::random_rational(rng);
    }
    std::vector<PolyVectorField> out;
    for (std::size_t i = 0; i < r; ++i) {
        auto f = PolyVectorField::zero(fs.front().dimension());
        for (std::size_t j = 0; j < r; ++j) {
            Rational m(0);
            for (std::size_t k = 0; k < r; ++k) m += lower[i][k] * upper[k][j];
            f += fs[j] * m;
        }
        out.push_back(std::move(f));
    }
    return out;
}

RuleCase hierarchy_case(std::vector<TimeFunction> b) {
    RuleCase rc;
    rc.rule = MixedRule::hierarchy(b.size());
    rc.coeffs = std::move(b);
    rc.cfg.rtol = 1e-10;
    return rc;
}

// Every rule report produced along the way, for the Lie-condition criterion.
std::vector<std::pair<std::string, VerificationReport>> reports;

VerificationReport run(const std::string& label, const RuleCase& rc, std::size_t trials, std::uint64_t seed) {
    auto rep = verify_rule_trials(rc, trials, seed);
    reports.emplace_back(label, rep);
    return rep;
}

bool clean(const VerificationReport& r) { return r.singular_trials == 0 && r.trials > 0; }

Outcome hierarchy_strings() {
    std::ostringstream o2, o3, err;
    bool ok = cli::cmd_hierarchy(2, o2, err) == cli::Ok && cli::cmd_hierarchy(3, o3, err) == cli::Ok;
    const std::string want2 = "y1 = " + parse_diffpoly("-b0 - b1*y0 - y0^2").to_string() + "\n";
    const std::string want3 = "y2 = " + parse_diffpoly("-3*y0*y1 - y0^3 - b0 - b1*y0 - b2*(y0^2 + y1)").to_string() + "\n";
    ok = ok && o2.str() == want2 && o3.str() == want3;
    return {ok, o2.str().substr(0, o2.str().size() - 1) + " | " + o3.str().substr(0, o3.str().size() - 1)};
}

Outcome closures() {
    const std::vector<std::string> y{"y"};
    const std::vector<PolyVectorField> sl2{field({"1"}, y), field({"y"}, y), field({"y^2"}, y)};
    const auto basis = closure(sl2);
    bool ok = basis.size() == 3;
    const auto sc = structure_constants(LieBasis::from_fields(sl2));
    // [d, y d] = d, [d, y^2 d] = 2 y d, [y d, y^2 d] = y^2 d
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t g = 0; g < 3; ++g) {
                Rational want(0);
                if (a == 0 && b == 1 && g == 0) want = Rational(1);
                if (a == 1 && b == 0 && g == 0) want = Rational(-1);
                if (a == 0 && b == 2 && g == 1) want = Rational(2);
                if (a == 2 && b == 0 && g == 1) want = Rational(-2);
                if (a == 1 && b == 2 && g == 2) want = Rational(1);
                if (a == 2 && b == 1 && g == 2) want = Rational(-1);
                ok = ok && sc(a, b, g) == want;
            }
    const Rational kdet = determinant(killing_form(sc));
    ok = ok && !kdet.is_zero();
    std::string dims;
    for (std::size_t s = 2; s <= 4; ++s) {
        const auto d = closure(linear_generators(s)).size();
        ok = ok && d == s * s;
        const auto z = center_dimension(structure_constants(gl_basis(s)));
        ok = ok && z == 1;
        dims += " gl" + std::to_string(s) + ":" + std::to_string(d) + "/z" + std::to_string(z);
    }
    return {ok, "sl2 dim " + std::to_string(basis.size()) + ", Killing det " + kdet.to_string() + "," + dims};
}

Outcome prolongation() {
    const bool ok = check_prolongation_identity(2024, 200);
    return {ok, "200 random pairs"};
}

Outcome bracket_relations() {
    std::size_t checked = 0;
    bool ok = true;
    for (std::size_t s = 2; s <= 4; ++s) {
        const auto delta = delta_field(s);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) {
                ok = ok && lie_bracket(gl_field(s, i, j), delta) == gl_field(s, (i + s - 1) % s, j) - gl_field(s, i, (j + 1) % s);
                ++checked;
            }
    }
    return {ok, std::to_string(checked) + " relations"};
}

Outcome riccati_s2() {
    auto rep = run("hierarchy s=2", hierarchy_case({fn("1 + 0.5*sin(t)"), fn("cos(t)")}), 20, 1);
    return {clean(rep) && rep.max_error <= 1e-6, "max error " + fmt("%.3g", rep.max_error) + ", rejections " + std::to_string(rep.rejections)};
}

Outcome riccati_s3() {
    auto rep = run("hierarchy s=3", hierarchy_case({fn("1 + 0.5*sin(t)"), fn("cos(t)"), fn("0.3")}), 20, 2);
    return {clean(rep) && rep.max_error <= 1e-5, "max error " + fmt("%.3g", rep.max_error) + ", rejections " + std::to_string(rep.rejections)};
}

Outcome roundtrip() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    std::size_t sets = 0;
    for (std::size_t s = 2; s <= 4; ++s) {
        HierarchyRule rule(s);
        std::size_t done = 0;
        while (done < 100) {
            std::vector<std::vector<double>> jets(s, std::vector<double>(s));
            Eigen::MatrixXd m(s, s);
            for (std::size_t a = 0; a < s; ++a)
                for (std::size_t j = 0; j < s; ++j) m(j, a) = jets[a][j] = u(rng);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
            const auto& sv = svd.singularValues();
            if (sv(0) / sv(sv.size() - 1) > 50) continue;
            std::vector<double> v0(s - 1);
            for (auto& v : v0) v = u(rng);
            auto back = rule.evaluate(jets, rule.solve_constants(jets, v0));
            for (std::size_t i = 0; i + 1 < s; ++i) worst = std::max(worst, std::abs(back[i] - v0[i]));
            ++done;
        }
        sets += done;
    }
    return {worst <= 1e-12, std::to_string(sets) + " jet sets, worst " + fmt("%.3g", worst)};
}

Outcome pinney() {
    bool ok = true;
    double err = 0, fd = 0, drift = 0;
    for (const char* omega : {"1", "1 + 0.1*sin(t)"}) {
        for (double c : {0.5, 1.0, 2.0}) {
            RuleCase rc;
            rc.rule = MixedRule::pinney(c);
            rc.omega = fn(omega);
            auto rep = run(std::string("pinney c=") + fmt("%g", c) + " omega=" + omega, rc, 20, 3);
            ok = ok && clean(rep) && rep.max_error <= 1e-6 && rep.max_fd_error <= 1e-5 && rep.max_drift <= 1e-8;
            err = std::max(err, rep.max_error);
            fd = std::max(fd, rep.max_fd_error);
            drift = std::max(drift, rep.max_drift);
        }
    }
    return {ok, "6 cases, max error " + fmt("%.3g", err) + ", fd " + fmt("%.3g", fd) + ", Wronskian drift " + fmt("%.3g", drift)};
}

Outcome bernoulli() {
    bool ok = true;
    double err = 0;
    for (long n : {2L, 3L}) {
        RuleCase rc;
        rc.rule = MixedRule::bernoulli(n);
        rc.a = fn("cos(t)");
        rc.b = fn("0.3");
        auto rep = run("bernoulli n=" + std::to_string(n), rc, 20, 4);
        ok = ok && clean(rep) && rep.max_error <= 1e-7;
        err = std::max(err, rep.max_error);
    }
    return {ok, "n=2,3, max error " + fmt("%.3g", err)};
}

Outcome linear() {
    RuleCase exact;
    exact.rule = MixedRule::linear();
    exact.a = fn("0");
    exact.b = fn("1");
    auto e = verify_rule_report(exact, TrialInput{{{0.0}, {1.0}}, {3.0}});
    reports.emplace_back("linear exact", e);
    RuleCase generic = exact;
    generic.a = fn("sin(t)");
    generic.b = fn("cos(2*t) + t");
    auto g = run("linear generic", generic, 20, 5);
    const bool ok = clean(e) && e.max_error <= 1e-12 && clean(g) && g.max_error <= 1e-8;
    return {ok, "exact " + fmt("%.3g", e.max_error) + ", generic " + fmt("%.3g", g.max_error)};
}

Outcome drift() {
    RuleCase ric;
    ric.rule = MixedRule::riccati_cross_ratio();
    ric.coeffs = {fn("1"), fn("0")};
    auto r = run("riccati cross ratio", ric, 20, 6);
    RuleCase osc;
    osc.rule = MixedRule::pinney(1.0);
    osc.omega = fn("1 + 0.1*sin(t)");
    auto w = run("oscillator Wronskian", osc, 20, 7);
    const bool ok = clean(r) && clean(w) && r.max_drift <= 1e-7 && w.max_drift <= 1e-7;
    return {ok, "cross ratio " + fmt("%.3g", r.max_drift) + ", Wronskian " + fmt("%.3g", w.max_drift)};
}

Outcome lie_condition() {
    bool ok = !reports.empty();
    std::string dims;
    for (const auto& [label, rep] : reports) {
        std::size_t total = 0;
        for (auto d : rep.component_dims) total += d;
        ok = ok && rep.lie_condition && rep.closure_dim <= total;
        if (rep.companion_closure_dim) ok = ok && *rep.companion_closure_dim <= total;
        if (label.starts_with("pinney") && label != "pinney c=1 omega=1") continue;
        dims += " " + label + ": " + std::to_string(rep.closure_dim);
        if (rep.companion_closure_dim) dims += "/" + std::to_string(*rep.companion_closure_dim);
        dims += " <= " + std::to_string(total) + ";";
    }
    return {ok, std::to_string(reports.size()) + " reports;" + dims};
}

Outcome modular() {
    const std::vector<std::string> xy{"x", "y"}, y{"y"};
    const std::vector<PolyVectorField> good{field({"x", "0"}, xy), field({"0", "y"}, xy)};
    const std::vector<PolyVectorField> bad{field({"1"}, y), field({"y"}, y)};
    bool ok = is_modular_basis(good) && !is_modular_basis(bad);
    std::mt19937_64 rng(13);
    for (std::uint64_t t = 0; t < 50; ++t) ok = ok && is_modular_basis(recombine(good, rng), 20, t);
    return {ok, "examples true/false, 50 re-basings"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"hierarchy members s=2,3", hierarchy_strings},
        {"closure dimensions and diagnostics", closures},
        {"prolongation commutes with bracket", prolongation},
        {"gl(s) bracket relations with Delta", bracket_relations},
        {"Riccati mixed rule s=2", riccati_s2},
        {"second-order Riccati rule s=3", riccati_s3},
        {"hierarchy constant round trip", roundtrip},
        {"Pinney rule", pinney},
        {"Bernoulli rule", bernoulli},
        {"linear rule", linear},
        {"first-integral drift", drift},
        {"extended Lie condition", lie_condition},
        {"modular bases", modular},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s [%zu] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), secs);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
