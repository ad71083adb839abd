// Builds the Riccati equation from the hierarchy, computes its Vessiot-Guldberg
// algebra, and checks the mixed superposition rule against direct integration.
#include <cstdio>

#include "liesup/verify.hpp"

int main() {
    using namespace liesup;

    const auto member = generate_member(2);
    std::printf("%s\n", member.to_string().c_str());

    const auto basis = closure(member_generators(member));
    const auto sc = structure_constants(basis);
    std::printf("closure dimension %zu, Killing determinant %s\n", basis.size(), determinant(killing_form(sc)).to_string().c_str());
    const std::vector<std::string> y{"y0"};
    for (const auto& f : basis.fields()) std::printf("  %s\n", f.to_string(y).c_str());

    RuleCase rc;
    rc.rule = MixedRule::hierarchy(2);
    rc.coeffs = {parse_timefn("1 + 0.5*sin(t)"), parse_timefn("cos(t)")};

    // x(0) = 1, x'(0) = 0 and x(0) = 0, x'(0) = 1 for x'' + b1 x' + b0 x = 0; k = 1 gives y(0) = 1.
    const auto one = verify_rule(rc, TrialInput{{{1.0, 0.0}, {0.0, 1.0}}, {1.0}});
    std::printf("single trial: %zu grid points, max error %.3g\n", one.grid_points, one.max_error);

    const auto rep = verify_rule_trials(rc, 20, 42);
    std::printf("20 random trials: max error %.3g, max drift of k(t) %.3g, %zu rejections, Lie condition %s\n", rep.max_error, rep.max_drift,
                rep.rejections, rep.lie_condition ? "holds" : "fails");
    return 0;
}
