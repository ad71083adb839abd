#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "liesup/superpose.hpp"

using namespace liesup;

namespace {

std::vector<std::vector<double>> unit_jets(std::size_t s) {
    std::vector<std::vector<double>> j(s, std::vector<double>(s, 0.0));
    for (std::size_t a = 0; a < s; ++a) j[a][a] = 1.0;
    return j;
}

std::vector<std::vector<double>> random_jets(std::size_t s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> j(s, std::vector<double>(s));
    for (auto& row : j)
        for (auto& v : row) v = u(rng);
    return j;
}

}  // namespace

TEST(LinearRule, Examples) {
    EXPECT_EQ(eval_linear_rule(3, 2, 0), 3);
    EXPECT_EQ(eval_linear_rule(0, 1, 5), 5);
    EXPECT_EQ(eval_linear_rule(1.5, -2, 2), -2.5);
}

TEST(BernoulliRule, ZeroConstantReturnsFirstSolution) {
    for (long n : {0L, 2L, 3L, 4L, -1L}) EXPECT_NEAR(eval_bernoulli_rule(0.7, 1.3, 0.0, n), 0.7, 1e-15) << n;
}

TEST(BernoulliRule, Examples) {
    EXPECT_DOUBLE_EQ(eval_bernoulli_rule(1, 1, 1, 2), 0.5);
    EXPECT_NEAR(eval_bernoulli_rule(2, 1, 0.5, 3), std::pow(0.75, -0.5), 1e-14);
    EXPECT_NEAR(eval_bernoulli_rule(2, 1, 0.5, 3), 1.1547005383792515, 1e-12);
}

TEST(BernoulliRule, DomainErrors) {
    EXPECT_THROW(eval_bernoulli_rule(1, 1, 1, 1), DomainError);
    // n = 3: base 1 - 2 = -1 under a square root.
    EXPECT_THROW(eval_bernoulli_rule(1, 1, -2, 3), DomainError);
    EXPECT_THROW(MixedRule::bernoulli(1), DomainError);
}

TEST(BernoulliRule, OddReciprocalAcceptsNegativeBase) {
    // n = 2: exponent -1 works for any nonzero base.
    EXPECT_DOUBLE_EQ(eval_bernoulli_rule(1, 1, -3, 2), -0.5);
}

TEST(PinneyRule, UncoupledExample) {
    auto [x, p] = eval_pinney_rule({1, 0}, {0, 1}, 0.5, 0.5, 0.0);
    EXPECT_NEAR(x, 1.0, 1e-15);
    (void)p;
}

TEST(PinneyRule, CoupledExample) {
    auto [x, p] = eval_pinney_rule({1, 0}, {0, 1}, 1, 1, 1.0);
    EXPECT_NEAR(x, std::sqrt(2.0), 1e-15);
    // x(t) = sqrt(2) sqrt(cos^2 + sin^2 + sqrt(3) cos sin) along (cos, sin), so x'(0) = sqrt(6)/2.
    EXPECT_NEAR(p, std::sqrt(6.0) / 2, 1e-15);
}

TEST(PinneyRule, Errors) {
    EXPECT_THROW(eval_pinney_rule({1, 2}, {1, 2}, 1, 1, 1), DegenerateWronskian);
    EXPECT_THROW(eval_pinney_rule({1, 0}, {0, 1}, 0.1, 0.1, 1), RadicandNegative);
}

TEST(PinneyRule, SatisfiesPinneyInvariant) {
    // With omega = 1 and the exact oscillator solutions cos t, sin t the output
    // obeys x'' + x = c / x^3.
    const double c = 2.0, k1 = 1.5, k2 = 0.8;
    auto x_at = [&](double t) { return eval_pinney_rule({std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}, k1, k2, c)[0]; };
    for (double t : {0.1, 0.7, 1.9}) {
        const double h = 1e-4;
        const double xdd = (x_at(t + h) - 2 * x_at(t) + x_at(t - h)) / (h * h);
        const double x = x_at(t);
        EXPECT_NEAR(xdd + x, c / (x * x * x), 1e-5) << t;
    }
}

TEST(HierarchyRule, OrderTwoExample) {
    auto jets = unit_jets(2);
    for (double k : {0.5, 2.0, -4.0}) {
        auto y = eval_hierarchy_rule(2, jets, std::vector<double>{k});
        ASSERT_EQ(y.size(), 1u);
        EXPECT_NEAR(y[0], 1.0 / k, 1e-15);
    }
}

TEST(HierarchyRule, OrderThreeExample) {
    auto y = eval_hierarchy_rule(3, unit_jets(3), std::vector<double>{1, 1});
    ASSERT_EQ(y.size(), 2u);
    EXPECT_NEAR(y[0], 1.0, 1e-15);
    EXPECT_NEAR(y[1], 0.0, 1e-15);
}

TEST(HierarchyRule, SingularDenominator) {
    std::vector<std::vector<double>> jets{{1, 0}, {-1, 1}};
    EXPECT_THROW(eval_hierarchy_rule(2, jets, std::vector<double>{1}), SingularDenominator);
}

TEST(HierarchyRule, DimensionChecks) {
    EXPECT_THROW(eval_hierarchy_rule(2, unit_jets(3), std::vector<double>{1}), DimensionMismatch);
    EXPECT_THROW(eval_hierarchy_rule(3, unit_jets(3), std::vector<double>{1}), DimensionMismatch);
    EXPECT_THROW(HierarchyRule(1), DomainError);
}

TEST(HierarchyRule, ProjectiveInvariance) {
    // y = c1/c0 and y' = c2/c0 - (c1/c0)^2 with c = sum kappa_a u_a; scaling
    // kappa by any nonzero lambda must not change the output.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0), lam(0.1, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto jets = random_jets(3, rng);
        std::array<double, 3> kappa{u(rng), u(rng), 0.5 + std::abs(u(rng))};
        const double l = (trial % 2 ? -1.0 : 1.0) * lam(rng);
        std::array<double, 3> c{};
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t a = 0; a < 3; ++a) c[j] += l * kappa[a] * jets[a][j];
        if (std::abs(c[0]) < 0.05 * std::abs(l)) continue;
        const double y0 = c[1] / c[0], y1 = c[2] / c[0] - y0 * y0;
        std::vector<double> k{kappa[0] / kappa[2], kappa[1] / kappa[2]};
        auto y = eval_hierarchy_rule(3, jets, k);
        EXPECT_NEAR(y[0], y0, 1e-9 * (1 + std::abs(y0)));
        EXPECT_NEAR(y[1], y1, 1e-9 * (1 + std::abs(y1)));
    }
}

TEST(HierarchyRule, OrderFourMatchesLogDerivativeJet) {
    // Companions e^{2t}, e^{-t}, t e^{-t}, e^{t} at t = 0; x = e^{2t} + 3 e^{-t} + e^{t}
    // and y = x'/x, whose jet follows from the x-jet.
    std::vector<std::vector<double>> jets{{1, 2, 4, 8}, {1, -1, 1, -1}, {0, 1, -2, 3}, {1, 1, 1, 1}};
    std::vector<double> k{1, 3, 0};
    std::vector<double> xj(4);
    for (std::size_t j = 0; j < 4; ++j) xj[j] = k[0] * jets[0][j] + k[1] * jets[1][j] + jets[3][j];
    const double y0 = xj[1] / xj[0];
    const double y1 = xj[2] / xj[0] - y0 * y0;
    const double y2 = xj[3] / xj[0] - 3 * y0 * y1 - y0 * y0 * y0;
    auto y = eval_hierarchy_rule(4, jets, k);
    EXPECT_NEAR(y[0], y0, 1e-14);
    EXPECT_NEAR(y[1], y1, 1e-14);
    EXPECT_NEAR(y[2], y2, 1e-13);
}

TEST(SolveConstants, Examples) {
    auto k = solve_hierarchy_constants(2, unit_jets(2), std::vector<double>{2});
    ASSERT_EQ(k.size(), 1u);
    EXPECT_NEAR(k[0], 0.5, 1e-15);
    EXPECT_NEAR(eval_hierarchy_rule(2, unit_jets(2), k)[0], 2.0, 1e-15);

    auto k3 = solve_hierarchy_constants(3, unit_jets(3), std::vector<double>{1, 0});
    ASSERT_EQ(k3.size(), 2u);
    EXPECT_NEAR(k3[0], 1.0, 1e-15);
    EXPECT_NEAR(k3[1], 1.0, 1e-15);
}

TEST(SolveConstants, Errors) {
    std::vector<std::vector<double>> dep{{1, 0}, {2, 0}};
    EXPECT_THROW(solve_hierarchy_constants(2, dep, std::vector<double>{1}), SingularJetMatrix);
    // Target jet reachable only with kappa_s = 0: x = u_(1) itself.
    std::vector<std::vector<double>> jets{{1, 3}, {0, 1}};
    EXPECT_THROW(solve_hierarchy_constants(2, jets, std::vector<double>{3}), NonGenericNormalization);
    EXPECT_THROW(solve_hierarchy_constants(2, unit_jets(2), std::vector<double>{1, 2}), DimensionMismatch);
}

TEST(SolveConstants, RoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t s = 2; s <= 4; ++s) {
        HierarchyRule rule(s);
        int done = 0;
        while (done < 100) {
            auto jets = random_jets(s, rng);
            Eigen::MatrixXd m(s, s);
            for (std::size_t a = 0; a < s; ++a)
                for (std::size_t j = 0; j < s; ++j) m(j, a) = jets[a][j];
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
            const auto& sv = svd.singularValues();
            if (sv(0) / sv(sv.size() - 1) > 50) continue;
            std::vector<double> v0(s - 1);
            for (auto& v : v0) v = u(rng);
            auto k = rule.solve_constants(jets, v0);
            auto back = rule.evaluate(jets, k);
            for (std::size_t i = 0; i + 1 < s; ++i) EXPECT_NEAR(back[i], v0[i], 1e-12) << "s=" << s;
            ++done;
        }
    }
}

TEST(RiccatiCrossRatio, Examples) {
    EXPECT_EQ(eval_riccati_cross_ratio(0.3, 1.0, 2.0, 0.0), 0.3);
    EXPECT_DOUBLE_EQ(eval_riccati_cross_ratio(0, 1, 2, 1), 2.0);
    EXPECT_THROW(eval_riccati_cross_ratio(1, 1, 2, 1), CoincidentSolutions);
    EXPECT_THROW(eval_riccati_cross_ratio(1, 2, 2, 1), CoincidentSolutions);
    // (y3 - y2) + k (y1 - y3) = 1 + k (-2) = 0 at k = 1/2.
    EXPECT_THROW(eval_riccati_cross_ratio(0, 1, 2, 0.5), SingularDenominator);
}

TEST(RiccatiCrossRatio, ConstantInvertsRule) {
    for (double k : {-2.0, -0.3, 0.4, 3.0}) {
        const double y = eval_riccati_cross_ratio(-0.5, 0.1, 0.9, k);
        EXPECT_NEAR(riccati_cross_ratio_constant(y, -0.5, 0.1, 0.9), k, 1e-13);
    }
}

TEST(RiccatiCrossRatio, SwapCovariance) {
    const double y1 = -0.7, y2 = 0.2, y3 = 1.1;
    for (double k = -3.0; k <= 3.0; k += 0.25) {
        if (k == 0.0) continue;
        const double den = (y3 - y2) + k * (y1 - y3);
        if (std::abs(den) < 1e-9) continue;
        EXPECT_NEAR(eval_riccati_cross_ratio(y1, y2, y3, k), eval_riccati_cross_ratio(y2, y1, y3, 1.0 / k), 1e-12) << k;
    }
}

TEST(MixedRule, Shapes) {
    auto h = MixedRule::hierarchy(4);
    EXPECT_EQ(h.component_dims, std::vector<std::size_t>(4, 4));
    EXPECT_EQ(h.constant_count, 3u);
    EXPECT_EQ(h.target_dim, 3u);
    auto p = MixedRule::pinney(1.0);
    EXPECT_EQ(p.constant_count, p.target_dim);
    EXPECT_EQ(MixedRule::linear().constant_count, 1u);
    EXPECT_EQ(MixedRule::riccati_cross_ratio().component_dims.size(), 3u);
    EXPECT_THROW(MixedRule::hierarchy(1), DomainError);
}

TEST(MixedRule, IdsRoundTrip) {
    for (auto id : {"linear", "bernoulli", "pinney", "hierarchy", "riccati-cross-ratio"}) {
        auto k = parse_rule_id(id);
        ASSERT_TRUE(k.has_value()) << id;
        EXPECT_EQ(rule_id(*k), id);
    }
    EXPECT_FALSE(parse_rule_id("kummer").has_value());
}
