#include <gtest/gtest.h>

#include "liesup/diffpoly.hpp"
#include "liesup/poly_parser.hpp"
#include "support.hpp"

using namespace liesup;
using testing_support::random_diffpoly;
using testing_support::random_poly;
using testing_support::random_rational;

namespace {

const std::vector<std::string> xy{"x", "y"};

Poly P(const char* src) { return parse_poly(src, xy); }

}  // namespace

TEST(Rational, LowestTermsAndSign) {
    Rational r(6, -8);
    EXPECT_EQ(r.numerator(), -3);
    EXPECT_EQ(r.denominator(), 4);
    EXPECT_EQ(Rational(0, 5).denominator(), 1);
    EXPECT_EQ(Rational(0, 5).to_string(), "0");
    EXPECT_EQ(Rational(10, 4).to_string(), "5/2");
}

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
    EXPECT_EQ(Rational::parse("17"), Rational(17));
    EXPECT_EQ(Rational::parse("-3/6"), Rational(-1, 2));
    EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
    EXPECT_EQ(Rational::parse("2.5"), Rational(5, 2));
    EXPECT_THROW(Rational::parse("1/0"), Error);
    EXPECT_THROW(Rational::parse("abc"), Error);
}

TEST(Rational, DivisionByZeroThrows) { EXPECT_THROW(Rational(1) / Rational(0), DomainError); }

TEST(Rational, BeyondMachineIntegers) {
    Rational big = pow(Rational(10), 40) + Rational(1);
    EXPECT_EQ((big - pow(Rational(10), 40)), Rational(1));
    EXPECT_EQ(big.to_string(), "10000000000000000000000000000000000000001");
}

TEST(Rational, FieldAxiomsOnRandomTriples) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 500; ++i) {
        const Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    }
}

TEST(Poly, PartialExamples) {
    EXPECT_EQ(poly_partial(P("x^2*y"), 0), P("2*x*y"));
    EXPECT_TRUE(poly_partial(Poly::constant(2, Rational(5)), 1).is_zero());
    EXPECT_EQ(poly_partial(P("x^3 + 2*x"), 0), P("3*x^2 + 2"));
}

TEST(Poly, PartialIndexOutOfRange) { EXPECT_THROW(poly_partial(P("x"), 2), IndexOutOfRange); }

TEST(Poly, NoZeroCoefficientsStored) {
    Poly p = P("x + y") - P("x");
    EXPECT_EQ(p.terms().size(), 1u);
    EXPECT_EQ(p, P("y"));
    EXPECT_TRUE((P("x*y") - P("y*x")).is_zero());
}

TEST(Poly, CanonicalRenderingIsGradedLex) {
    EXPECT_EQ(P("y - x + 3*x^2*y + x*y^2").to_string(xy), "3*x^2*y + x*y^2 - x + y");
    EXPECT_EQ(P("-(x - 1)^2").to_string(xy), "-x^2 + 2*x - 1");
    EXPECT_EQ(P("x/2").to_string(xy), "1/2*x");
    EXPECT_EQ(Poly(2).to_string(xy), "0");
}

TEST(Poly, RenderingReparsesToTheSamePolynomial) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        Poly p = random_poly(2, 4, rng);
        EXPECT_EQ(parse_poly(p.to_string(xy), xy), p) << p.to_string(xy);
    }
}

TEST(Poly, ParseErrorsCarryPosition) {
    try {
        parse_poly("x + q", xy);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
        EXPECT_NE(std::string(e.what()).find("unknown identifier 'q'"), std::string::npos);
    }
    EXPECT_THROW(parse_poly("x^", xy), ParseError);
    EXPECT_THROW(parse_poly("x / y", xy), ParseError);
    EXPECT_THROW(parse_poly("(x + y", xy), ParseError);
}

TEST(Poly, LeibnizRuleOnRandomPairs) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + i % 3;
        const Poly p = random_poly(n, 3, rng), q = random_poly(n, 3, rng);
        for (std::size_t v = 0; v < n; ++v) {
            EXPECT_EQ(poly_partial(p * q, v), poly_partial(p, v) * q + p * poly_partial(q, v));
        }
    }
}

TEST(Poly, EvaluatesExactlyAndNumerically) {
    const Poly p = P("x^2*y - 3*y + 1/2");
    const std::vector<Rational> pt{Rational(2), Rational(1, 3)};
    EXPECT_EQ(p.evaluate(std::span<const Rational>(pt)), Rational(4, 3) - Rational(1) + Rational(1, 2));
    const std::vector<double> dp{2.0, 1.0 / 3.0};
    EXPECT_NEAR(p.evaluate(std::span<const double>(dp)), 5.0 / 6.0, 1e-15);
}

TEST(DiffPoly, TotalDerivativeExamples) {
    const DiffPoly y0 = DiffPoly::y(0), y1 = DiffPoly::y(1), y2 = DiffPoly::y(2);
    EXPECT_EQ(diff_total_derivative(y0), y1);
    EXPECT_EQ(diff_total_derivative(y0 * y0), Rational(2) * y0 * y1);
    EXPECT_EQ(diff_total_derivative(y1 + y0 * y0), y2 + Rational(2) * y0 * y1);
}

TEST(DiffPoly, TotalDerivativeTreatsBAsConstant) {
    EXPECT_TRUE(diff_total_derivative(DiffPoly::b(0)).is_zero());
    EXPECT_EQ(diff_total_derivative(DiffPoly::b(1) * DiffPoly::y(0)), DiffPoly::b(1) * DiffPoly::y(1));
}

TEST(DiffPoly, TotalDerivativeLinearAndLeibniz) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const DiffPoly p = random_diffpoly(rng), q = random_diffpoly(rng);
        const Rational a = random_rational(rng);
        EXPECT_EQ(diff_total_derivative(a * p + q), a * diff_total_derivative(p) + diff_total_derivative(q));
        EXPECT_EQ(diff_total_derivative(p * q), diff_total_derivative(p) * q + p * diff_total_derivative(q));
        if (auto o = p.max_order()) {
            auto od = diff_total_derivative(p).max_order();
            EXPECT_TRUE(!od || *od <= *o + 1);
        }
    }
}

TEST(DiffPoly, EvalExamples) {
    const std::vector<double> none;
    EXPECT_DOUBLE_EQ(diff_eval(parse_diffpoly("y1 + y0^2"), std::vector<double>{2, 3}, none), 7.0);
    EXPECT_DOUBLE_EQ(diff_eval(parse_diffpoly("b0*y0"), std::vector<double>{4}, std::vector<double>{0.5}), 2.0);
    EXPECT_DOUBLE_EQ(diff_eval(parse_diffpoly("y2 + 3*y0*y1 + y0^3"), std::vector<double>{1, 1, 1}, none), 5.0);
}

TEST(DiffPoly, EvalDimensionChecks) {
    const std::vector<double> none;
    EXPECT_THROW(diff_eval(parse_diffpoly("y2"), std::vector<double>{1, 2}, none), DimensionMismatch);
    EXPECT_THROW(diff_eval(parse_diffpoly("b1*y0"), std::vector<double>{1}, std::vector<double>{1}), DimensionMismatch);
}

TEST(DiffPoly, CanonicalTextGroupsByB) {
    const DiffPoly q = parse_diffpoly("-3*y0*y1 - y0^3 - b0 - b1*y0 - b2*(y0^2 + y1)");
    EXPECT_EQ(q.to_string(), "-y0^3 - 3*y0*y1 - b0 - b1*y0 - b2*(y0^2 + y1)");
    EXPECT_EQ(parse_diffpoly(q.to_string()), q);
    EXPECT_EQ(parse_diffpoly("-b0 - b1*y0 - y0^2").to_string(), "-y0^2 - b0 - b1*y0");
    EXPECT_EQ(DiffPoly().to_string(), "0");
}

TEST(DiffPoly, ParseRejectsUnknownSymbols) {
    EXPECT_THROW(parse_diffpoly("y0 + z"), ParseError);
    EXPECT_THROW(parse_diffpoly("y99"), ParseError);
}
