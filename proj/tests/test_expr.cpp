#include "skewform/chart.hpp"
#include "skewform/errors.hpp"
#include "skewform/expr.hpp"
#include "skewform/parser.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace skewform;

namespace {

Expr X() { return Expr::symbol("x"); }
Expr Y() { return Expr::symbol("y"); }

} // namespace

TEST(Parse, PolynomialWithTwoMonomials)
{
    const Expr e = parse("x^2 - y^2");
    EXPECT_TRUE(e.is_polynomial());
    EXPECT_EQ(e.numerator().size(), 2U);
    EXPECT_EQ(e.str(), "x^2 - y^2");
}

TEST(Parse, DifferentialsAreNotScalars)
{
    ParseOptions opts;
    opts.scalars = std::set<std::string>{"E", "V", "p", "T"};
    try {
        parse("(dE + p*dV)/T", opts);
        FAIL() << "expected a parse error";
    } catch (const ParseError &err) {
        EXPECT_EQ(err.position(), 1U);
        EXPECT_NE(std::string(err.what()).find("dE"), std::string::npos);
    }
    EXPECT_THROW(parse("x*d[x]"), ParseError);
}

TEST(Parse, CommutingProductIsCanonicalZero)
{
    const Expr e = parse("p*q - q*p");
    EXPECT_TRUE(e.is_zero());
    EXPECT_EQ(e, Expr());
    EXPECT_EQ(e.str(), "0");
}

TEST(Parse, Errors)
{
    EXPECT_THROW(parse("foo(x)"), UnknownFunctionError);
    EXPECT_THROW(parse("x +"), ParseError);
    EXPECT_THROW(parse("x^y"), ParseError);
    EXPECT_THROW(parse("x^1.5"), ParseError);
    EXPECT_THROW(parse("(x"), ParseError);
    EXPECT_THROW(parse("x # y"), ParseError);
    EXPECT_THROW(parse("1/0"), PoleError);
    try {
        parse("x + * y");
    } catch (const ParseError &err) {
        EXPECT_EQ(err.position(), 4U);
    }
}

TEST(Parse, LiteralsAndPowers)
{
    EXPECT_EQ(parse("0.25"), Expr(Rational(1, 4)));
    EXPECT_EQ(parse("x^-2"), Expr(1) / (X() * X()));
    EXPECT_EQ(parse("x^(-1)*x"), Expr(1));
    EXPECT_EQ(parse("-x^2"), -(X() * X()));
    EXPECT_EQ(parse("2^3"), Expr(8));
}

TEST(Canonical, ReducesFractions)
{
    EXPECT_EQ(parse("(x^2 - y^2)/(x - y)"), X() + Y());
    EXPECT_EQ(parse("(x*y + x)/(2*x)"), parse("y/2 + 1/2"));
    const Expr e = parse("(x^3 - 1)/(x^2 - 1)");
    EXPECT_EQ(e, parse("(x^2 + x + 1)/(x + 1)"));
    EXPECT_TRUE(e.denominator().leading_coeff() == 1);
    EXPECT_EQ(parse("1/x + 1/y"), parse("(x + y)/(x*y)"));
    EXPECT_EQ(parse("(a*x + a*y)/(b*x + b*y)"), parse("a/b"));
}

TEST(Canonical, MultivariateGcd)
{
    const Poly a = parse("(x + y)*(x - 2*z)*(y*z + 1)").numerator();
    const Poly b = parse("(x + y)*(y*z + 1)*(x + 3)").numerator();
    EXPECT_EQ(gcd(a, b), parse("(x + y)*(y*z + 1)").numerator());
    EXPECT_TRUE(gcd(parse("x^2 + 1").numerator(), parse("x + 1").numerator()).is_one());
}

TEST(Canonical, PrintParseRoundTrip)
{
    for (const char *text : {"x^2 - y^2", "sin(x*y)^2 + cos(x)", "(x + 1)/(y^2 - 3)", "-x/(2*y)", "x*y/3 - 7/2",
                             "exp(-x)/y", "ln(x^2 + 1)*z", "1/(x*y)", "-3*x^2/4"}) {
        const Expr e = parse(text);
        EXPECT_EQ(parse(e.str()), e) << text << " -> " << e.str();
    }
}

TEST(Diff, Examples)
{
    EXPECT_EQ(diff(parse("x^2*y"), "x"), parse("2*x*y"));
    EXPECT_EQ(diff(parse("sin(x*y)"), "x"), parse("y*cos(x*y)"));
    EXPECT_EQ(diff(parse("c"), "x"), Expr());
    EXPECT_EQ(diff(parse("ln(x)"), "x"), parse("1/x"));
    EXPECT_EQ(diff(parse("exp(x^2)"), "x"), parse("2*x*exp(x^2)"));
    EXPECT_EQ(diff(parse("cos(y)"), "y"), parse("-sin(y)"));
    EXPECT_EQ(diff(parse("x/y"), "y"), parse("-x/y^2"));
}

TEST(Diff, UndeclaredVariable)
{
    const Chart chart({"x", "y"});
    EXPECT_THROW(diff(parse("x*z"), chart, "z"), UndeclaredVariableError);
    EXPECT_EQ(diff(parse("x*y"), chart, "y"), X());
}

TEST(IsZero, Examples)
{
    const auto binomial = is_zero(parse("(x+y)^2 - x^2 - 2*x*y - y^2"));
    EXPECT_TRUE(binomial.holds);
    EXPECT_FALSE(binomial.probabilistic);

    const auto pythagoras = is_zero(parse("sin(x)^2 + cos(x)^2 - 1"));
    EXPECT_TRUE(pythagoras.holds);
    EXPECT_TRUE(pythagoras.probabilistic);

    const auto distinct = is_zero(parse("x*y - x"));
    EXPECT_FALSE(distinct.holds);
    EXPECT_FALSE(distinct.probabilistic);

    EXPECT_FALSE(is_zero(parse("sin(x)^2 + cos(x)^2 - 1 + 1/1000000")).holds);
}

// Independent oracle: 32 draws of sin^2 + cos^2 - 1 straight from libm.
TEST(IsZero, PythagorasOracle)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 32; ++i) {
        const double x = static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 100.0;
        EXPECT_LT(std::fabs(std::sin(x) * std::sin(x) + std::cos(x) * std::cos(x) - 1.0), 1e-9);
    }
}

TEST(IsZero, SamplingAvoidsPoles)
{
    // ln needs a positive argument; roughly half of the draws are rejected.
    EXPECT_TRUE(is_zero(parse("exp(ln(x)) - x")).holds);
    EXPECT_THROW(is_zero(parse("ln(-x^2 - 1)")), SamplingError);
}

TEST(Eval, Examples)
{
    const auto half = eval(parse("x/y"), {{"x", Rational(1)}, {"y", Rational(2)}});
    ASSERT_TRUE(std::holds_alternative<Rational>(half));
    EXPECT_EQ(std::get<Rational>(half), Rational(1, 2));

    EXPECT_THROW(eval(parse("x/y"), {{"x", Rational(1)}, {"y", Rational(0)}}), PoleError);
    EXPECT_THROW(eval(parse("x + z"), {{"x", Rational(1)}}), UnboundVariableError);

    const auto one = eval(parse("exp(0)"), {});
    ASSERT_TRUE(std::holds_alternative<double>(one));
    EXPECT_DOUBLE_EQ(std::get<double>(one), 1.0);
    EXPECT_EQ(value_str(one), "1.0");
}

TEST(Subs, Simultaneous)
{
    const Expr e = parse("x^2 + y");
    const Expr r = subs(e, {{"x", Y()}, {"y", X()}});
    EXPECT_EQ(r, parse("y^2 + x"));
    EXPECT_EQ(subs(parse("sin(x)/x"), {{"x", parse("2*t")}}), parse("sin(2*t)/(2*t)"));
}

TEST(Poly, SquareRoot)
{
    const auto r = parse("x^2 + 2*x*y + y^2").numerator().sqrt();
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(Expr::from_poly(*r), parse("x + y"));
    EXPECT_FALSE(parse("x^2 + y^2").numerator().sqrt().has_value());
    EXPECT_FALSE(parse("-x^2").numerator().sqrt().has_value());
    const auto q = parse("4/9*x^4*y^2").numerator().sqrt();
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(Expr::from_poly(*q), parse("2/3*x^2*y"));
}

// --- properties --------------------------------------------------------------

TEST(ExprProperties, CanonicalizationIsIdempotent)
{
    proptest::Gen gen(1);
    const std::vector<std::string> vars{"x", "y", "z"};
    for (int i = 0; i < 100; ++i) {
        const Expr e = gen.rational_function(vars);
        EXPECT_EQ(parse(e.str()), e) << e.str();
        EXPECT_EQ(Expr::fraction(e.numerator(), e.denominator()), e);
    }
}

TEST(ExprProperties, DiffIsLinear)
{
    proptest::Gen gen(2);
    const std::vector<std::string> vars{"x", "y", "z"};
    for (int i = 0; i < 100; ++i) {
        const Expr a = gen.poly(vars);
        const Expr b = gen.poly(vars);
        EXPECT_EQ(diff(a + b, "x"), diff(a, "x") + diff(b, "x"));
    }
}

TEST(ExprProperties, MixedPartialsCommute)
{
    proptest::Gen gen(3);
    const std::vector<std::string> vars{"x", "y", "z"};
    for (int i = 0; i < 60; ++i) {
        const Expr e = gen.rational_function(vars);
        EXPECT_EQ(diff(diff(e, "x"), "y"), diff(diff(e, "y"), "x")) << e.str();
    }
}

TEST(ExprProperties, DifferenceWithItselfIsZero)
{
    proptest::Gen gen(4);
    const std::vector<std::string> vars{"x", "y"};
    for (int i = 0; i < 60; ++i) {
        const Expr e = gen.rational_function(vars) + Expr::apply(Func::Sin, gen.poly(vars));
        EXPECT_TRUE(is_zero(e - e).holds);
    }
}

TEST(ExprProperties, ProductAndQuotientRules)
{
    proptest::Gen gen(5);
    const std::vector<std::string> vars{"x", "y"};
    for (int i = 0; i < 60; ++i) {
        const Expr f = gen.rational_function(vars);
        const Expr g = gen.nonzero_poly(vars);
        EXPECT_EQ(diff(f * g, "x"), diff(f, "x") * g + f * diff(g, "x"));
        EXPECT_EQ(diff(f / g, "y"), (diff(f, "y") * g - f * diff(g, "y")) / (g * g));
    }
}
