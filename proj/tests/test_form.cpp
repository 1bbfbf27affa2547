#include "skewform/errors.hpp"
#include "skewform/form.hpp"
#include "skewform/parser.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace skewform;

namespace {

const Chart &xy()
{
    static const Chart c({"x", "y"});
    return c;
}

DiffForm F(const std::string &text, const Chart &chart = xy()) { return parse_form(text, chart); }

DiffForm dx() { return DiffForm::differential(xy(), "x"); }
DiffForm dy() { return DiffForm::differential(xy(), "y"); }

} // namespace

TEST(Wedge, Examples)
{
    EXPECT_TRUE(wedge(dx(), dx()).is_zero());
    EXPECT_EQ(wedge(dx(), dx()).degree(), 2);
    EXPECT_EQ(wedge(dx(), dy()), DiffForm::basis(xy(), {0, 1}, Expr(1)));
    EXPECT_EQ(wedge(dy(), dx()), DiffForm::basis(xy(), {0, 1}, Expr(-1)));
    EXPECT_EQ(wedge(F("x*d[y]"), F("y*d[x]")), DiffForm::basis(xy(), {0, 1}, parse("-x*y")));
}

TEST(Wedge, ChartMismatch)
{
    EXPECT_THROW(wedge(dx(), DiffForm::differential(Chart({"x", "z"}), "x")), ChartMismatchError);
    EXPECT_NO_THROW(wedge(dx(), DiffForm::differential(Chart({"x", "y"}), "y")));
    EXPECT_THROW(dx() + DiffForm::differential(Chart({"u", "v"}), "u"), ChartMismatchError);
}

TEST(Wedge, DegreeAboveDimensionIsZero)
{
    const DiffForm top = F("d[x] ^ d[y]");
    const DiffForm r = wedge(top, F("x*d[x] + d[y]"));
    EXPECT_EQ(r.degree(), 3);
    EXPECT_TRUE(r.is_zero());
    EXPECT_TRUE(ext_d(top).is_zero());
}

TEST(ExtD, Examples)
{
    EXPECT_EQ(ext_d(DiffForm::scalar(xy(), parse("x^2"))), F("2*x*d[x]"));
    EXPECT_EQ(ext_d(F("x*d[y]")), F("d[x]^d[y]"));
    const DiffForm ddxy = ext_d(ext_d(DiffForm::scalar(xy(), parse("x*y"))));
    EXPECT_EQ(ddxy.degree(), 2);
    EXPECT_TRUE(ddxy.is_zero());
}

TEST(Closed, Examples)
{
    EXPECT_TRUE(is_closed(F("y*d[x] + x*d[y]")).holds);
    EXPECT_FALSE(is_closed(F("-y*d[x] + x*d[y]")).holds);
    EXPECT_EQ(ext_d(F("-y*d[x] + x*d[y]")), F("2*d[x]^d[y]"));
    EXPECT_TRUE(is_closed(F("exp(x*y)*sin(x)*d[x]^d[y]")).holds);
}

TEST(Commutator1, Examples)
{
    EXPECT_EQ(commutator1(F("y*d[x] + x*d[y]"))(0, 1), Expr());
    const ExprMatrix k = commutator1(F("-y*d[x] + x*d[y]"));
    EXPECT_EQ(k(0, 1), Expr(2));
    EXPECT_EQ(k(1, 0), Expr(-2));
    const Chart xyz({"x", "y", "z"});
    const ExprMatrix g = commutator1(F("sin(x)*d[x]", xyz));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_TRUE(g(i, j).is_zero());
        }
    }
    EXPECT_THROW(commutator1(F("d[x]^d[y]")), DegreeError);
}

TEST(Homotopy, Examples)
{
    const DiffForm area = F("d[x]^d[y]");
    const DiffForm theta = homotopy_antiderivative(area);
    EXPECT_EQ(theta, F("(x*d[y] - y*d[x])/2"));
    EXPECT_EQ(ext_d(theta), area);

    const DiffForm f = homotopy_antiderivative(F("y*d[x] + x*d[y]"));
    EXPECT_EQ(f.degree(), 0);
    EXPECT_EQ(f.value(), parse("x*y"));

    EXPECT_THROW(homotopy_antiderivative(F("-y*d[x] + x*d[y]")), NotClosedError);
    EXPECT_THROW(homotopy_antiderivative(F("exp(x)*d[x]")), NonPolynomialError);
    EXPECT_THROW(homotopy_antiderivative(DiffForm::scalar(xy(), Expr(3))), DegreeError);
}

TEST(Homotopy, ParametersMayBeNonPolynomial)
{
    const DiffForm a = F("sin(c)/m*d[x]");
    EXPECT_EQ(homotopy_antiderivative(a).value(), parse("x*sin(c)/m"));
}

TEST(Homotopy, BasePoint)
{
    const DiffForm theta = homotopy_antiderivative(F("2*x*d[x]"), {Rational(1), Rational(5)});
    EXPECT_EQ(theta.value(), parse("x^2 - 1"));
}

TEST(Exact, Examples)
{
    EXPECT_FALSE(is_exact(F("-y*d[x] + x*d[y]")).has_value());
    EXPECT_FALSE(is_exact(DiffForm::scalar(xy(), Expr(1))).has_value());
    const auto theta = is_exact(F("3*x^2*y*d[x] + x^3*d[y]"));
    ASSERT_TRUE(theta.has_value());
    EXPECT_EQ(theta->value(), parse("x^3*y"));
}

TEST(FormText, RoundTrip)
{
    const Chart xyz({"x", "y", "z"});
    for (const char *text : {"x*d[y] - y*d[x]", "(x + 1) * d[x] ^ d[z]", "-d[y]", "x^2/3 * d[x] ^ d[y] ^ d[z]",
                             "sin(x)*d[x] + (1/y)*d[z]"}) {
        const DiffForm f = F(text, xyz);
        EXPECT_EQ(F(f.str(), xyz), f) << text << " -> " << f.str();
    }
    EXPECT_EQ(F("x*d[y] - y*d[x]").str(), "-y * d[x] + x * d[y]");
}

TEST(FormText, Errors)
{
    EXPECT_THROW(F("d[x] + x"), ParseError);
    EXPECT_THROW(F("d[z]"), ParseError);
    EXPECT_THROW(F("x/d[y]"), ParseError);
    FormParseOptions opts;
    opts.scalars = std::set<std::string>{"c"};
    EXPECT_THROW(parse_form("c*q*d[x]", xy(), opts), ParseError);
    EXPECT_NO_THROW(parse_form("c*y*d[x]", xy(), opts));
}

TEST(SortWithSign, Permutations)
{
    MultiIndex a{2, 0, 1};
    EXPECT_EQ(sort_with_sign(a), 1);
    EXPECT_EQ(a, (MultiIndex{0, 1, 2}));
    MultiIndex b{1, 0};
    EXPECT_EQ(sort_with_sign(b), -1);
    MultiIndex c{1, 2, 1};
    EXPECT_EQ(sort_with_sign(c), 0);
}

// --- properties --------------------------------------------------------------

namespace {

int sign_power(int k) { return k % 2 == 0 ? 1 : -1; }

} // namespace

TEST(FormProperties, GradedAnticommutativity)
{
    proptest::Gen gen(11);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const int p = static_cast<int>(gen.uniform(0, 2));
        const int q = static_cast<int>(gen.uniform(0, 2));
        const DiffForm a = gen.form(chart, p);
        const DiffForm b = gen.form(chart, q);
        EXPECT_EQ(wedge(a, b), Expr(sign_power(p * q)) * wedge(b, a));
    }
}

TEST(FormProperties, WedgeAssociativeAndBilinear)
{
    proptest::Gen gen(12);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const DiffForm a = gen.form(chart, static_cast<int>(gen.uniform(0, 2)), 2, 2);
        const DiffForm b = gen.form(chart, static_cast<int>(gen.uniform(0, 1)), 2, 2);
        const DiffForm b2 = gen.form(chart, b.degree(), 2, 2);
        const DiffForm c = gen.form(chart, static_cast<int>(gen.uniform(0, 1)), 2, 2);
        EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
        EXPECT_EQ(wedge(a, b + b2), wedge(a, b) + wedge(a, b2));
        const Expr s = gen.poly(chart.vars(), 2, 2);
        EXPECT_EQ(wedge(s * a, b), s * wedge(a, b));
    }
}

TEST(FormProperties, DSquaredIsZero)
{
    proptest::Gen gen(13);
    int checked = 0;
    for (int n = 2; n <= 4; ++n) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(n));
        for (int p = 0; p <= 3; ++p) {
            for (int i = 0; i < 20; ++i) {
                const DiffForm a = gen.form(chart, p);
                EXPECT_TRUE(ext_d(ext_d(a)).is_zero()) << a.str();
                ++checked;
            }
        }
    }
    // A few rational and transcendental coefficients on top.
    const Chart chart = proptest::chart_of_dim(3);
    for (int i = 0; i < 20; ++i) {
        const DiffForm a = gen.form(chart, 1).map_coefficients([&](const Expr &c) {
            return c / gen.nonzero_poly(chart.vars()) + Expr::apply(Func::Exp, c);
        });
        EXPECT_TRUE(is_zero(ext_d(ext_d(a))).holds);
        ++checked;
    }
    EXPECT_GE(checked, 200);
}

TEST(FormProperties, Leibniz)
{
    proptest::Gen gen(14);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const int p = static_cast<int>(gen.uniform(0, 2));
        const DiffForm a = gen.form(chart, p);
        const DiffForm b = gen.form(chart, static_cast<int>(gen.uniform(0, 2)));
        EXPECT_EQ(ext_d(wedge(a, b)), wedge(ext_d(a), b) + Expr(sign_power(p)) * wedge(a, ext_d(b)));
    }
}

TEST(FormProperties, ExactIsClosed)
{
    proptest::Gen gen(15);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const DiffForm a = gen.form(chart, static_cast<int>(gen.uniform(0, 3)));
        EXPECT_TRUE(is_closed(ext_d(a)).holds);
    }
}

TEST(FormProperties, HomotopyInvertsD)
{
    proptest::Gen gen(16);
    for (int i = 0; i < 80; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const DiffForm beta = gen.form(chart, static_cast<int>(gen.uniform(0, 2)));
        const DiffForm a = ext_d(beta);
        if (a.is_zero()) {
            continue;
        }
        const DiffForm theta = homotopy_antiderivative(a);
        EXPECT_EQ(ext_d(theta), a) << a.str();
        const auto exact = is_exact(a);
        ASSERT_TRUE(exact.has_value());
        EXPECT_EQ(ext_d(*exact), a);
    }
}

TEST(FormProperties, Commutator1MatchesExtD)
{
    proptest::Gen gen(17);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const DiffForm a = gen.form(chart, 1, 4);
        const ExprMatrix k = commutator1(a);
        const DiffForm da = ext_d(a);
        for (int r = 0; r < static_cast<int>(chart.dim()); ++r) {
            for (int c = 0; c < static_cast<int>(chart.dim()); ++c) {
                EXPECT_EQ(k(static_cast<std::size_t>(r), static_cast<std::size_t>(c)), da.coefficient({r, c}));
            }
        }
    }
}
