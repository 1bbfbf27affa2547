#include "skewform/errors.hpp"
#include "skewform/manifold.hpp"
#include "skewform/parser.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace skewform;

namespace {

const Chart &xy()
{
    static const Chart c({"x", "y"});
    return c;
}

// Γ^x_{yx} = x, everything else zero.
Connection twisted()
{
    return Connection::from_entries(xy(), {{"x", "y", "x", "x"}});
}

DiffForm F(const std::string &text, const Chart &chart = xy()) { return parse_form(text, chart); }

// Levi-Civita connection of the round sphere dθ² + sin²θ dφ² on chart (x, y) = (θ, φ).
Connection sphere()
{
    return Connection::from_entries(xy(), {
                                              {"x", "y", "y", "-sin(x)*cos(x)"},
                                              {"y", "x", "y", "cos(x)/sin(x)"},
                                              {"y", "y", "x", "cos(x)/sin(x)"},
                                          });
}

} // namespace

TEST(Covariant, Examples)
{
    const Connection zero(xy());
    const DiffForm a = F("x^2*y*d[x] + sin(y)*d[y]");
    const ExprMatrix m = covariant_deriv(a, zero);
    EXPECT_EQ(m(0, 0), parse("2*x*y"));
    EXPECT_EQ(m(0, 1), parse("x^2"));
    EXPECT_EQ(m(1, 0), Expr());
    EXPECT_EQ(m(1, 1), parse("cos(y)"));

    const ExprMatrix t = covariant_deriv(F("y*d[x]"), twisted());
    EXPECT_EQ(t(0, 1), Expr(1));
    EXPECT_EQ(t(1, 0), parse("x*y"));
    EXPECT_EQ(t(0, 0), Expr());
    EXPECT_EQ(t(1, 1), Expr());

    const ExprMatrix c = covariant_deriv(F("3*d[x] - 2*d[y]"), zero);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_TRUE(c(i, j).is_zero());
        }
    }
    EXPECT_THROW(covariant_deriv(F("d[x]", Chart({"x", "z"})), zero), ChartMismatchError);
}

TEST(EvoCommutator, Examples)
{
    const ExprMatrix k = evo_commutator(F("y*d[x]"), twisted());
    EXPECT_EQ(k(0, 1), parse("-1 + x*y"));
    EXPECT_EQ(k(1, 0), parse("1 - x*y"));

    const Connection sym = Connection::from_entries(xy(), {{"x", "x", "y", "y^2"}, {"x", "y", "x", "y^2"}});
    const DiffForm a = F("x*y^3*d[x] + exp(x)*d[y]");
    const ExprMatrix ks = evo_commutator(a, sym);
    const ExprMatrix k1 = commutator1(a);
    EXPECT_EQ(ks(0, 1), k1(0, 1));

    EXPECT_TRUE(evo_commutator(DiffForm(xy(), 1), twisted())(0, 1).is_zero());
}

TEST(EvoD, Examples)
{
    EXPECT_EQ(evo_d(F("y*d[x]"), twisted()), F("(x*y - 1)*d[x]^d[y]"));
    const Connection sym = Connection::from_entries(xy(), {{"y", "x", "y", "x"}, {"y", "y", "x", "x"}});
    const DiffForm a = F("x*d[x] + x*y*d[y]");
    EXPECT_EQ(evo_d(a, sym), ext_d(a));
    const DiffForm f = DiffForm::scalar(xy(), parse("x^2*y"));
    EXPECT_EQ(evo_d(f, twisted()), ext_d(f));
}

TEST(EvoD, HigherDegreeCorrection)
{
    // Γ^z_{xw} = 1. For dy^dz the only correction comes from I = (x, y) with x -> z
    // at α = w: a_{zy} dw^dx^dy = -dw^dx^dy.
    const Chart xyzw({"x", "y", "z", "w"});
    const Connection c = Connection::from_entries(xyzw, {{"z", "x", "w", "1"}});
    const DiffForm b = F("d[y]^d[z]", xyzw);
    EXPECT_TRUE(ext_d(b).is_zero());
    EXPECT_EQ(evo_d(b, c), F("-d[w]^d[x]^d[y]", xyzw));
}

TEST(Torsion, Examples)
{
    const ExprArray t = torsion(twisted());
    EXPECT_EQ(t.at({0, 0, 1}), parse("x"));
    EXPECT_EQ(t.at({0, 1, 0}), parse("-x"));
    EXPECT_TRUE(is_zero(torsion(sphere())).holds);
    EXPECT_TRUE(is_zero(torsion(Connection(xy()))).holds);
}

TEST(Riemann, Examples)
{
    EXPECT_TRUE(is_zero(riemann(Connection(xy()))).holds);

    // Constant Γ^x_{yy} = 1, Γ^y_{xy} = Γ^y_{yx} = 1. Derivative terms vanish and
    // R^x_{yxy} = Γ^x_{xλ}Γ^λ_{yy} - Γ^x_{yλ}Γ^λ_{xy} = 0 - Γ^x_{yy}Γ^y_{xy} = -1.
    const Connection k =
        Connection::from_entries(xy(), {{"x", "y", "y", "1"}, {"y", "x", "y", "1"}, {"y", "y", "x", "1"}});
    const ExprArray r = riemann(k);
    EXPECT_EQ(r.at({0, 1, 0, 1}), Expr(-1));
    EXPECT_EQ(r.at({0, 1, 1, 0}), Expr(1));
}

TEST(Riemann, SphereComponent)
{
    const ExprArray r = riemann(sphere());
    EXPECT_TRUE(is_zero(r.at({0, 1, 0, 1}) - parse("sin(x)^2")).holds);
    EXPECT_TRUE(is_zero(r.at({1, 0, 0, 1}) + Expr(1)).holds);
    EXPECT_TRUE(bianchi_first_check(sphere()).holds);
}

TEST(Bianchi, Examples)
{
    EXPECT_TRUE(bianchi_first_check(Connection(xy())).holds);
    EXPECT_THROW(bianchi_first_check(twisted()), PreconditionError);
}

// --- properties --------------------------------------------------------------

TEST(ManifoldProperties, CommutatorIsAntisymmetrizedCovariantDerivative)
{
    proptest::Gen gen(21);
    for (int i = 0; i < 40; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const Connection c = gen.connection(chart, false);
        const DiffForm a = gen.form(chart, 1);
        const ExprMatrix m = covariant_deriv(a, c);
        const ExprMatrix k = evo_commutator(a, c);
        for (std::size_t al = 0; al < chart.dim(); ++al) {
            for (std::size_t b = 0; b < chart.dim(); ++b) {
                EXPECT_EQ(k(al, b), m(b, al) - m(al, b));
                EXPECT_EQ(k(al, b), -k(b, al));
            }
        }
        // evo_d on a 1-form reads K off its dx^a ^ dx^b coefficients.
        const DiffForm d = evo_d(a, c);
        for (int al = 0; al < static_cast<int>(chart.dim()); ++al) {
            for (int b = al + 1; b < static_cast<int>(chart.dim()); ++b) {
                EXPECT_EQ(d.coefficient({al, b}), k(static_cast<std::size_t>(al), static_cast<std::size_t>(b)));
            }
        }
    }
}

TEST(ManifoldProperties, TorsionFreeEvoDIsExtD)
{
    proptest::Gen gen(22);
    for (int i = 0; i < 40; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const Connection c = gen.connection(chart, true);
        const DiffForm a = gen.form(chart, 1);
        EXPECT_EQ(evo_d(a, c), ext_d(a));
    }
}

TEST(ManifoldProperties, BianchiForSymmetricConnections)
{
    proptest::Gen gen(23);
    int checked = 0;
    for (std::size_t n : {2U, 3U}) {
        const Chart chart = proptest::chart_of_dim(n);
        for (int i = 0; i < 30; ++i) {
            const Connection c = gen.connection(chart, true);
            EXPECT_TRUE(bianchi_first_check(c).holds);
            ++checked;
        }
    }
    EXPECT_GE(checked, 50);
}


TEST(ManifoldProperties, RiemannMatchesFiniteDifferences)
{
    proptest::Gen gen(24);
    std::vector<Connection> samples{sphere()};
    const Chart xyz = proptest::chart_of_dim(3);
    samples.push_back(gen.connection(xyz, false, 3));
    samples.push_back(Connection::from_entries(xyz, {{"x", "y", "z", "exp(x*y)"}, {"z", "z", "x", "sin(y)/(1 + x^2)"}}));
    for (const auto &c : samples) {
        const ExprArray r = riemann(c);
        const std::size_t n = c.chart().dim();
        for (int k = 0; k < 10; ++k) {
            std::vector<double> pt(n);
            for (auto &v : pt) {
                v = static_cast<double>(gen.uniform(20, 130)) / 100.0;
            }
            std::map<std::string, double> env;
            for (std::size_t i = 0; i < n; ++i) {
                env.emplace(c.chart().var(i), pt[i]);
            }
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    for (std::size_t m = 0; m < n; ++m) {
                        for (std::size_t v = 0; v < n; ++v) {
                            const double exact = eval_double(r.at({a, b, m, v}), env);
                            EXPECT_NEAR(exact, proptest::riemann_fd(c, a, b, m, v, pt), 1e-6);
                        }
                    }
                }
            }
        }
    }
}
