#include "skewform/duality.hpp"
#include "skewform/errors.hpp"
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

const Chart &tx()
{
    static const Chart c({"t", "x"});
    return c;
}

DiffForm F(const std::string &text, const Chart &chart = xy()) { return parse_form(text, chart); }
DiffForm S(const std::string &text, const Chart &chart = xy()) { return DiffForm::scalar(chart, parse(text)); }

int sign_power(int k) { return k % 2 == 0 ? 1 : -1; }

} // namespace

TEST(Metric, Validation)
{
    ExprMatrix asym(2, 2);
    asym(0, 0) = Expr(1);
    asym(0, 1) = Expr(1);
    asym(1, 1) = Expr(1);
    EXPECT_THROW(Metric(xy(), asym), MetricError);
    EXPECT_THROW(Metric::diagonal(xy(), {Expr(1), Expr()}), MetricError);
    EXPECT_THROW(Metric::diagonal(xy(), {Expr(1), parse("x")}), MetricError);   // sign changes
    EXPECT_THROW(Metric::diagonal(xy(), {Expr(1), parse("2")}), MetricError);   // √2
    EXPECT_THROW(Metric::diagonal(xy(), {Expr(1), parse("x^2 + 1")}), MetricError);
    EXPECT_EQ(Metric::diagonal(xy(), {Expr(1), parse("(x^2 + 1)^2")}).volume_factor(), parse("x^2 + 1"));
    const Metric polar = Metric::diagonal(xy(), {Expr(1), parse("x^2")});
    EXPECT_EQ(polar.det_sign(), 1);
    EXPECT_EQ(Metric::minkowski(tx()).det_sign(), -1);
    EXPECT_EQ(Metric::minkowski(tx()).volume_factor(), Expr(1));
}

TEST(Hodge, Euclidean2D)
{
    const Metric e = Metric::euclidean(xy());
    EXPECT_EQ(hodge_star(F("d[x]"), e), F("d[y]"));
    EXPECT_EQ(hodge_star(F("d[y]"), e), F("-d[x]"));
    EXPECT_EQ(hodge_star(S("1"), e), F("d[x]^d[y]"));
    EXPECT_EQ(hodge_star(F("d[x]^d[y]"), e), S("1"));
}

TEST(Hodge, VolumeFormInNDimensions)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        const Chart c = proptest::chart_of_dim(n);
        MultiIndex all;
        for (int i = 0; i < static_cast<int>(n); ++i) {
            all.push_back(i);
        }
        EXPECT_EQ(hodge_star(DiffForm::scalar(c, Expr(1)), Metric::euclidean(c)), DiffForm::basis(c, all, Expr(1)));
    }
}

TEST(Hodge, Minkowski2D)
{
    const Metric m = Metric::minkowski(tx());
    EXPECT_EQ(hodge_star(F("d[t]", tx()), m), F("d[x]", tx()));
    EXPECT_EQ(hodge_star(F("d[x]", tx()), m), F("d[t]", tx()));
    // ⋆⋆ = (-1)^{p(n-p)} sign(det g) = (-1)(-1) = +1 on 1-forms.
    EXPECT_EQ(hodge_star(hodge_star(F("d[t]", tx()), m), m), F("d[t]", tx()));
    EXPECT_EQ(hodge_star(S("1", tx()), m), F("d[t]^d[x]", tx()));
    EXPECT_EQ(hodge_star(F("d[t]^d[x]", tx()), m), S("-1", tx()));
}

TEST(Hodge, CurvedAndNonDiagonal)
{
    const Metric polar = Metric::diagonal(xy(), {Expr(1), parse("x^2")});
    EXPECT_EQ(hodge_star(F("d[x]"), polar), F("x*d[y]"));
    EXPECT_EQ(hodge_star(F("d[y]"), polar), F("-1/x*d[x]"));

    ExprMatrix g(2, 2);
    g(0, 0) = Expr(2);
    g(0, 1) = Expr(1);
    g(1, 0) = Expr(1);
    g(1, 1) = Expr(1);
    const Metric m(xy(), g);
    // det = 1, g^{-1} = [[1, -1], [-1, 2]].
    EXPECT_EQ(hodge_star(F("d[x]"), m), F("d[y] + d[x]"));
    EXPECT_EQ(hodge_star(F("d[y]"), m), F("-d[y] - 2*d[x]"));
    EXPECT_EQ(hodge_star(hodge_star(F("d[x]"), m), m), F("-d[x]"));
}

TEST(Hodge, OrientationFlipsSign)
{
    ExprMatrix g = ExprMatrix::identity(2);
    const Metric flipped(xy(), g, -1);
    EXPECT_EQ(hodge_star(F("d[x]"), flipped), F("-d[y]"));
}

TEST(DualClosure, Examples)
{
    const Metric e = Metric::euclidean(xy());
    EXPECT_TRUE(dual_closure_check(F("d[x]"), e).holds);
    EXPECT_FALSE(dual_closure_check(F("x*d[x]"), e).holds);
    EXPECT_EQ(ext_d(hodge_star(F("x*d[x]"), e)), F("d[x]^d[y]"));
    EXPECT_TRUE(dual_closure_check(F("d[x]^d[y]"), e).holds);
}

TEST(Codifferential, Examples)
{
    const Metric e = Metric::euclidean(xy());
    EXPECT_EQ(codifferential(F("x*d[x] + y*d[y]"), e), S("-2"));
    EXPECT_TRUE(codifferential(F("3*d[x] - 5*d[y]"), e).is_zero());
    EXPECT_THROW(codifferential(S("x"), e), DegreeError);
    // Negative divergence in 3D.
    const Chart xyz({"x", "y", "z"});
    EXPECT_EQ(codifferential(F("x^2*d[x] + y*z*d[y] + z*d[z]", xyz), Metric::euclidean(xyz)),
              DiffForm::scalar(xyz, parse("-2*x - z - 1")));
}

TEST(Laplacian, Conventions)
{
    const Metric e = Metric::euclidean(xy());
    EXPECT_EQ(laplacian(S("x^2 + y^2"), e), S("4"));
    EXPECT_EQ(laplacian(S("x^2 + y^2"), e, LaplacianConvention::Hodge), S("-4"));
    const Metric m = Metric::minkowski(tx());
    // f_tt - f_xx = 4.
    EXPECT_EQ(laplacian(S("t^2 - x^2", tx()), m), S("4", tx()));
    EXPECT_TRUE(laplacian(S("3*x - 2*y + 7"), e).is_zero());
}

TEST(Laplacian, OneForms)
{
    const Metric e = Metric::euclidean(xy());
    const DiffForm a = F("x^2*y*d[x]");
    const DiffForm hodge = laplacian(a, e, LaplacianConvention::Hodge);
    // Flat space: the Hodge Laplacian is minus the componentwise Laplacian.
    EXPECT_EQ(hodge, F("-2*y*d[x]"));
    EXPECT_EQ(laplacian(a, e), ext_d(codifferential(a, e)) - codifferential(ext_d(a), e));
}

TEST(Christoffel, PolarCoordinates)
{
    const Metric polar = Metric::diagonal(xy(), {Expr(1), parse("x^2")});
    const Connection c = christoffel(polar);
    EXPECT_EQ(c.gamma(0, 1, 1), parse("-x"));
    EXPECT_EQ(c.gamma(1, 0, 1), parse("1/x"));
    EXPECT_EQ(c.gamma(1, 1, 0), parse("1/x"));
    EXPECT_EQ(c.gamma(0, 0, 0), Expr());
    EXPECT_TRUE(is_zero(riemann(c)).holds);
}

// --- properties --------------------------------------------------------------

namespace {

Metric random_constant_diagonal(proptest::Gen &gen, const Chart &chart)
{
    static const long squares[] = {1, 4, 9, 16, 25};
    std::vector<Expr> d;
    for (std::size_t i = 0; i < chart.dim(); ++i) {
        Rational v(squares[gen.uniform(0, 4)], squares[gen.uniform(0, 4)]);
        v.canonicalize();
        d.emplace_back(gen.coin() ? v : -v);
    }
    return Metric::diagonal(chart, d);
}

} // namespace

TEST(DualityProperties, HodgeInvolution)
{
    proptest::Gen gen(31);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const Metric g = random_constant_diagonal(gen, chart);
        const int n = static_cast<int>(chart.dim());
        const int p = static_cast<int>(gen.uniform(0, n));
        const DiffForm a = gen.form(chart, p);
        EXPECT_EQ(hodge_star(hodge_star(a, g), g), Expr(sign_power(p * (n - p)) * g.det_sign()) * a);
    }
}

TEST(DualityProperties, CodifferentialSquaredIsZero)
{
    proptest::Gen gen(32);
    for (int i = 0; i < 60; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const Metric e = Metric::euclidean(chart);
        const int p = static_cast<int>(gen.uniform(2, static_cast<long>(chart.dim())));
        const DiffForm a = gen.form(chart, p);
        EXPECT_TRUE(codifferential(codifferential(a, e), e).is_zero()) << a.str();
    }
}

TEST(DualityProperties, LaplacianIsLaplaceBeltramiOnFunctions)
{
    proptest::Gen gen(33);
    for (int i = 0; i < 40; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 4)));
        const Metric g = random_constant_diagonal(gen, chart);
        const Expr f = gen.poly(chart.vars(), 4, 4);
        Expr expected;
        for (std::size_t k = 0; k < chart.dim(); ++k) {
            expected += g.inverse()(k, k) * diff(diff(f, chart.var(k)), chart.var(k));
        }
        EXPECT_EQ(laplacian(DiffForm::scalar(chart, f), g), DiffForm::scalar(chart, expected));
    }
}

// ∫⟨da, b⟩ = ∫⟨a, δb⟩ on the unit box when both forms carry a polynomial bump
// cutoff vanishing to second order on the boundary. Gauss-Legendre quadrature.
namespace {

double inner_density(const DiffForm &u, const DiffForm &v, const std::map<std::string, double> &pt)
{
    double s = 0;
    for (const auto &[idx, c] : u.terms()) {
        const Expr w = v.coefficient(idx);
        if (w.is_zero()) {
            continue;
        }
        s += eval_double(c, pt) * eval_double(w, pt);
    }
    return s;
}

double integrate_box(const Chart &chart, const std::function<double(const std::map<std::string, double> &)> &f)
{
    static const double nodes[] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                   0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
    static const double weights[] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                     0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    const std::size_t n = chart.dim();
    std::vector<std::size_t> k(n, 0);
    double total = 0;
    for (;;) {
        std::map<std::string, double> pt;
        double w = 1;
        for (std::size_t i = 0; i < n; ++i) {
            pt[chart.var(i)] = 0.5 * (nodes[k[i]] + 1.0);
            w *= 0.5 * weights[k[i]];
        }
        total += w * f(pt);
        std::size_t i = 0;
        while (i < n && ++k[i] == 6) {
            k[i++] = 0;
        }
        if (i == n) {
            break;
        }
    }
    return total;
}

} // namespace

TEST(DualityProperties, CodifferentialIsAdjointOfD)
{
    proptest::Gen gen(34);
    for (int i = 0; i < 12; ++i) {
        const Chart chart = proptest::chart_of_dim(static_cast<std::size_t>(gen.uniform(2, 3)));
        const Metric e = Metric::euclidean(chart);
        Expr bump(1);
        for (const auto &v : chart.vars()) {
            const Expr s = Expr::symbol(v);
            bump *= s * s * (Expr(1) - s) * (Expr(1) - s);
        }
        const int p = static_cast<int>(gen.uniform(0, 1));
        const DiffForm a = bump * gen.form(chart, p, 2, 1);
        const DiffForm b = bump * gen.form(chart, p + 1, 2, 1);
        const DiffForm da = ext_d(a);
        const DiffForm db = codifferential(b, e);
        const double lhs = integrate_box(chart, [&](const auto &pt) { return inner_density(da, b, pt); });
        const double rhs = integrate_box(chart, [&](const auto &pt) { return inner_density(a, db, pt); });
        EXPECT_NEAR(lhs, rhs, 1e-3) << a.str() << " | " << b.str();
    }
}
