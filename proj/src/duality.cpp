#include "skewform/duality.hpp"
#include "skewform/errors.hpp"

#include <cmath>
#include <random>
#include <set>

namespace skewform {

namespace {

void require_chart(const DiffForm &a, const Metric &g)
{
    if (!(a.chart() == g.chart())) {
        throw ChartMismatchError("form chart (" + a.chart().str() + ") differs from metric chart (" + g.chart().str() +
                                 ")");
    }
}

// Sign of e over its sample domain; 0 when it changes sign or never evaluates.
int sampled_sign(const Expr &e, const ZeroTestOptions &opts)
{
    if (e.is_constant()) {
        return sgn(e.constant_value());
    }
    std::mt19937_64 rng(opts.seed);
    const auto syms = e.symbols();
    int sign = 0;
    int good = 0;
    for (int attempt = 0; attempt < opts.samples * 4 && good < opts.samples; ++attempt) {
        std::map<std::string, double> pt;
        for (const auto &s : syms) {
            pt.emplace(s, static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 100.0);
        }
        double v = 0;
        try {
            v = eval_double(e, pt);
        } catch (const PoleError &) {
            continue;
        }
        if (!std::isfinite(v) || v == 0.0) {
            continue;
        }
        const int s = v > 0 ? 1 : -1;
        if (sign != 0 && s != sign) {
            return 0;
        }
        sign = s;
        ++good;
    }
    return sign;
}

std::optional<Expr> rational_sqrt(const Expr &e)
{
    for (const Rational &f : {Rational(1), Rational(-1)}) {
        auto n = e.numerator().scaled(f).sqrt();
        auto d = e.denominator().scaled(f).sqrt();
        if (n && d) {
            return Expr::fraction(*n, *d);
        }
    }
    return std::nullopt;
}

// Sign of the permutation (idx, complement) relative to 0..n-1.
int shuffle_sign(const MultiIndex &idx, const MultiIndex &rest)
{
    MultiIndex all = idx;
    all.insert(all.end(), rest.begin(), rest.end());
    return sort_with_sign(all);
}

MultiIndex complement(const MultiIndex &idx, std::size_t n)
{
    MultiIndex out;
    for (int i = 0; i < static_cast<int>(n); ++i) {
        if (!std::binary_search(idx.begin(), idx.end(), i)) {
            out.push_back(i);
        }
    }
    return out;
}

void for_each_subset(std::size_t n, std::size_t p, const std::function<void(const MultiIndex &)> &f)
{
    MultiIndex idx(p);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int start) {
        if (pos == p) {
            f(idx);
            return;
        }
        for (int i = start; i < static_cast<int>(n); ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

} // namespace

Metric::Metric(Chart chart, ExprMatrix g, int orientation, const ZeroTestOptions &opts)
    : chart_(std::move(chart)), g_(std::move(g)), orientation_(orientation)
{
    const std::size_t n = chart_.dim();
    if (g_.rows() != n || g_.cols() != n) {
        throw MetricError("metric must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (orientation != 1 && orientation != -1) {
        throw MetricError("orientation must be +1 or -1");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(g_(i, j) == g_(j, i))) {
                throw MetricError("metric is not symmetric at (" + chart_.var(i) + ", " + chart_.var(j) + ")");
            }
        }
    }
    det_ = skewform::determinant(g_);
    if (is_zero(det_, opts).holds) {
        throw MetricError("metric is degenerate (det g = 0)");
    }
    auto inv = skewform::inverse(g_);
    if (!inv) {
        throw MetricError("metric is not invertible");
    }
    inv_ = std::move(*inv);
    det_sign_ = sampled_sign(det_, opts);
    if (det_sign_ == 0) {
        throw MetricError("det g = " + det_.str() + " has no fixed sign");
    }
    auto vol = rational_sqrt(det_sign_ > 0 ? det_ : -det_);
    if (!vol) {
        throw MetricError("sqrt|det g| is not rational for det g = " + det_.str());
    }
    vol_ = *vol;
    // Normalize to the positive root.
    if (sampled_sign(vol_, opts) < 0) {
        vol_ = -vol_;
    }
}

Metric Metric::euclidean(Chart chart)
{
    return diagonal(chart, std::vector<Expr>(chart.dim(), Expr(1)));
}

Metric Metric::minkowski(Chart chart)
{
    std::vector<Expr> d(chart.dim(), Expr(-1));
    if (!d.empty()) {
        d[0] = Expr(1);
    }
    return diagonal(std::move(chart), d);
}

Metric Metric::diagonal(Chart chart, const std::vector<Expr> &entries)
{
    if (entries.size() != chart.dim()) {
        throw MetricError("diagonal metric needs " + std::to_string(chart.dim()) + " entries, got " +
                          std::to_string(entries.size()));
    }
    ExprMatrix g(chart.dim(), chart.dim());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        g(i, i) = entries[i];
    }
    return Metric(std::move(chart), std::move(g));
}

bool Metric::is_diagonal() const
{
    for (std::size_t i = 0; i < g_.rows(); ++i) {
        for (std::size_t j = 0; j < g_.cols(); ++j) {
            if (i != j && !g_(i, j).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

std::string Metric::str() const
{
    std::string s = "[";
    for (std::size_t i = 0; i < g_.rows(); ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < g_.cols(); ++j) {
            s += (j ? ", " : "") + g_(i, j).str();
        }
    }
    return s + "]";
}

DiffForm hodge_star(const DiffForm &a, const Metric &g)
{
    require_chart(a, g);
    const Chart &chart = a.chart();
    const std::size_t n = chart.dim();
    const int p = a.degree();
    DiffForm r(chart, p > static_cast<int>(n) ? 0 : static_cast<int>(n) - p);
    if (p > static_cast<int>(n) || a.is_zero()) {
        return r;
    }
    const ExprMatrix &inv = g.inverse();
    const bool diagonal = g.is_diagonal();
    const Expr scale = g.volume_factor() * Expr(g.orientation());
    for_each_subset(n, static_cast<std::size_t>(p), [&](const MultiIndex &j) {
        // a^J = Σ_K det(g^{-1}[J, K]) a_K
        Expr raised;
        if (diagonal) {
            const Expr &aj = a.coefficient(j);
            if (aj.is_zero()) {
                return;
            }
            Expr m(1);
            for (int i : j) {
                m *= inv(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
            }
            raised = m * aj;
        } else {
            for (const auto &[k, ak] : a.terms()) {
                raised += determinant(inv.submatrix(j, k)) * ak;
            }
        }
        if (raised.is_zero()) {
            return;
        }
        const MultiIndex rest = complement(j, n);
        const int sign = shuffle_sign(j, rest);
        r.add_term(rest, sign > 0 ? raised * scale : -(raised * scale));
    });
    return r;
}

Decision dual_closure_check(const DiffForm &a, const Metric &g, const ZeroTestOptions &opts)
{
    return is_closed(hodge_star(a, g), opts);
}

DiffForm codifferential(const DiffForm &a, const Metric &g)
{
    require_chart(a, g);
    const int p = a.degree();
    if (p < 1) {
        throw DegreeError("codifferential needs a form of degree >= 1");
    }
    const int n = static_cast<int>(a.chart().dim());
    if (p > n) {
        return DiffForm(a.chart(), p - 1);
    }
    const int exponent = n * (p + 1) + 1;
    const int sign = (exponent % 2 == 0 ? 1 : -1) * g.det_sign();
    return Expr(sign) * hodge_star(ext_d(hodge_star(a, g)), g);
}

DiffForm laplacian(const DiffForm &a, const Metric &g, LaplacianConvention conv)
{
    require_chart(a, g);
    DiffForm d_delta(a.chart(), a.degree());
    if (a.degree() >= 1) {
        d_delta = ext_d(codifferential(a, g));
    }
    const DiffForm delta_d = codifferential(ext_d(a), g);
    return conv == LaplacianConvention::Difference ? d_delta - delta_d : d_delta + delta_d;
}

Connection christoffel(const Metric &g)
{
    const Chart &chart = g.chart();
    const std::size_t n = chart.dim();
    const ExprMatrix &m = g.g();
    const ExprMatrix &inv = g.inverse();
    Connection c(chart);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                Expr v;
                for (std::size_t l = 0; l < n; ++l) {
                    if (inv(k, l).is_zero()) {
                        continue;
                    }
                    v += inv(k, l) * (diff(m(j, l), chart.var(i)) + diff(m(i, l), chart.var(j)) -
                                      diff(m(i, j), chart.var(l)));
                }
                v *= Expr(Rational(1, 2));
                c.set(k, i, j, v);
                c.set(k, j, i, v);
            }
        }
    }
    return c;
}

} // namespace skewform
