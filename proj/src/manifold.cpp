#include "skewform/manifold.hpp"
#include "skewform/errors.hpp"
#include "skewform/parser.hpp"

namespace skewform {

namespace {

void require_chart(const DiffForm &a, const Connection &c)
{
    if (!(a.chart() == c.chart())) {
        throw ChartMismatchError("form chart (" + a.chart().str() + ") differs from connection chart (" +
                                 c.chart().str() + ")");
    }
}

void require_degree_one(const DiffForm &a, const char *op)
{
    if (a.degree() != 1) {
        throw DegreeError(std::string(op) + " needs a 1-form, got a " + std::to_string(a.degree()) + "-form");
    }
}

std::vector<Expr> components(const DiffForm &a)
{
    std::vector<Expr> out(a.chart().dim());
    for (const auto &[idx, c] : a.terms()) {
        out[static_cast<std::size_t>(idx[0])] = c;
    }
    return out;
}

} // namespace

ExprArray::ExprArray(std::size_t dim, std::size_t rank) : dim_(dim), rank_(rank)
{
    std::size_t size = 1;
    for (std::size_t i = 0; i < rank; ++i) {
        size *= dim;
    }
    data_.resize(size);
}

std::size_t ExprArray::offset(std::initializer_list<std::size_t> idx) const
{
    if (idx.size() != rank_) {
        throw Error("array of rank " + std::to_string(rank_) + " indexed with " + std::to_string(idx.size()) +
                    " indices");
    }
    std::size_t off = 0;
    for (std::size_t i : idx) {
        if (i >= dim_) {
            throw Error("array index " + std::to_string(i) + " out of range");
        }
        off = off * dim_ + i;
    }
    return off;
}

Decision is_zero(const ExprArray &a, const ZeroTestOptions &opts)
{
    Decision d{true, false};
    for (const auto &e : a.data()) {
        d = d && is_zero(e, opts);
        if (!d.holds) {
            break;
        }
    }
    return d;
}

Connection::Connection(Chart chart) : chart_(std::move(chart)), g_(chart_.dim(), 3) {}

Connection Connection::from_entries(Chart chart, const std::vector<ConnectionEntry> &entries)
{
    Connection c(std::move(chart));
    for (const auto &e : entries) {
        const std::size_t s = c.chart_.index_of(e.upper);
        const std::size_t a = c.chart_.index_of(e.lower1);
        const std::size_t b = c.chart_.index_of(e.lower2);
        c.set(s, a, b, c.gamma(s, a, b) + parse(e.value));
    }
    return c;
}

void Connection::set(std::size_t s, std::size_t a, std::size_t b, const Expr &value) { g_.at({s, a, b}) = value; }

ExprMatrix covariant_deriv(const DiffForm &a, const Connection &c)
{
    require_chart(a, c);
    require_degree_one(a, "covariant_deriv");
    const Chart &chart = a.chart();
    const std::size_t n = chart.dim();
    const auto comp = components(a);
    ExprMatrix m(n, n);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t al = 0; al < n; ++al) {
            Expr v = diff(comp[b], chart.var(al));
            for (std::size_t s = 0; s < n; ++s) {
                v += c.gamma(s, b, al) * comp[s];
            }
            m(b, al) = v;
        }
    }
    return m;
}

ExprMatrix evo_commutator(const DiffForm &a, const Connection &c)
{
    require_chart(a, c);
    require_degree_one(a, "evo_commutator");
    const Chart &chart = a.chart();
    const std::size_t n = chart.dim();
    const auto comp = components(a);
    ExprMatrix k(n, n);
    for (std::size_t al = 0; al < n; ++al) {
        for (std::size_t b = al + 1; b < n; ++b) {
            Expr v = diff(comp[b], chart.var(al)) - diff(comp[al], chart.var(b));
            for (std::size_t s = 0; s < n; ++s) {
                v += (c.gamma(s, b, al) - c.gamma(s, al, b)) * comp[s];
            }
            k(al, b) = v;
            k(b, al) = -v;
        }
    }
    return k;
}

DiffForm evo_d(const DiffForm &a, const Connection &c)
{
    require_chart(a, c);
    const Chart &chart = a.chart();
    const std::size_t n = chart.dim();
    DiffForm r = ext_d(a);
    // Basis correction: Σ_I Σ_α Σ_k Γ^σ_{i_k α} a_{I with i_k -> σ} dx^α ^ dx^I,
    // summed over increasing I whether or not a_I itself is stored.
    if (a.degree() == 0) {
        return r;
    }
    MultiIndex idx(static_cast<std::size_t>(a.degree()));
    std::function<void(std::size_t, int)> visit = [&](std::size_t pos, int start) {
        if (pos == idx.size()) {
            for (std::size_t al = 0; al < n; ++al) {
                Expr v;
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    for (std::size_t s = 0; s < n; ++s) {
                        const Expr &g = c.gamma(s, static_cast<std::size_t>(idx[k]), al);
                        if (g.is_zero()) {
                            continue;
                        }
                        MultiIndex swapped = idx;
                        swapped[k] = static_cast<int>(s);
                        v += g * a.coefficient(swapped);
                    }
                }
                if (v.is_zero()) {
                    continue;
                }
                MultiIndex out{static_cast<int>(al)};
                out.insert(out.end(), idx.begin(), idx.end());
                r += DiffForm::basis(chart, out, v);
            }
            return;
        }
        for (int i = start; i < static_cast<int>(n); ++i) {
            idx[pos] = i;
            visit(pos + 1, i + 1);
        }
    };
    visit(0, 0);
    return r;
}

ExprArray torsion(const Connection &c)
{
    const std::size_t n = c.chart().dim();
    ExprArray t(n, 3);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                t.at({s, a, b}) = c.gamma(s, b, a) - c.gamma(s, a, b);
            }
        }
    }
    return t;
}

ExprArray riemann(const Connection &c)
{
    const Chart &chart = c.chart();
    const std::size_t n = chart.dim();
    ExprArray r(n, 4);
    for (std::size_t rho = 0; rho < n; ++rho) {
        for (std::size_t sig = 0; sig < n; ++sig) {
            for (std::size_t mu = 0; mu < n; ++mu) {
                for (std::size_t nu = mu + 1; nu < n; ++nu) {
                    Expr v = diff(c.gamma(rho, nu, sig), chart.var(mu)) - diff(c.gamma(rho, mu, sig), chart.var(nu));
                    for (std::size_t lam = 0; lam < n; ++lam) {
                        v += c.gamma(rho, mu, lam) * c.gamma(lam, nu, sig) - c.gamma(rho, nu, lam) * c.gamma(lam, mu, sig);
                    }
                    r.at({rho, sig, mu, nu}) = v;
                    r.at({rho, sig, nu, mu}) = -v;
                }
            }
        }
    }
    return r;
}

Decision bianchi_first_check(const Connection &c, const ZeroTestOptions &opts)
{
    if (!is_zero(torsion(c), opts).holds) {
        throw PreconditionError("first Bianchi identity is checked only for torsion-free connections");
    }
    const ExprArray r = riemann(c);
    const std::size_t n = c.chart().dim();
    Decision d{true, false};
    for (std::size_t rho = 0; rho < n; ++rho) {
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t m = 0; m < n; ++m) {
                for (std::size_t v = 0; v < n; ++v) {
                    d = d && is_zero(r.at({rho, s, m, v}) + r.at({rho, m, v, s}) + r.at({rho, v, s, m}), opts);
                    if (!d.holds) {
                        return d;
                    }
                }
            }
        }
    }
    return d;
}

} // namespace skewform
