#include "skewform/relations.hpp"
#include "skewform/errors.hpp"

#include <cmath>
#include <random>
#include <set>

namespace skewform {

namespace {

double sample_value(std::mt19937_64 &rng) { return static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 100.0; }

// Rank of a dense double matrix by elimination with partial pivoting.
std::size_t numeric_rank(std::vector<std::vector<double>> m)
{
    if (m.empty()) {
        return 0;
    }
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    double scale = 0;
    for (const auto &r : m) {
        for (double v : r) {
            scale = std::max(scale, std::fabs(v));
        }
    }
    const double eps = 1e-9 * std::max(1.0, scale);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) {
                piv = r;
            }
        }
        if (std::fabs(m[piv][c]) <= eps) {
            continue;
        }
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            const double f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) {
                m[r][k] -= f * m[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

void require_ambient(const DiffForm &a, const Pseudostructure &s)
{
    if (!(a.chart() == s.ambient())) {
        throw ChartMismatchError("form chart (" + a.chart().str() + ") differs from pseudostructure ambient chart (" +
                                 s.ambient().str() + ")");
    }
}

} // namespace

// --- Pseudostructure -----------------------------------------------------------

Pseudostructure::Pseudostructure(Chart ambient, Chart params, std::vector<Expr> map, const ZeroTestOptions &opts)
    : ambient_(std::move(ambient)), params_(std::move(params)), map_(std::move(map))
{
    const std::size_t n = ambient_.dim();
    const std::size_t m = params_.dim();
    if (map_.size() != n) {
        throw PreconditionError("pseudostructure needs " + std::to_string(n) + " components, got " +
                                std::to_string(map_.size()));
    }
    if (m >= n) {
        throw PreconditionError("pseudostructure dimension " + std::to_string(m) + " must be below ambient dimension " +
                                std::to_string(n));
    }
    jac_ = ExprMatrix(n, m);
    std::set<std::string> syms;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            jac_(i, k) = diff(map_[i], params_.var(k));
            for (const auto &v : jac_(i, k).symbols()) {
                syms.insert(v);
            }
        }
    }
    // Generic rank is at least the rank at any point, so one full-rank sample suffices.
    std::mt19937_64 rng(opts.seed);
    for (int attempt = 0; attempt < opts.samples; ++attempt) {
        std::map<std::string, double> pt;
        for (const auto &v : syms) {
            pt.emplace(v, sample_value(rng));
        }
        std::vector<std::vector<double>> num(n, std::vector<double>(m));
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                try {
                    num[i][k] = eval_double(jac_(i, k), pt);
                } catch (const PoleError &) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && numeric_rank(num) == m) {
            return;
        }
    }
    throw PreconditionError("parametrization Jacobian never reaches rank " + std::to_string(m));
}

std::map<std::string, Expr> Pseudostructure::substitution() const
{
    std::map<std::string, Expr> sub;
    for (std::size_t i = 0; i < ambient_.dim(); ++i) {
        sub.emplace(ambient_.var(i), map_[i]);
    }
    return sub;
}

std::string Pseudostructure::str() const
{
    std::string s = "(" + params_.str() + ") ->";
    for (std::size_t i = 0; i < ambient_.dim(); ++i) {
        s += (i ? ", " : " ") + ambient_.var(i) + " = " + map_[i].str();
    }
    return s;
}

DiffForm pullback(const DiffForm &a, const Pseudostructure &s)
{
    require_ambient(a, s);
    const Chart &params = s.params();
    const auto sub = s.substitution();
    std::vector<DiffForm> dphi;
    for (std::size_t i = 0; i < s.ambient().dim(); ++i) {
        DiffForm d(params, 1);
        for (std::size_t k = 0; k < params.dim(); ++k) {
            d.add_term({static_cast<int>(k)}, s.jacobian()(i, k));
        }
        dphi.push_back(std::move(d));
    }
    DiffForm r(params, a.degree());
    for (const auto &[idx, c] : a.terms()) {
        DiffForm term = DiffForm::scalar(params, subs(c, sub));
        for (int i : idx) {
            term = wedge(term, dphi[static_cast<std::size_t>(i)]);
            if (term.is_zero()) {
                break;
            }
        }
        if (!term.is_zero()) {
            r += term;
        }
    }
    return r;
}

DiffForm interior_d(const DiffForm &a, const Pseudostructure &s) { return ext_d(pullback(a, s)); }

Metric induced_metric(const Metric &g, const Pseudostructure &s)
{
    if (!(g.chart() == s.ambient())) {
        throw ChartMismatchError("metric chart (" + g.chart().str() + ") differs from pseudostructure ambient chart (" +
                                 s.ambient().str() + ")");
    }
    const auto sub = s.substitution();
    const std::size_t n = s.ambient().dim();
    ExprMatrix gs(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            gs(i, j) = subs(g.g()(i, j), sub);
        }
    }
    const ExprMatrix &j = s.jacobian();
    return Metric(s.params(), j.transposed() * gs * j);
}

Decision dual_closure_on(const DiffForm &a, const Metric &g, const Pseudostructure &s, DualOrder order,
                         const ZeroTestOptions &opts)
{
    if (order == DualOrder::AmbientThenPullback) {
        return is_zero(interior_d(hodge_star(a, g), s), opts);
    }
    return is_closed(hodge_star(pullback(a, s), induced_metric(g, s)), opts);
}

// --- Relation / classification ---------------------------------------------------

Relation::Relation(DiffForm psi, DiffForm omega) : psi_(std::move(psi)), omega_(std::move(omega))
{
    if (!(psi_.chart() == omega_.chart())) {
        throw ChartMismatchError("relation sides live on different charts");
    }
    if (omega_.degree() != psi_.degree() + 1) {
        throw DegreeError("relation dψ = ω needs deg ω = deg ψ + 1, got " + std::to_string(psi_.degree()) + " and " +
                          std::to_string(omega_.degree()));
    }
}

std::string Relation::str() const { return "d(" + psi_.str() + ") = " + omega_.str(); }

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::Identical:
        return "IDENTICAL";
    case Classification::ClosedRhs:
        return "CLOSED_RHS";
    case Classification::NonIdentical:
        return "NONIDENTICAL";
    }
    return "?";
}

std::optional<Classification> classification_from_string(const std::string &s)
{
    for (auto c : {Classification::Identical, Classification::ClosedRhs, Classification::NonIdentical}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

Verdict classify(const Relation &r, const ZeroTestOptions &opts)
{
    DiffForm residual = r.omega() - ext_d(r.psi());
    DiffForm commutator = ext_d(r.omega());
    const Decision same = is_zero(residual, opts);
    Verdict v{Classification::Identical, std::move(residual), std::move(commutator), std::nullopt, same.probabilistic};
    if (same.holds) {
        return v;
    }
    const Decision closed = is_zero(v.commutator, opts);
    v.probabilistic = v.probabilistic || closed.probabilistic;
    v.classification = closed.holds ? Classification::ClosedRhs : Classification::NonIdentical;
    return v;
}

Verdict classify_on(const Relation &r, const Pseudostructure &s, const ZeroTestOptions &opts)
{
    const Relation pulled(pullback(r.psi(), s), pullback(r.omega(), s));
    Verdict v = classify(pulled, opts);
    const Decision closed = is_zero(v.commutator, opts);
    v.pi_closure = closed.holds;
    v.probabilistic = v.probabilistic || closed.probabilistic;
    return v;
}

// --- degenerate scan -----------------------------------------------------------------

std::string to_string(ScanKind k)
{
    switch (k) {
    case ScanKind::Jacobian:
        return "jacobian";
    case ScanKind::Determinant:
        return "determinant";
    case ScanKind::Poisson:
        return "poisson";
    }
    return "?";
}

std::optional<ScanKind> scan_kind_from_string(const std::string &s)
{
    for (auto k : {ScanKind::Jacobian, ScanKind::Determinant, ScanKind::Poisson}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

Expr poisson_bracket(const Expr &f, const Expr &g, const std::vector<std::pair<std::string, std::string>> &pairs)
{
    Expr r;
    for (const auto &[q, p] : pairs) {
        r += diff(f, q) * diff(g, p) - diff(f, p) * diff(g, q);
    }
    return r;
}

namespace {

Expr build_functional(const ScanRequest &req, const Chart &chart)
{
    switch (req.kind) {
    case ScanKind::Jacobian: {
        std::vector<std::string> vars = req.vars.empty() ? chart.vars() : req.vars;
        for (const auto &v : vars) {
            chart.index_of(v);
        }
        if (vars.size() != req.exprs.size()) {
            throw PreconditionError("jacobian scan needs as many functions as variables, got " +
                                    std::to_string(req.exprs.size()) + " and " + std::to_string(vars.size()));
        }
        ExprMatrix j(vars.size(), vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            for (std::size_t k = 0; k < vars.size(); ++k) {
                j(i, k) = diff(req.exprs[i], vars[k]);
            }
        }
        return determinant(j);
    }
    case ScanKind::Determinant: {
        std::size_t k = 0;
        while (k * k < req.exprs.size()) {
            ++k;
        }
        if (k == 0 || k * k != req.exprs.size()) {
            throw PreconditionError("determinant scan needs a square array, got " + std::to_string(req.exprs.size()) +
                                    " entries");
        }
        ExprMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t c = 0; c < k; ++c) {
                m(i, c) = req.exprs[i * k + c];
            }
        }
        return determinant(m);
    }
    case ScanKind::Poisson: {
        if (req.exprs.size() != 2) {
            throw PreconditionError("poisson scan needs exactly two functions");
        }
        if (req.pairs.empty()) {
            throw PreconditionError("poisson scan needs a (q, p) pairing of chart variables");
        }
        std::set<std::string> seen;
        for (const auto &[q, p] : req.pairs) {
            chart.index_of(q);
            chart.index_of(p);
            if (!seen.insert(q).second || !seen.insert(p).second) {
                throw PreconditionError("variable paired twice in poisson pairing");
            }
        }
        return poisson_bracket(req.exprs[0], req.exprs[1], req.pairs);
    }
    }
    return {};
}

// First root of F along one random line, if any.
std::optional<std::vector<double>> root_on_line(const Expr &f, const std::vector<std::string> &vars,
                                                std::mt19937_64 &rng, double tol)
{
    const std::size_t k = vars.size();
    std::vector<double> base(k);
    std::vector<double> dir(k);
    double norm = 0;
    for (std::size_t i = 0; i < k; ++i) {
        base[i] = static_cast<double>(static_cast<long>(rng() % 4001) - 2000) / 1000.0;
        dir[i] = static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 1000.0;
        norm += dir[i] * dir[i];
    }
    if (norm == 0) {
        return std::nullopt;
    }
    norm = std::sqrt(norm);
    for (auto &d : dir) {
        d /= norm;
    }
    std::map<std::string, double> pt;
    auto point = [&](double s) {
        std::vector<double> x(k);
        for (std::size_t i = 0; i < k; ++i) {
            x[i] = base[i] + s * dir[i];
        }
        return x;
    };
    auto value = [&](double s) -> std::optional<double> {
        const auto x = point(s);
        for (std::size_t i = 0; i < k; ++i) {
            pt[vars[i]] = x[i];
        }
        try {
            const double v = eval_double(f, pt);
            if (std::isfinite(v)) {
                return v;
            }
        } catch (const PoleError &) {
        }
        return std::nullopt;
    };
    const int steps = 128;
    const double lo = -4.0;
    const double hi = 4.0;
    std::optional<double> prev = value(lo);
    double prev_s = lo;
    for (int i = 1; i <= steps; ++i) {
        const double s = lo + (hi - lo) * i / steps;
        const std::optional<double> cur = value(s);
        if (prev && cur && ((*prev <= 0 && *cur >= 0) || (*prev >= 0 && *cur <= 0))) {
            double a = prev_s;
            double b = s;
            double fa = *prev;
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(a)); ++it) {
                const double mid = 0.5 * (a + b);
                const auto fm = value(mid);
                if (!fm) {
                    break;
                }
                if (*fm == 0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0) == (*fm < 0)) {
                    a = mid;
                    fa = *fm;
                } else {
                    b = mid;
                }
            }
            const double root = 0.5 * (a + b);
            const auto fr = value(root);
            if (fr && std::fabs(*fr) <= tol) {
                return point(root);
            }
        }
        prev = cur;
        prev_s = s;
    }
    return std::nullopt;
}

} // namespace

LocusReport degenerate_scan(const ScanRequest &req, const Chart &chart, const ScanOptions &opts)
{
    LocusReport rep{req.kind, build_functional(req, chart), false, false, {}, {}};
    const Decision zero = is_zero(rep.functional, opts.zero);
    rep.identically_zero = zero.holds;
    rep.probabilistic = zero.probabilistic;
    if (zero.holds) {
        return rep;
    }
    const auto syms = rep.functional.symbols();
    rep.variables.assign(syms.begin(), syms.end());
    if (rep.variables.empty()) {
        return rep;
    }
    for (int line = 0; line < opts.lines; ++line) {
        // Independent substream per line.
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(line)};
        std::mt19937_64 rng(seq);
        if (auto p = root_on_line(rep.functional, rep.variables, rng, opts.tolerance)) {
            rep.points.push_back(std::move(*p));
        }
    }
    return rep;
}

// --- chain -----------------------------------------------------------------------------

std::vector<ChainStep> integrate_chain(const Relation &r, int max_steps, const ZeroTestOptions &opts)
{
    std::vector<ChainStep> chain;
    if (max_steps <= 0) {
        return chain;
    }
    if (!is_closed(r.omega(), opts).holds) {
        throw NotClosedError("right-hand side '" + r.omega().str() + "' is not closed; nothing to integrate");
    }
    DiffForm psi = r.psi();
    DiffForm omega = r.omega();
    while (static_cast<int>(chain.size()) < max_steps) {
        DiffForm theta = homotopy_antiderivative(omega, {}, opts);
        const Decision witness = is_zero(omega - ext_d(theta), opts);
        const DiffForm difference = psi - theta;
        const Decision literal = is_closed(difference, opts);
        const int degree = theta.degree();
        chain.push_back(ChainStep{degree, omega, psi, theta, witness, literal});
        if (degree == 0 || difference.is_zero()) {
            break;
        }
        if (!is_closed(difference, opts).holds) {
            break;
        }
        omega = difference;
        psi = DiffForm(omega.chart(), degree - 1);
    }
    return chain;
}

std::vector<ChainStep> integrate_chain(const Relation &r, const Pseudostructure &s, int max_steps,
                                       const ZeroTestOptions &opts)
{
    if (max_steps <= 0) {
        return {};
    }
    return integrate_chain(Relation(pullback(r.psi(), s), pullback(r.omega(), s)), max_steps, opts);
}

} // namespace skewform
