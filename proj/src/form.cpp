#include "skewform/form.hpp"
#include "skewform/detail/grammar.hpp"
#include "skewform/errors.hpp"

#include <algorithm>

namespace skewform {

namespace {

const char *const kHomotopyParameter = "%t";

void require_same_chart(const DiffForm &a, const DiffForm &b)
{
    if (!(a.chart() == b.chart())) {
        throw ChartMismatchError("forms live on different charts (" + a.chart().str() + ") and (" + b.chart().str() + ")");
    }
}

std::string basis_str(const Chart &chart, const MultiIndex &idx)
{
    std::string s;
    for (int i : idx) {
        if (!s.empty()) {
            s += " ^ ";
        }
        s += "d[" + chart.var(static_cast<std::size_t>(i)) + "]";
    }
    return s;
}

struct FormSemantics {
    using Value = DiffForm;

    const Chart &chart;
    const FormParseOptions &opts;

    Value number(const Rational &q, std::size_t) const { return DiffForm::scalar(chart, Expr(q)); }

    Value identifier(const std::string &name, std::size_t pos) const
    {
        if (opts.lookup) {
            if (auto f = opts.lookup(name)) {
                if (!(f->chart() == chart)) {
                    throw ParseError("form '" + name + "' lives on a different chart", pos);
                }
                return *f;
            }
        }
        if (opts.scalars && !chart.contains(name) && !opts.scalars->count(name)) {
            throw ParseError("'" + name + "' is not a declared scalar or form", pos);
        }
        return DiffForm::scalar(chart, Expr::symbol(name));
    }

    static const Expr &scalar_of(const Value &v, std::size_t pos, const char *what)
    {
        if (v.degree() != 0) {
            throw ParseError(std::string(what) + " needs a 0-form, got a " + std::to_string(v.degree()) + "-form", pos);
        }
        static const Expr zero;
        return v.terms().empty() ? zero : v.terms().begin()->second;
    }

    Value call(Func f, const Value &arg, std::size_t pos) const
    {
        return DiffForm::scalar(chart, Expr::apply(f, scalar_of(arg, pos, "function argument")));
    }

    Value differential(const std::string &var, std::size_t pos) const
    {
        if (!chart.contains(var)) {
            throw ParseError("'" + var + "' is not a chart variable", pos);
        }
        return DiffForm::differential(chart, var);
    }

    static void check_degrees(Value &a, const Value &b, std::size_t pos)
    {
        if (a.degree() == b.degree()) {
            return;
        }
        if (a.is_zero()) {
            a = DiffForm(a.chart(), b.degree());
            return;
        }
        if (!b.is_zero()) {
            throw ParseError("cannot add a " + std::to_string(a.degree()) + "-form and a " + std::to_string(b.degree()) +
                                 "-form",
                             pos);
        }
    }

    Value add(Value a, const Value &b, std::size_t pos) const
    {
        check_degrees(a, b, pos);
        if (b.is_zero()) {
            return a;
        }
        return a += b;
    }

    Value sub(Value a, const Value &b, std::size_t pos) const
    {
        check_degrees(a, b, pos);
        if (b.is_zero()) {
            return a;
        }
        return a -= b;
    }

    Value mul(const Value &a, const Value &b, std::size_t) const { return skewform::wedge(a, b); }

    Value div(const Value &a, const Value &b, std::size_t pos) const
    {
        const Expr &s = scalar_of(b, pos, "divisor");
        if (s.is_zero()) {
            throw ParseError("division by zero", pos);
        }
        return (Expr(1) / s) * a;
    }

    Value neg(const Value &a, std::size_t) const { return -a; }

    Value power(const Value &a, int k, std::size_t pos) const
    {
        return DiffForm::scalar(chart, pow(scalar_of(a, pos, "power base"), k));
    }

    Value wedge(const Value &a, const Value &b, std::size_t) const { return skewform::wedge(a, b); }
};

} // namespace

int sort_with_sign(MultiIndex &idx)
{
    int sign = 1;
    // Insertion sort counting transpositions.
    for (std::size_t i = 1; i < idx.size(); ++i) {
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) {
                return 0;
            }
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    }
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (idx[i - 1] == idx[i]) {
            return 0;
        }
    }
    return sign;
}

// --- DiffForm -----------------------------------------------------------------

DiffForm::DiffForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree)
{
    if (degree < 0) {
        throw DegreeError("form degree must be non-negative");
    }
}

DiffForm DiffForm::scalar(Chart chart, const Expr &value)
{
    DiffForm f(std::move(chart), 0);
    f.add_term({}, value);
    return f;
}

DiffForm DiffForm::differential(Chart chart, const std::string &var)
{
    const auto i = static_cast<int>(chart.index_of(var));
    DiffForm f(std::move(chart), 1);
    f.add_term({i}, Expr(1));
    return f;
}

DiffForm DiffForm::basis(Chart chart, MultiIndex idx, const Expr &coeff)
{
    for (int i : idx) {
        if (i < 0 || static_cast<std::size_t>(i) >= chart.dim()) {
            throw Error("basis index " + std::to_string(i) + " out of range for chart (" + chart.str() + ")");
        }
    }
    const int degree = static_cast<int>(idx.size());
    DiffForm f(std::move(chart), degree);
    const int sign = sort_with_sign(idx);
    if (sign != 0) {
        f.add_term(std::move(idx), sign > 0 ? coeff : -coeff);
    }
    return f;
}

Expr DiffForm::coefficient(MultiIndex idx) const
{
    const int sign = sort_with_sign(idx);
    if (sign == 0) {
        return {};
    }
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        return {};
    }
    return sign > 0 ? it->second : -it->second;
}

Expr DiffForm::value() const
{
    if (degree_ != 0) {
        throw DegreeError("value() needs a 0-form");
    }
    return terms_.empty() ? Expr() : terms_.begin()->second;
}

void DiffForm::add_term(MultiIndex sorted_idx, const Expr &coeff)
{
    if (coeff.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(sorted_idx), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

DiffForm DiffForm::operator-() const
{
    DiffForm r = *this;
    for (auto &t : r.terms_) {
        t.second = -t.second;
    }
    return r;
}

DiffForm &DiffForm::operator+=(const DiffForm &o)
{
    require_same_chart(*this, o);
    if (degree_ != o.degree_) {
        throw DegreeError("cannot add forms of degree " + std::to_string(degree_) + " and " + std::to_string(o.degree_));
    }
    for (const auto &[idx, c] : o.terms_) {
        add_term(idx, c);
    }
    return *this;
}

DiffForm &DiffForm::operator-=(const DiffForm &o) { return *this += -o; }

DiffForm operator*(const Expr &s, const DiffForm &f)
{
    DiffForm r(f.chart_, f.degree_);
    if (s.is_zero()) {
        return r;
    }
    for (const auto &[idx, c] : f.terms_) {
        r.add_term(idx, s * c);
    }
    return r;
}

DiffForm DiffForm::map_coefficients(const std::function<Expr(const Expr &)> &f) const
{
    DiffForm r(chart_, degree_);
    for (const auto &[idx, c] : terms_) {
        r.add_term(idx, f(c));
    }
    return r;
}

std::string DiffForm::str() const
{
    if (terms_.empty()) {
        return "0";
    }
    if (degree_ == 0) {
        return terms_.begin()->second.str();
    }
    std::string s;
    bool first = true;
    for (const auto &[idx, c] : terms_) {
        const std::string b = basis_str(chart_, idx);
        const bool monomial = c.is_polynomial() && c.numerator().size() == 1;
        bool negative = false;
        std::string body;
        if (monomial) {
            negative = sgn(c.numerator().leading_coeff()) < 0;
            const Expr a = negative ? -c : c;
            body = a == Expr(1) ? b : a.str() + " * " + b;
        } else {
            body = "(" + c.str() + ") * " + b;
        }
        if (first) {
            s += negative ? "-" : "";
        } else {
            s += negative ? " - " : " + ";
        }
        s += body;
        first = false;
    }
    return s;
}

// --- operations -------------------------------------------------------------------

DiffForm wedge(const DiffForm &a, const DiffForm &b)
{
    require_same_chart(a, b);
    DiffForm r(a.chart(), a.degree() + b.degree());
    for (const auto &[i, ca] : a.terms()) {
        for (const auto &[j, cb] : b.terms()) {
            MultiIndex idx = i;
            idx.insert(idx.end(), j.begin(), j.end());
            const int sign = sort_with_sign(idx);
            if (sign == 0) {
                continue;
            }
            const Expr c = ca * cb;
            r.add_term(std::move(idx), sign > 0 ? c : -c);
        }
    }
    return r;
}

DiffForm ext_d(const DiffForm &a)
{
    const Chart &chart = a.chart();
    DiffForm r(chart, a.degree() + 1);
    for (const auto &[idx, c] : a.terms()) {
        for (std::size_t k = 0; k < chart.dim(); ++k) {
            const int ki = static_cast<int>(k);
            if (std::binary_search(idx.begin(), idx.end(), ki)) {
                continue;
            }
            Expr dc = diff(c, chart.var(k));
            if (dc.is_zero()) {
                continue;
            }
            // dx^k moves past every smaller index already in idx.
            const auto pos = std::lower_bound(idx.begin(), idx.end(), ki) - idx.begin();
            MultiIndex out = idx;
            out.insert(out.begin() + pos, ki);
            r.add_term(std::move(out), pos % 2 == 0 ? dc : -dc);
        }
    }
    return r;
}

Decision is_zero(const DiffForm &a, const ZeroTestOptions &opts)
{
    Decision d{true, false};
    for (const auto &[idx, c] : a.terms()) {
        d = d && is_zero(c, opts);
        if (!d.holds) {
            return d;
        }
    }
    return d;
}

Decision is_closed(const DiffForm &a, const ZeroTestOptions &opts) { return is_zero(ext_d(a), opts); }

ExprMatrix commutator1(const DiffForm &a)
{
    if (a.degree() != 1) {
        throw DegreeError("commutator1 needs a 1-form, got a " + std::to_string(a.degree()) + "-form");
    }
    const Chart &chart = a.chart();
    const std::size_t n = chart.dim();
    std::vector<Expr> comp(n);
    for (const auto &[idx, c] : a.terms()) {
        comp[static_cast<std::size_t>(idx[0])] = c;
    }
    ExprMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Expr kij = diff(comp[j], chart.var(i)) - diff(comp[i], chart.var(j));
            k(i, j) = kij;
            k(j, i) = -kij;
        }
    }
    return k;
}

DiffForm homotopy_antiderivative(const DiffForm &a, const std::vector<Rational> &base, const ZeroTestOptions &opts)
{
    const Chart &chart = a.chart();
    const int p = a.degree();
    if (p < 1) {
        throw DegreeError("homotopy antiderivative needs a form of degree >= 1");
    }
    if (!base.empty() && base.size() != chart.dim()) {
        throw Error("base point has " + std::to_string(base.size()) + " coordinates, chart has " +
                    std::to_string(chart.dim()));
    }
    for (const auto &[idx, c] : a.terms()) {
        if (!is_polynomial_in(c, chart)) {
            throw NonPolynomialError("coefficient '" + c.str() + "' is not polynomial in the chart variables");
        }
    }
    if (!is_closed(a, opts)) {
        throw NotClosedError("form '" + a.str() + "' is not closed");
    }

    const Expr t = Expr::symbol(kHomotopyParameter);
    const Atom t_atom = Atom::symbol(kHomotopyParameter);
    std::vector<Expr> offset(chart.dim());
    std::map<std::string, Expr> radial;
    for (std::size_t i = 0; i < chart.dim(); ++i) {
        const Expr b = base.empty() ? Expr() : Expr(base[i]);
        offset[i] = Expr::symbol(chart.var(i)) - b;
        radial.emplace(chart.var(i), b + t * offset[i]);
    }

    DiffForm r(chart, p - 1);
    for (const auto &[idx, c] : a.terms()) {
        const Expr pulled = subs(c, radial);
        // Integral over [0,1] of t^(p-1) * pulled.
        const auto powers = pulled.numerator().coefficients_in(t_atom);
        Poly integral;
        for (std::size_t j = 0; j < powers.size(); ++j) {
            integral += powers[j].scaled(Rational(1, static_cast<unsigned long>(p) + j));
        }
        const Expr weight = Expr::fraction(integral, pulled.denominator());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            MultiIndex rest = idx;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            const Expr term = offset[static_cast<std::size_t>(idx[k])] * weight;
            r.add_term(std::move(rest), k % 2 == 0 ? term : -term);
        }
    }
    return r;
}

std::optional<DiffForm> is_exact(const DiffForm &a, const ZeroTestOptions &opts)
{
    if (a.degree() < 1) {
        return std::nullopt;
    }
    try {
        return homotopy_antiderivative(a, {}, opts);
    } catch (const NotClosedError &) {
        return std::nullopt;
    } catch (const NonPolynomialError &) {
        return std::nullopt;
    }
}

DiffForm parse_form(std::string_view text, const Chart &chart, const FormParseOptions &opts)
{
    FormSemantics sem{chart, opts};
    detail::Grammar<FormSemantics> g(text, sem);
    return g.parse();
}

} // namespace skewform
