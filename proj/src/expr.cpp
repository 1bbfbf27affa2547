#include "skewform/expr.hpp"
#include "skewform/errors.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace skewform {

namespace {

bool bare_denominator(const Poly &den)
{
    if (den.size() != 1) {
        return false;
    }
    const auto &[m, c] = *den.terms().begin();
    return c == 1 && m.factors().size() == 1;
}

Expr atom_derivative(const Atom &a, const std::string &var)
{
    const Expr &u = a.arg();
    const Expr du = diff(u, var);
    if (du.is_zero()) {
        return {};
    }
    switch (a.func()) {
    case Func::Sin:
        return Expr::apply(Func::Cos, u) * du;
    case Func::Cos:
        return -(Expr::apply(Func::Sin, u) * du);
    case Func::Exp:
        return Expr::apply(Func::Exp, u) * du;
    case Func::Ln:
        return du / u;
    }
    return {};
}

Expr poly_derivative(const Poly &p, const std::string &var)
{
    Poly direct;
    Expr chained;
    for (const auto &[m, c] : p.terms()) {
        for (const auto &[atom, e] : m.factors()) {
            if (atom.is_symbol()) {
                if (atom.name() == var) {
                    direct += Poly::term(m.quotient(Monomial::of(atom, 1)), c * e);
                }
            } else if (atom.depends_on(var)) {
                const Expr inner = atom_derivative(atom, var);
                chained += Expr::from_poly(Poly::term(m.quotient(Monomial::of(atom, 1)), c * e)) * inner;
            }
        }
    }
    return Expr::from_poly(std::move(direct)) + chained;
}

template <class T, class AtomValue>
T evaluate_poly(const Poly &p, AtomValue &&atom_value, T zero, T one)
{
    std::map<Atom, T> cache;
    T total = zero;
    for (const auto &[m, c] : p.terms()) {
        T term = one;
        for (const auto &[atom, e] : m.factors()) {
            auto it = cache.find(atom);
            if (it == cache.end()) {
                it = cache.emplace(atom, atom_value(atom)).first;
            }
            for (unsigned k = 0; k < e; ++k) {
                term = term * it->second;
            }
        }
        if constexpr (std::is_same_v<T, double>) {
            total = total + c.get_d() * term;
        } else {
            total = total + T(c) * term;
        }
    }
    return total;
}

double apply_double(Func f, double x)
{
    switch (f) {
    case Func::Sin:
        return std::sin(x);
    case Func::Cos:
        return std::cos(x);
    case Func::Exp:
        return std::exp(x);
    case Func::Ln:
        if (x <= 0.0) {
            throw PoleError("ln evaluated at a non-positive argument");
        }
        return std::log(x);
    }
    return 0.0;
}

double atom_double(const Atom &a, const std::map<std::string, double> &point)
{
    if (a.is_symbol()) {
        auto it = point.find(a.name());
        if (it == point.end()) {
            throw UnboundVariableError("unbound variable '" + a.name() + "'");
        }
        return it->second;
    }
    return apply_double(a.func(), eval_double(a.arg(), point));
}

// Numerator value together with the sum of absolute term values (scale for the zero test).
std::pair<double, double> numerator_with_scale(const Expr &e, const std::map<std::string, double> &point)
{
    std::map<Atom, double> cache;
    double value = 0.0;
    double scale = 0.0;
    for (const auto &[m, c] : e.numerator().terms()) {
        double term = c.get_d();
        for (const auto &[atom, k] : m.factors()) {
            auto it = cache.find(atom);
            if (it == cache.end()) {
                it = cache.emplace(atom, atom_double(atom, point)).first;
            }
            term *= std::pow(it->second, static_cast<double>(k));
        }
        value += term;
        scale += std::fabs(term);
    }
    return {value, scale};
}

} // namespace

// --- construction -------------------------------------------------------------

Expr Expr::symbol(std::string name) { return Expr(Poly::atom(Atom::symbol(std::move(name))), Poly(Rational(1))); }

Expr Expr::apply(Func f, const Expr &arg) { return Expr(Poly::atom(Atom::apply(f, arg)), Poly(Rational(1))); }

Expr Expr::from_poly(Poly p) { return Expr(std::move(p), Poly(Rational(1))); }

Expr Expr::fraction(const Poly &num, const Poly &den)
{
    if (den.is_zero()) {
        throw PoleError("division by zero");
    }
    if (num.is_zero()) {
        return {};
    }
    if (den.is_constant()) {
        return reduced(num, den);
    }
    const Poly g = gcd(num, den);
    if (g.is_one()) {
        return reduced(num, den);
    }
    return reduced(num.divide_exact(g), den.divide_exact(g));
}

Expr Expr::reduced(Poly num, Poly den)
{
    if (num.is_zero()) {
        return {};
    }
    const Rational lc = den.leading_coeff();
    if (lc != 1) {
        const Rational inv = Rational(1) / lc;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return Expr(std::move(num), std::move(den));
}

Rational Expr::constant_value() const
{
    if (!is_constant()) {
        throw Error("expression '" + str() + "' is not constant");
    }
    return num_.constant_value() / den_.constant_value();
}

std::set<std::string> Expr::symbols() const
{
    std::set<std::string> out;
    for (const auto &a : num_.atoms()) {
        a.collect_symbols(out);
    }
    for (const auto &a : den_.atoms()) {
        a.collect_symbols(out);
    }
    return out;
}

bool Expr::depends_on(const std::string &var) const
{
    for (const auto &a : num_.atoms()) {
        if (a.depends_on(var)) {
            return true;
        }
    }
    for (const auto &a : den_.atoms()) {
        if (a.depends_on(var)) {
            return true;
        }
    }
    return false;
}

std::string Expr::str() const
{
    if (den_.is_one()) {
        return num_.str();
    }
    std::string n = num_.str();
    if (num_.size() > 1) {
        n = "(" + n + ")";
    }
    std::string d = den_.str();
    if (!bare_denominator(den_)) {
        d = "(" + d + ")";
    }
    return n + "/" + d;
}

std::ostream &operator<<(std::ostream &os, const Expr &e) { return os << e.str(); }

// --- arithmetic ---------------------------------------------------------------

Expr Expr::operator-() const { return Expr(-num_, den_); }

Expr &Expr::operator+=(const Expr &o)
{
    if (den_.is_one() && o.den_.is_one()) {
        num_ += o.num_;
        return *this;
    }
    if (den_ == o.den_) {
        *this = fraction(num_ + o.num_, den_);
        return *this;
    }
    const Poly g = gcd(den_, o.den_);
    const Poly l1 = den_.divide_exact(g);
    const Poly l2 = o.den_.divide_exact(g);
    *this = fraction(num_ * l2 + o.num_ * l1, den_ * l2);
    return *this;
}

Expr &Expr::operator-=(const Expr &o) { return *this += -o; }

Expr &Expr::operator*=(const Expr &o)
{
    if (num_.is_zero() || o.num_.is_zero()) {
        *this = Expr();
        return *this;
    }
    if (den_.is_one() && o.den_.is_one()) {
        num_ = num_ * o.num_;
        return *this;
    }
    const Poly g1 = gcd(num_, o.den_);
    const Poly g2 = gcd(o.num_, den_);
    Poly n = num_.divide_exact(g1) * o.num_.divide_exact(g2);
    Poly d = den_.divide_exact(g2) * o.den_.divide_exact(g1);
    *this = reduced(std::move(n), std::move(d));
    return *this;
}

Expr &Expr::operator/=(const Expr &o)
{
    if (o.is_zero()) {
        throw PoleError("division by zero");
    }
    return *this *= reduced(o.den_, o.num_);
}

Expr pow(const Expr &e, int k)
{
    if (k < 0) {
        return Expr(1) / pow(e, -k);
    }
    return Expr::fraction(e.numerator().pow(static_cast<unsigned>(k)), e.denominator().pow(static_cast<unsigned>(k)));
}

int compare(const Expr &a, const Expr &b)
{
    if (const int c = compare(a.num_, b.num_); c != 0) {
        return c;
    }
    return compare(a.den_, b.den_);
}

// --- calculus and substitution ------------------------------------------------

Expr diff(const Expr &e, const std::string &var)
{
    const Expr dn = poly_derivative(e.numerator(), var);
    if (e.denominator().is_one()) {
        return dn;
    }
    const Expr dd = poly_derivative(e.denominator(), var);
    const Expr n = Expr::from_poly(e.numerator());
    const Expr d = Expr::from_poly(e.denominator());
    return (dn * d - n * dd) / (d * d);
}

Expr subs(const Expr &e, const std::map<std::string, Expr> &values)
{
    auto atom_value = [&](const Atom &a) -> Expr {
        if (a.is_symbol()) {
            auto it = values.find(a.name());
            return it == values.end() ? Expr::symbol(a.name()) : it->second;
        }
        return Expr::apply(a.func(), subs(a.arg(), values));
    };
    const Expr n = evaluate_poly<Expr>(e.numerator(), atom_value, Expr(), Expr(1));
    if (e.denominator().is_one()) {
        return n;
    }
    const Expr d = evaluate_poly<Expr>(e.denominator(), atom_value, Expr(), Expr(1));
    return n / d;
}

// --- evaluation ---------------------------------------------------------------

Value eval(const Expr &e, const std::map<std::string, Rational> &point)
{
    if (e.has_functions()) {
        std::map<std::string, double> dpoint;
        for (const auto &[k, v] : point) {
            dpoint.emplace(k, v.get_d());
        }
        return eval_double(e, dpoint);
    }
    auto atom_value = [&](const Atom &a) -> Rational {
        auto it = point.find(a.name());
        if (it == point.end()) {
            throw UnboundVariableError("unbound variable '" + a.name() + "'");
        }
        return it->second;
    };
    const Rational d = evaluate_poly<Rational>(e.denominator(), atom_value, Rational(0), Rational(1));
    if (sgn(d) == 0) {
        throw PoleError("expression '" + e.str() + "' has a pole at the evaluation point");
    }
    const Rational n = evaluate_poly<Rational>(e.numerator(), atom_value, Rational(0), Rational(1));
    Rational r = n / d;
    r.canonicalize();
    return r;
}

double eval_double(const Expr &e, const std::map<std::string, double> &point)
{
    auto atom_value = [&](const Atom &a) { return atom_double(a, point); };
    const double d = evaluate_poly<double>(e.denominator(), atom_value, 0.0, 1.0);
    if (d == 0.0 || !std::isfinite(d)) {
        throw PoleError("expression '" + e.str() + "' has a pole at the evaluation point");
    }
    const double n = evaluate_poly<double>(e.numerator(), atom_value, 0.0, 1.0);
    const double v = n / d;
    if (!std::isfinite(v)) {
        throw PoleError("expression '" + e.str() + "' is not finite at the evaluation point");
    }
    return v;
}

double to_double(const Value &v)
{
    return std::visit(
        [](const auto &x) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>) {
                return x.get_d();
            } else {
                return x;
            }
        },
        v);
}

std::string value_str(const Value &v)
{
    if (const auto *q = std::get_if<Rational>(&v)) {
        return q->get_str();
    }
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(v);
    std::string s = os.str();
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

// --- zero test ----------------------------------------------------------------

Decision operator&&(const Decision &a, const Decision &b)
{
    return {a.holds && b.holds, a.probabilistic || b.probabilistic};
}

Decision is_zero(const Expr &e, const ZeroTestOptions &opts)
{
    if (e.is_zero()) {
        return {true, false};
    }
    if (!e.has_functions()) {
        return {false, false};
    }
    const auto vars = e.symbols();
    std::mt19937_64 rng(opts.seed);
    // Rationals k/100 with |k| <= 1000, i.e. in [-10, 10].
    auto draw = [&rng] { return static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 100.0; };

    for (int s = 0; s < opts.samples; ++s) {
        bool sampled = false;
        for (int attempt = 0; attempt <= opts.max_retries && !sampled; ++attempt) {
            std::map<std::string, double> point;
            for (const auto &v : vars) {
                point.emplace(v, draw());
            }
            try {
                const double den = eval_double(Expr::from_poly(e.denominator()), point);
                if (den == 0.0 || !std::isfinite(den)) {
                    continue;
                }
                const auto [value, scale] = numerator_with_scale(e, point);
                if (!std::isfinite(value)) {
                    continue;
                }
                sampled = true;
                if (std::fabs(value) > opts.tolerance * std::max(1.0, scale)) {
                    return {false, true};
                }
            } catch (const PoleError &) {
                // resample
            }
        }
        if (!sampled) {
            throw SamplingError("zero test of '" + e.str() + "': every sample point hit a pole");
        }
    }
    return {true, true};
}

} // namespace skewform
