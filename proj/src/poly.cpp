#include "skewform/expr.hpp"
#include "skewform/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <sstream>

namespace skewform {

namespace {

constexpr std::array<std::string_view, 4> kFuncNames{"sin", "cos", "exp", "ln"};

int sign_of(int c) { return (c > 0) - (c < 0); }

std::optional<Rational> rational_sqrt(const Rational &q)
{
    if (sgn(q) < 0) {
        return std::nullopt;
    }
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) {
        return std::nullopt;
    }
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Poly monic(const Poly &p)
{
    if (p.is_zero()) {
        return p;
    }
    const Rational lc = p.leading_coeff();
    if (lc == 1) {
        return p;
    }
    return p.scaled(Rational(1) / lc);
}

// Divides out the rational content, leaving coprime integer coefficients.
Poly numeric_primitive(const Poly &p)
{
    if (p.is_zero()) {
        return p;
    }
    mpz_class num = 0;
    mpz_class den = 1;
    for (const auto &[m, c] : p.terms()) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational scale(den, num);
    scale.canonicalize();
    return scale == 1 ? p : p.scaled(scale);
}

Poly content_in(const Poly &p, const Atom &x)
{
    auto coeffs = p.coefficients_in(x);
    std::sort(coeffs.begin(), coeffs.end(), [](const Poly &l, const Poly &r) { return l.size() < r.size(); });
    Poly c;
    for (const auto &coeff : coeffs) {
        if (coeff.is_zero()) {
            continue;
        }
        c = gcd(c, coeff);
        if (c.is_one()) {
            break;
        }
    }
    return c;
}

Poly primitive_in(const Poly &p, const Atom &x)
{
    if (p.is_zero()) {
        return p;
    }
    return numeric_primitive(p.divide_exact(content_in(p, x)));
}

// Scaled pseudo-remainder of a by b with respect to x, up to a constant factor.
Poly pseudo_remainder(const Poly &a, const Poly &b, const Atom &x)
{
    const unsigned db = b.degree_in(x);
    const Poly lcb = b.coefficients_in(x)[db];
    Poly r = a;
    while (!r.is_zero()) {
        const unsigned dr = r.degree_in(x);
        if (dr < db) {
            break;
        }
        const Poly lcr = r.coefficients_in(x)[dr];
        r = numeric_primitive(r * lcb - lcr * b * Poly::atom(x, dr - db));
    }
    return r;
}


using Univariate = std::vector<Rational>;

void trim(Univariate &u)
{
    while (!u.empty() && u.back() == 0) {
        u.pop_back();
    }
}

// Image of p in Q[x] after sending every other atom to its entry in point.
Univariate image(const Poly &p, const Atom &x, const std::map<Atom, Rational> &point)
{
    Univariate u(p.degree_in(x) + 1);
    for (const auto &[m, c] : p.terms()) {
        Rational v = c;
        unsigned dx = 0;
        for (const auto &[a, e] : m.factors()) {
            if (a == x) {
                dx = e;
                continue;
            }
            const Rational &base = point.at(a);
            for (unsigned k = 0; k < e; ++k) {
                v *= base;
            }
        }
        u[dx] += v;
    }
    trim(u);
    return u;
}

std::size_t univariate_gcd_degree(Univariate a, Univariate b)
{
    while (!b.empty()) {
        while (a.size() >= b.size()) {
            const Rational f = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                a[i + shift] -= f * b[i];
            }
            a.pop_back();
            trim(a);
            if (a.empty()) {
                break;
            }
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// True when the images of a and b in Q[x] at some point keeping both degrees
// are coprime, which bounds the degree of gcd(a, b) in x by zero.
bool coprime_in(const Poly &a, const Poly &b, const Atom &x, const std::set<Atom> &atoms)
{
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::map<Atom, Rational> point;
        for (const auto &at : atoms) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            point.emplace(at, Rational(static_cast<long>((state >> 33) % 199) - 99));
        }
        const Univariate ua = image(a, x, point);
        const Univariate ub = image(b, x, point);
        if (ua.size() != a.degree_in(x) + 1 || ub.size() != b.degree_in(x) + 1) {
            continue;
        }
        return univariate_gcd_degree(ua, ub) == 0;
    }
    return false;
}

} // namespace

std::string_view func_name(Func f) noexcept { return kFuncNames[static_cast<std::size_t>(f)]; }

std::optional<Func> func_from_name(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kFuncNames.size(); ++i) {
        if (kFuncNames[i] == name) {
            return static_cast<Func>(i);
        }
    }
    return std::nullopt;
}

// --- Atom -------------------------------------------------------------------

struct Atom::Node {
    std::string name;
    Func func = Func::Sin;
    std::shared_ptr<const Expr> arg;
};

Atom Atom::symbol(std::string name)
{
    auto n = std::make_shared<Node>();
    n->name = std::move(name);
    return Atom(std::move(n));
}

Atom Atom::apply(Func f, const Expr &arg)
{
    auto n = std::make_shared<Node>();
    n->func = f;
    n->arg = std::make_shared<const Expr>(arg);
    return Atom(std::move(n));
}

bool Atom::is_symbol() const noexcept { return node_->arg == nullptr; }

const std::string &Atom::name() const
{
    if (!is_symbol()) {
        throw Error("atom is not a symbol");
    }
    return node_->name;
}

Func Atom::func() const
{
    if (is_symbol()) {
        throw Error("atom is not a function application");
    }
    return node_->func;
}

const Expr &Atom::arg() const
{
    if (is_symbol()) {
        throw Error("atom is not a function application");
    }
    return *node_->arg;
}

bool Atom::depends_on(const std::string &var) const
{
    return is_symbol() ? node_->name == var : node_->arg->depends_on(var);
}

void Atom::collect_symbols(std::set<std::string> &out) const
{
    if (is_symbol()) {
        out.insert(node_->name);
    } else {
        auto inner = node_->arg->symbols();
        out.insert(inner.begin(), inner.end());
    }
}

std::string Atom::str() const
{
    if (is_symbol()) {
        return node_->name;
    }
    return std::string(func_name(node_->func)) + "(" + node_->arg->str() + ")";
}

int compare(const Atom &a, const Atom &b)
{
    if (a.node_ == b.node_) {
        return 0;
    }
    const bool sa = a.is_symbol();
    const bool sb = b.is_symbol();
    if (sa && sb) {
        return sign_of(a.node_->name.compare(b.node_->name));
    }
    if (sa != sb) {
        return sa ? -1 : 1;
    }
    if (a.node_->func != b.node_->func) {
        return a.node_->func < b.node_->func ? -1 : 1;
    }
    return compare(*a.node_->arg, *b.node_->arg);
}

// --- Monomial ---------------------------------------------------------------

Monomial Monomial::of(const Atom &a, unsigned exponent)
{
    Monomial m;
    if (exponent > 0) {
        m.factors_.emplace_back(a, exponent);
        m.degree_ = exponent;
    }
    return m;
}

unsigned Monomial::exponent(const Atom &a) const
{
    for (const auto &[atom, e] : factors_) {
        const int c = compare(atom, a);
        if (c == 0) {
            return e;
        }
        if (c > 0) {
            break;
        }
    }
    return 0;
}

Monomial Monomial::operator*(const Monomial &o) const
{
    Monomial r;
    r.factors_.reserve(factors_.size() + o.factors_.size());
    auto i = factors_.begin();
    auto j = o.factors_.begin();
    while (i != factors_.end() && j != o.factors_.end()) {
        const int c = compare(i->first, j->first);
        if (c == 0) {
            r.factors_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        } else if (c < 0) {
            r.factors_.push_back(*i++);
        } else {
            r.factors_.push_back(*j++);
        }
    }
    r.factors_.insert(r.factors_.end(), i, factors_.end());
    r.factors_.insert(r.factors_.end(), j, o.factors_.end());
    r.degree_ = degree_ + o.degree_;
    return r;
}

bool Monomial::divides(const Monomial &o) const
{
    if (degree_ > o.degree_) {
        return false;
    }
    auto j = o.factors_.begin();
    for (const auto &[atom, e] : factors_) {
        while (j != o.factors_.end() && compare(j->first, atom) < 0) {
            ++j;
        }
        if (j == o.factors_.end() || !(j->first == atom) || j->second < e) {
            return false;
        }
    }
    return true;
}

Monomial Monomial::quotient(const Monomial &o) const
{
    Monomial r;
    auto j = o.factors_.begin();
    for (const auto &[atom, e] : factors_) {
        unsigned sub = 0;
        if (j != o.factors_.end() && j->first == atom) {
            sub = j->second;
            ++j;
        }
        if (e > sub) {
            r.factors_.emplace_back(atom, e - sub);
        } else if (e < sub) {
            throw Error("monomial quotient is not exact");
        }
    }
    if (j != o.factors_.end()) {
        throw Error("monomial quotient is not exact");
    }
    r.degree_ = degree_ - o.degree_;
    return r;
}

Monomial Monomial::without(const Atom &a) const
{
    Monomial r;
    for (const auto &f : factors_) {
        if (!(f.first == a)) {
            r.factors_.push_back(f);
            r.degree_ += f.second;
        }
    }
    return r;
}

Monomial Monomial::gcd(const Monomial &a, const Monomial &b)
{
    Monomial r;
    auto j = b.factors_.begin();
    for (const auto &[atom, e] : a.factors_) {
        while (j != b.factors_.end() && compare(j->first, atom) < 0) {
            ++j;
        }
        if (j != b.factors_.end() && j->first == atom) {
            const unsigned m = std::min(e, j->second);
            r.factors_.emplace_back(atom, m);
            r.degree_ += m;
        }
    }
    return r;
}

std::string Monomial::str() const
{
    std::string s;
    for (const auto &[atom, e] : factors_) {
        if (!s.empty()) {
            s += '*';
        }
        s += atom.str();
        if (e > 1) {
            s += '^' + std::to_string(e);
        }
    }
    return s;
}

int compare(const Monomial &a, const Monomial &b)
{
    if (a.degree_ != b.degree_) {
        return a.degree_ < b.degree_ ? -1 : 1;
    }
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
        const int c = compare(i->first, j->first);
        if (c != 0) {
            // The earlier atom ranks higher; whoever carries it is larger.
            return c < 0 ? 1 : -1;
        }
        if (i->second != j->second) {
            return i->second < j->second ? -1 : 1;
        }
        ++i;
        ++j;
    }
    if (i != a.factors_.end()) {
        return 1;
    }
    if (j != b.factors_.end()) {
        return -1;
    }
    return 0;
}

// --- Poly -------------------------------------------------------------------

Poly::Poly(const Rational &c)
{
    if (sgn(c) != 0) {
        terms_.emplace(Monomial{}, c);
    }
}

Poly Poly::atom(const Atom &a, unsigned exponent) { return term(Monomial::of(a, exponent), Rational(1)); }

Poly Poly::term(const Monomial &m, const Rational &c)
{
    Poly p;
    p.add_term(m, c);
    return p;
}

bool Poly::is_constant() const noexcept
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

bool Poly::is_one() const { return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second == 1; }

Rational Poly::constant_value() const
{
    if (!is_constant()) {
        throw Error("polynomial is not constant");
    }
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

const Monomial &Poly::leading_monomial() const
{
    if (terms_.empty()) {
        throw Error("zero polynomial has no leading term");
    }
    return terms_.begin()->first;
}

const Rational &Poly::leading_coeff() const
{
    if (terms_.empty()) {
        throw Error("zero polynomial has no leading term");
    }
    return terms_.begin()->second;
}

void Poly::add_term(const Monomial &m, const Rational &c)
{
    if (sgn(c) == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) {
            terms_.erase(it);
        }
    }
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto &t : r.terms_) {
        t.second = -t.second;
    }
    return r;
}

Poly &Poly::operator+=(const Poly &o)
{
    for (const auto &[m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

Poly &Poly::operator-=(const Poly &o)
{
    for (const auto &[m, c] : o.terms_) {
        add_term(m, -c);
    }
    return *this;
}

Poly Poly::operator+(const Poly &o) const
{
    Poly r = *this;
    return r += o;
}

Poly Poly::operator-(const Poly &o) const
{
    Poly r = *this;
    return r -= o;
}

Poly Poly::operator*(const Poly &o) const
{
    Poly r;
    for (const auto &[m1, c1] : terms_) {
        for (const auto &[m2, c2] : o.terms_) {
            r.add_term(m1 * m2, c1 * c2);
        }
    }
    return r;
}

Poly Poly::scaled(const Rational &c) const
{
    if (sgn(c) == 0) {
        return {};
    }
    Poly r = *this;
    for (auto &t : r.terms_) {
        t.second *= c;
    }
    return r;
}

Poly Poly::times(const Monomial &m, const Rational &c) const
{
    Poly r;
    if (sgn(c) == 0) {
        return r;
    }
    for (const auto &[m1, c1] : terms_) {
        r.terms_.emplace_hint(r.terms_.end(), m1 * m, c1 * c);
    }
    return r;
}

Poly Poly::pow(unsigned k) const
{
    Poly result(Rational(1));
    Poly base = *this;
    while (k > 0) {
        if (k & 1U) {
            result = result * base;
        }
        k >>= 1U;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

unsigned Poly::degree_in(const Atom &a) const
{
    unsigned d = 0;
    for (const auto &t : terms_) {
        d = std::max(d, t.first.exponent(a));
    }
    return d;
}

std::vector<Poly> Poly::coefficients_in(const Atom &a) const
{
    std::vector<Poly> out(degree_in(a) + 1);
    for (const auto &[m, c] : terms_) {
        out[m.exponent(a)].add_term(m.without(a), c);
    }
    return out;
}

std::set<Atom> Poly::atoms() const
{
    std::set<Atom> out;
    for (const auto &t : terms_) {
        for (const auto &f : t.first.factors()) {
            out.insert(f.first);
        }
    }
    return out;
}

bool Poly::has_functions() const
{
    for (const auto &t : terms_) {
        for (const auto &f : t.first.factors()) {
            if (!f.first.is_symbol()) {
                return true;
            }
        }
    }
    return false;
}

Monomial Poly::monomial_content() const
{
    if (terms_.empty()) {
        return {};
    }
    Monomial g = terms_.begin()->first;
    for (const auto &t : terms_) {
        g = Monomial::gcd(g, t.first);
        if (g.is_one()) {
            break;
        }
    }
    return g;
}

std::optional<Poly> Poly::try_divide(const Poly &o) const
{
    if (o.is_zero()) {
        throw PoleError("polynomial division by zero");
    }
    const Monomial &lm = o.leading_monomial();
    const Rational &lc = o.leading_coeff();
    Poly q;
    Poly r = *this;
    while (!r.is_zero()) {
        const Monomial &rm = r.leading_monomial();
        if (!lm.divides(rm)) {
            return std::nullopt;
        }
        const Monomial t = rm.quotient(lm);
        const Rational c = r.leading_coeff() / lc;
        q.add_term(t, c);
        r -= o.times(t, c);
    }
    return q;
}

Poly Poly::divide_exact(const Poly &o) const
{
    auto q = try_divide(o);
    if (!q) {
        throw Error("polynomial division is not exact");
    }
    return *q;
}

std::optional<Poly> Poly::sqrt() const
{
    if (is_zero()) {
        return Poly{};
    }
    const auto lead_root = rational_sqrt(leading_coeff());
    if (!lead_root) {
        return std::nullopt;
    }
    Monomial root_m;
    for (const auto &[atom, e] : leading_monomial().factors()) {
        if (e % 2 != 0) {
            return std::nullopt;
        }
        root_m = root_m * Monomial::of(atom, e / 2);
    }
    unsigned min_degree = leading_monomial().total_degree();
    for (const auto &t : terms_) {
        min_degree = std::min(min_degree, t.first.total_degree());
    }

    Poly root = Poly::term(root_m, *lead_root);
    const Rational twice_lead = 2 * *lead_root;
    Monomial last = root_m;
    for (;;) {
        const Poly rem = *this - root * root;
        if (rem.is_zero()) {
            return root;
        }
        const Monomial &rm = rem.leading_monomial();
        if (!root_m.divides(rm)) {
            return std::nullopt;
        }
        Monomial next = rm.quotient(root_m);
        if (compare(next, last) >= 0 || 2 * next.total_degree() < min_degree) {
            return std::nullopt;
        }
        root += Poly::term(next, rem.leading_coeff() / twice_lead);
        last = next;
    }
}

namespace {

std::string coeff_str(const Rational &c) { return c.get_str(); }

// Term text without its sign.
std::string abs_term_str(const Monomial &m, const Rational &c)
{
    const Rational a = abs(c);
    if (m.is_one()) {
        return coeff_str(a);
    }
    const std::string ms = m.str();
    if (a == 1) {
        return ms;
    }
    if (a.get_den() == 1) {
        return a.get_num().get_str() + "*" + ms;
    }
    if (a.get_num() == 1) {
        return ms + "/" + a.get_den().get_str();
    }
    return a.get_num().get_str() + "*" + ms + "/" + a.get_den().get_str();
}

} // namespace

std::string Poly::str() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string s;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        const bool neg = sgn(c) < 0;
        if (first) {
            s += neg ? "-" : "";
        } else {
            s += neg ? " - " : " + ";
        }
        s += abs_term_str(m, c);
        first = false;
    }
    return s;
}

int compare(const Poly &a, const Poly &b)
{
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
        if (const int c = compare(i->first, j->first); c != 0) {
            return c;
        }
        if (const int c = cmp(i->second, j->second); c != 0) {
            return sign_of(c);
        }
    }
    if (i != a.terms_.end()) {
        return 1;
    }
    if (j != b.terms_.end()) {
        return -1;
    }
    return 0;
}

// --- gcd --------------------------------------------------------------------

Poly gcd(const Poly &a, const Poly &b)
{
    if (a.is_zero()) {
        return monic(b);
    }
    if (b.is_zero()) {
        return monic(a);
    }
    if (a.is_constant() || b.is_constant()) {
        return Poly(Rational(1));
    }
    if (a.size() == 1 || b.size() == 1) {
        return Poly::term(Monomial::gcd(a.monomial_content(), b.monomial_content()), Rational(1));
    }
    if (a == b) {
        return monic(a);
    }

    const auto atoms_a = a.atoms();
    const auto atoms_b = b.atoms();
    // An atom missing from one side can only contribute through the content.
    // Folding the other side in first keeps every intermediate gcd small.
    auto fold = [](const Poly &big, const Atom &x, const Poly &small) {
        auto coeffs = big.coefficients_in(x);
        std::sort(coeffs.begin(), coeffs.end(), [](const Poly &l, const Poly &r) { return l.size() < r.size(); });
        Poly g = small;
        for (const auto &c : coeffs) {
            if (c.is_zero()) {
                continue;
            }
            g = gcd(g, c);
            if (g.is_one()) {
                break;
            }
        }
        return g;
    };
    for (const auto &x : atoms_a) {
        if (!atoms_b.count(x)) {
            return fold(a, x, b);
        }
    }
    for (const auto &x : atoms_b) {
        if (!atoms_a.count(x)) {
            return fold(b, x, a);
        }
    }

    // Main variable: lowest combined degree keeps the remainder sequence short.
    Atom x = *atoms_a.begin();
    unsigned best = a.degree_in(x) + b.degree_in(x);
    for (const auto &at : atoms_a) {
        const unsigned d = a.degree_in(at) + b.degree_in(at);
        if (d < best) {
            best = d;
            x = at;
        }
    }
    const Poly ca = content_in(a, x);
    const Poly cb = content_in(b, x);
    Poly pa = numeric_primitive(a.divide_exact(ca));
    Poly pb = numeric_primitive(b.divide_exact(cb));
    const Poly c = gcd(ca, cb);
    if (coprime_in(pa, pb, x, atoms_a)) {
        return monic(c);
    }
    if (pa.degree_in(x) < pb.degree_in(x)) {
        std::swap(pa, pb);
    }
    // Primitive remainder sequence.
    Poly g;
    for (;;) {
        if (pb.degree_in(x) == 0) {
            g = Poly(Rational(1));
            break;
        }
        Poly r = pseudo_remainder(pa, pb, x);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        pa = std::move(pb);
        pb = primitive_in(r, x);
    }
    return monic(c * g);
}

} // namespace skewform
