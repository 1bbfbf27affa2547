#pragma once

// Symbolic scalar kernel.
//
// An Expr is a reduced fraction num/den of two multivariate polynomials with
// rational coefficients. The indeterminates ("atoms") are named symbols and
// elementary function applications sin(e), cos(e), exp(e), ln(e). Every Expr
// is canonical on construction: the fraction is reduced by a polynomial gcd,
// the denominator is monic under the graded-lexicographic order, and the
// zero polynomial has the single representation 0/1. Two equal rational
// functions therefore compare structurally equal. Identities that hold only
// through the elementary functions (sin^2 + cos^2 = 1) are not visible to
// the canonical form; is_zero falls back to randomized sampling for those.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace skewform {

using Rational = mpq_class;

enum class Func : std::uint8_t { Sin, Cos, Exp, Ln };

std::string_view func_name(Func f) noexcept;
std::optional<Func> func_from_name(std::string_view name) noexcept;

class Expr;

// Indeterminate of the polynomial ring: a symbol or a function application.
// Symbols are ordered by name; function atoms sort after all symbols.
class Atom {
public:
    static Atom symbol(std::string name);
    static Atom apply(Func f, const Expr &arg);

    bool is_symbol() const noexcept;
    const std::string &name() const;
    Func func() const;
    const Expr &arg() const;

    bool depends_on(const std::string &var) const;
    void collect_symbols(std::set<std::string> &out) const;
    bool has_functions() const noexcept { return !is_symbol(); }
    std::string str() const;

    friend int compare(const Atom &a, const Atom &b);
    friend bool operator==(const Atom &a, const Atom &b) { return compare(a, b) == 0; }
    friend bool operator<(const Atom &a, const Atom &b) { return compare(a, b) < 0; }

private:
    struct Node;
    explicit Atom(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Power product of atoms, factors kept sorted by atom order.
class Monomial {
public:
    using Factor = std::pair<Atom, unsigned>;

    Monomial() = default;
    static Monomial of(const Atom &a, unsigned exponent = 1);

    const std::vector<Factor> &factors() const noexcept { return factors_; }
    unsigned total_degree() const noexcept { return degree_; }
    bool is_one() const noexcept { return factors_.empty(); }
    unsigned exponent(const Atom &a) const;

    Monomial operator*(const Monomial &o) const;
    bool divides(const Monomial &o) const;
    // this / o; o must divide this.
    Monomial quotient(const Monomial &o) const;
    Monomial without(const Atom &a) const;
    static Monomial gcd(const Monomial &a, const Monomial &b);

    std::string str() const;

    // Graded lexicographic comparison.
    friend int compare(const Monomial &a, const Monomial &b);
    friend bool operator==(const Monomial &a, const Monomial &b) { return compare(a, b) == 0; }

private:
    std::vector<Factor> factors_;
    unsigned degree_ = 0;
};

struct MonomialGreater {
    bool operator()(const Monomial &a, const Monomial &b) const { return compare(a, b) > 0; }
};

// Sparse distributed polynomial over Q; terms() iterates from the leading term down.
class Poly {
public:
    using Terms = std::map<Monomial, Rational, MonomialGreater>;

    Poly() = default;
    explicit Poly(const Rational &c);
    static Poly atom(const Atom &a, unsigned exponent = 1);
    static Poly term(const Monomial &m, const Rational &c);

    const Terms &terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    bool is_one() const;
    Rational constant_value() const;

    const Monomial &leading_monomial() const;
    const Rational &leading_coeff() const;

    Poly operator-() const;
    Poly &operator+=(const Poly &o);
    Poly &operator-=(const Poly &o);
    Poly operator+(const Poly &o) const;
    Poly operator-(const Poly &o) const;
    Poly operator*(const Poly &o) const;
    Poly scaled(const Rational &c) const;
    Poly times(const Monomial &m, const Rational &c) const;
    Poly pow(unsigned k) const;

    unsigned degree_in(const Atom &a) const;
    // Coefficients of a^0, a^1, ..., each free of a.
    std::vector<Poly> coefficients_in(const Atom &a) const;
    std::set<Atom> atoms() const;
    bool has_functions() const;
    // Gcd of all monomials (largest monomial dividing every term).
    Monomial monomial_content() const;

    // Exact division; throws if o does not divide this.
    Poly divide_exact(const Poly &o) const;
    std::optional<Poly> try_divide(const Poly &o) const;

    // Polynomial square root when this is a perfect square with a positive leading coefficient.
    std::optional<Poly> sqrt() const;

    std::string str() const;

    friend bool operator==(const Poly &a, const Poly &b) { return a.terms_ == b.terms_; }
    friend int compare(const Poly &a, const Poly &b);

private:
    void add_term(const Monomial &m, const Rational &c);
    Terms terms_;
};

// Monic gcd over Q (zero only when both inputs are zero).
Poly gcd(const Poly &a, const Poly &b);

class Expr {
public:
    Expr() : den_(Rational(1)) {}
    Expr(const Rational &c) : num_(c), den_(Rational(1)) {}
    Expr(long v) : Expr(Rational(v)) {}
    Expr(int v) : Expr(Rational(v)) {}

    static Expr symbol(std::string name);
    static Expr apply(Func f, const Expr &arg);
    static Expr fraction(const Poly &num, const Poly &den);
    static Expr from_poly(Poly p);

    const Poly &numerator() const noexcept { return num_; }
    const Poly &denominator() const noexcept { return den_; }

    // Structural test against the canonical zero.
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;
    bool is_polynomial() const { return den_.is_one(); }
    bool has_functions() const { return num_.has_functions() || den_.has_functions(); }
    std::set<std::string> symbols() const;
    bool depends_on(const std::string &var) const;

    // Round-trippable text.
    std::string str() const;

    Expr operator-() const;
    Expr &operator+=(const Expr &o);
    Expr &operator-=(const Expr &o);
    Expr &operator*=(const Expr &o);
    Expr &operator/=(const Expr &o);
    friend Expr operator+(Expr a, const Expr &b) { return a += b; }
    friend Expr operator-(Expr a, const Expr &b) { return a -= b; }
    friend Expr operator*(Expr a, const Expr &b) { return a *= b; }
    friend Expr operator/(Expr a, const Expr &b) { return a /= b; }

    friend bool operator==(const Expr &a, const Expr &b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend int compare(const Expr &a, const Expr &b);

private:
    Expr(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
    // num/den already coprime; only the denominator is normalized.
    static Expr reduced(Poly num, Poly den);

    Poly num_;
    Poly den_;
};

std::ostream &operator<<(std::ostream &os, const Expr &e);

Expr pow(const Expr &e, int k);

// Partial derivative; function atoms differentiate by the chain rule.
Expr diff(const Expr &e, const std::string &var);

// Simultaneous substitution of symbols.
Expr subs(const Expr &e, const std::map<std::string, Expr> &values);

// Exact rational result for rational expressions, floating point otherwise.
using Value = std::variant<Rational, double>;
Value eval(const Expr &e, const std::map<std::string, Rational> &point);
double eval_double(const Expr &e, const std::map<std::string, double> &point);
double to_double(const Value &v);
std::string value_str(const Value &v);

// Outcome of a test that may be settled by random sampling.
struct Decision {
    bool holds = false;
    bool probabilistic = false;
    explicit operator bool() const noexcept { return holds; }
};

// Conjunction that keeps the sampling flag.
Decision operator&&(const Decision &a, const Decision &b);

struct ZeroTestOptions {
    std::uint64_t seed = 0;
    int samples = 32;
    double tolerance = 1e-9;
    // Retries per sample when a draw hits a pole.
    int max_retries = 16;
};

// Exact for purely rational expressions; randomized (flagged) when function atoms remain.
Decision is_zero(const Expr &e, const ZeroTestOptions &opts = {});

} // namespace skewform
