#pragma once

// Exterior algebra over a chart.
//
// A DiffForm of degree p stores one coefficient per strictly increasing index
// tuple i1 < ... < ip; antisymmetry of the basis is folded into the signs of
// the coefficients, and zero coefficients are never stored.

#include "skewform/chart.hpp"
#include "skewform/expr.hpp"
#include "skewform/matrix.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace skewform {

using MultiIndex = std::vector<int>;

// Sorts idx in place; returns the permutation sign, or 0 when an index repeats.
int sort_with_sign(MultiIndex &idx);

class DiffForm {
public:
    using Terms = std::map<MultiIndex, Expr>;

    // The zero form of the given degree.
    DiffForm(Chart chart, int degree);

    static DiffForm scalar(Chart chart, const Expr &value);
    static DiffForm differential(Chart chart, const std::string &var);
    // coeff * dx^{idx[0]} ^ ... ; idx may be unsorted.
    static DiffForm basis(Chart chart, MultiIndex idx, const Expr &coeff);

    const Chart &chart() const noexcept { return chart_; }
    int degree() const noexcept { return degree_; }
    const Terms &terms() const noexcept { return terms_; }
    // Coefficient of the basis element idx, with the permutation sign applied.
    Expr coefficient(MultiIndex idx) const;
    // Degree-0 value.
    Expr value() const;
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(MultiIndex sorted_idx, const Expr &coeff);

    DiffForm operator-() const;
    DiffForm &operator+=(const DiffForm &o);
    DiffForm &operator-=(const DiffForm &o);
    friend DiffForm operator+(DiffForm a, const DiffForm &b) { return a += b; }
    friend DiffForm operator-(DiffForm a, const DiffForm &b) { return a -= b; }
    friend DiffForm operator*(const Expr &s, const DiffForm &f);

    DiffForm map_coefficients(const std::function<Expr(const Expr &)> &f) const;

    // Text form "coeff * d[x] ^ d[y] + ...", accepted back by parse_form.
    std::string str() const;

    friend bool operator==(const DiffForm &a, const DiffForm &b)
    {
        return a.degree_ == b.degree_ && a.chart_ == b.chart_ && a.terms_ == b.terms_;
    }

private:
    Chart chart_;
    int degree_;
    Terms terms_;
};

DiffForm wedge(const DiffForm &a, const DiffForm &b);
DiffForm ext_d(const DiffForm &a);

// Coefficientwise zero test.
Decision is_zero(const DiffForm &a, const ZeroTestOptions &opts = {});
Decision is_closed(const DiffForm &a, const ZeroTestOptions &opts = {});

// K_ij = da_j/dx^i - da_i/dx^j for a 1-form.
ExprMatrix commutator1(const DiffForm &a);

// Radial homotopy operator around base (origin when empty). The input must be
// a closed form of degree >= 1 whose coefficients are polynomial in the chart.
DiffForm homotopy_antiderivative(const DiffForm &a, const std::vector<Rational> &base = {},
                                 const ZeroTestOptions &opts = {});

// Antiderivative when a is closed with polynomial coefficients, empty otherwise.
std::optional<DiffForm> is_exact(const DiffForm &a, const ZeroTestOptions &opts = {});

struct FormParseOptions {
    // When set, identifiers that are neither chart variables, named forms nor listed here are rejected.
    std::optional<std::set<std::string>> scalars;
    std::function<std::optional<DiffForm>(const std::string &)> lookup;
};

DiffForm parse_form(std::string_view text, const Chart &chart, const FormParseOptions &opts = {});

} // namespace skewform
