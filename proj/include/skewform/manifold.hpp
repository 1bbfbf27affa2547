#pragma once

// Connections and the evolutionary differential.
//
// Index convention: gamma(s, a, b) is Γ^s_{ab}. The covariant derivative of a
// covector follows a_{b;a} = ∂a_b/∂x^a + Γ^s_{ba} a_s (plus sign).

#include "skewform/form.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace skewform {

// Dense array of Expr with every axis of length dim.
class ExprArray {
public:
    ExprArray(std::size_t dim, std::size_t rank);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rank() const noexcept { return rank_; }
    Expr &at(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
    const Expr &at(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }
    const std::vector<Expr> &data() const noexcept { return data_; }

private:
    std::size_t offset(std::initializer_list<std::size_t> idx) const;

    std::size_t dim_;
    std::size_t rank_;
    std::vector<Expr> data_;
};

Decision is_zero(const ExprArray &a, const ZeroTestOptions &opts = {});

struct ConnectionEntry {
    std::string upper;
    std::string lower1;
    std::string lower2;
    std::string value;
};

class Connection {
public:
    // The zero connection.
    explicit Connection(Chart chart);
    // Entries name chart variables; unlisted components are zero.
    static Connection from_entries(Chart chart, const std::vector<ConnectionEntry> &entries);

    const Chart &chart() const noexcept { return chart_; }
    const Expr &gamma(std::size_t s, std::size_t a, std::size_t b) const { return g_.at({s, a, b}); }
    void set(std::size_t s, std::size_t a, std::size_t b, const Expr &value);
    const ExprArray &components() const noexcept { return g_; }

private:
    Chart chart_;
    ExprArray g_;
};

// M(b, a) = a_{b;a}.
ExprMatrix covariant_deriv(const DiffForm &a, const Connection &c);
// K(a, b) = (∂a_b/∂x^a - ∂a_a/∂x^b) + (Γ^s_{ba} - Γ^s_{ab}) a_s.
ExprMatrix evo_commutator(const DiffForm &a, const Connection &c);
// Antisymmetrized covariant derivative; each lower index gets a +Γ correction.
DiffForm evo_d(const DiffForm &a, const Connection &c);

// T^s_{ab} = Γ^s_{ba} - Γ^s_{ab}, stored at (s, a, b).
ExprArray torsion(const Connection &c);
// R^r_{smn} stored at (r, s, m, n).
ExprArray riemann(const Connection &c);
// Cyclic sum R^r_{smn} + R^r_{mns} + R^r_{nsm}. Throws PreconditionError when
// the connection has torsion.
Decision bianchi_first_check(const Connection &c, const ZeroTestOptions &opts = {});

} // namespace skewform
