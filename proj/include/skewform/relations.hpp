#pragma once

// Pseudostructures, relations dψ = ω and their classification.

#include "skewform/duality.hpp"
#include "skewform/form.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace skewform {

// A parametrized submanifold x = φ(u) of the ambient chart. Symbols in φ that
// are neither parameters nor ambient variables are treated as constants.
class Pseudostructure {
public:
    // Throws PreconditionError unless m < n and the Jacobian reaches rank m at
    // some sampled parameter point.
    Pseudostructure(Chart ambient, Chart params, std::vector<Expr> map, const ZeroTestOptions &opts = {});

    const Chart &ambient() const noexcept { return ambient_; }
    const Chart &params() const noexcept { return params_; }
    const std::vector<Expr> &map() const noexcept { return map_; }
    // J(i, k) = ∂φ^i/∂u^k, n x m.
    const ExprMatrix &jacobian() const noexcept { return jac_; }
    std::map<std::string, Expr> substitution() const;
    std::string str() const;

private:
    Chart ambient_;
    Chart params_;
    std::vector<Expr> map_;
    ExprMatrix jac_;
};

DiffForm pullback(const DiffForm &a, const Pseudostructure &s);
// d_π a = d(pullback a).
DiffForm interior_d(const DiffForm &a, const Pseudostructure &s);

enum class DualOrder {
    AmbientThenPullback, // d_π(π*(⋆a))
    InducedMetric,       // d(⋆_π π*a) with the metric φ*g
};

Metric induced_metric(const Metric &g, const Pseudostructure &s);
Decision dual_closure_on(const DiffForm &a, const Metric &g, const Pseudostructure &s,
                         DualOrder order = DualOrder::AmbientThenPullback, const ZeroTestOptions &opts = {});

// dψ = ω.
class Relation {
public:
    // Throws DegreeError unless deg ω = deg ψ + 1, ChartMismatchError on differing charts.
    Relation(DiffForm psi, DiffForm omega);

    const DiffForm &psi() const noexcept { return psi_; }
    const DiffForm &omega() const noexcept { return omega_; }
    std::string str() const;

private:
    DiffForm psi_;
    DiffForm omega_;
};

enum class Classification { Identical, ClosedRhs, NonIdentical };

std::string to_string(Classification c);
std::optional<Classification> classification_from_string(const std::string &s);

struct Verdict {
    Classification classification;
    DiffForm residual;   // ω - dψ
    DiffForm commutator; // dω
    // d_π ω_π == 0, only for classify_on.
    std::optional<bool> pi_closure;
    bool probabilistic = false;
};

Verdict classify(const Relation &r, const ZeroTestOptions &opts = {});
// classify on the pulled-back relation over the parameter chart.
Verdict classify_on(const Relation &r, const Pseudostructure &s, const ZeroTestOptions &opts = {});

// --- degenerate transformations ------------------------------------------------

enum class ScanKind { Jacobian, Determinant, Poisson };

std::string to_string(ScanKind k);
std::optional<ScanKind> scan_kind_from_string(const std::string &s);

struct ScanRequest {
    ScanKind kind = ScanKind::Determinant;
    // Jacobian: n functions. Determinant: k*k entries, row-major. Poisson: f, g.
    std::vector<Expr> exprs;
    // Jacobian: differentiation variables (default: the chart, in order).
    std::vector<std::string> vars;
    // Poisson: (q_j, p_j) pairs of chart variables.
    std::vector<std::pair<std::string, std::string>> pairs;
};

struct ScanOptions {
    std::uint64_t seed = 0;
    int lines = 64;
    double tolerance = 1e-9;
    ZeroTestOptions zero;
};

struct LocusReport {
    ScanKind kind;
    Expr functional;
    bool identically_zero = false;
    bool probabilistic = false;
    // Variable order of every point.
    std::vector<std::string> variables;
    std::vector<std::vector<double>> points;
};

Expr poisson_bracket(const Expr &f, const Expr &g, const std::vector<std::pair<std::string, std::string>> &pairs);

LocusReport degenerate_scan(const ScanRequest &req, const Chart &chart, const ScanOptions &opts = {});

// --- sequential integration ----------------------------------------------------

struct ChainStep {
    int degree;      // degree of left and right
    DiffForm rhs;    // closed form being integrated
    DiffForm left;   // ψ_k
    DiffForm right;  // θ_k, the homotopy antiderivative of rhs
    // rhs - dθ_k ≡ 0, i.e. d(ψ_k - θ_k) = 0 modulo the relation dψ_k = rhs.
    Decision witness;
    // d(ψ_k - θ_k) ≡ 0 read literally.
    Decision literal_closed;
};

// Throws NotClosedError when ω_π is not closed.
std::vector<ChainStep> integrate_chain(const Relation &r, const Pseudostructure &s, int max_steps,
                                       const ZeroTestOptions &opts = {});
// Same, directly on the relation's own chart.
std::vector<ChainStep> integrate_chain(const Relation &r, int max_steps, const ZeroTestOptions &opts = {});

} // namespace skewform
