#pragma once

// Worked relations from the theory of closed and evolutionary forms, run as checks.

#include "skewform/json.hpp"
#include "skewform/relations.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skewform {

struct CatalogOptions {
    ZeroTestOptions zero;
    ScanOptions scan;
    // Numeric checks only.
    double tolerance = 1e-9;
    int max_steps = 8;
    int grid_n = 256;
};

struct Check {
    std::string label;
    bool passed = false;
    std::string detail;
};

struct EntryReport {
    std::string name;
    std::string title;
    std::string note;
    std::vector<Check> checks;
    // Verdicts, forms and numbers backing the checks.
    Json data = Json::object();

    bool passed() const;
};

struct CatalogEntryInfo {
    std::string name;
    std::string title;
};

std::vector<CatalogEntryInfo> catalog_entries();
// Throws UnknownEntryError.
EntryReport run_entry(const std::string &name, const CatalogOptions &opts = {});
// Every entry, in parallel; results in catalog order.
std::vector<EntryReport> run_all(const CatalogOptions &opts = {});

Json to_json(const EntryReport &r);

// --- Lagrange to Hamilton ---------------------------------------------------------

struct LegendreResult {
    std::vector<Expr> momenta;          // p_j = ∂L/∂q̇_j in (q, q̇)
    std::optional<Expr> hamiltonian;    // in (q, p); empty when the Hessian depends on q̇
    Expr degeneracy;                    // det ∂²L/∂q̇_j∂q̇_k
    std::optional<LocusReport> locus;   // where the degeneracy vanishes, when elimination is refused
};

// Throws PreconditionError when the degeneracy is identically zero or the name
// lists disagree in length.
LegendreResult legendre_transform(const Expr &lagrangian, const std::vector<std::string> &qdot,
                                  const std::vector<std::string> &p, const ScanOptions &opts = {});

// --- canonical transformations ----------------------------------------------------

struct CanonicalResult {
    DiffForm sigma; // Σ p_j dq_j - Σ P_j dQ_j over (q, p)
    Decision is_canonical;
    std::optional<Expr> generating_function;
};

CanonicalResult canonical_check(const std::vector<std::string> &q, const std::vector<std::string> &p,
                                const std::vector<Expr> &Q, const std::vector<Expr> &P,
                                const ZeroTestOptions &opts = {});

// --- Green's theorem on the unit square -------------------------------------------

struct GreenResult {
    double circulation = 0;
    double area_integral = 0;
    double abs_diff = 0;
};

// Composite Simpson with grid_n (even) subintervals per edge and per axis.
// Throws PoleError when an integrand is singular on the square.
GreenResult green_check(const Expr &P, const Expr &Q, int grid_n, const std::string &x = "x",
                        const std::string &y = "y");

} // namespace skewform
