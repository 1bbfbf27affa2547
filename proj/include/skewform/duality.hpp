#pragma once

// Metrics, the Hodge star and the operators built from it.
//
// Orientation: dx^1 ^ ... ^ dx^n in chart order is positive (times the metric's
// orientation sign). ⋆(a_I dx^I) = a^I √|g| ε(I, I^c) dx^{I^c}.

#include "skewform/form.hpp"
#include "skewform/manifold.hpp"

#include <vector>

namespace skewform {

class Metric {
public:
    // Throws MetricError when g is not symmetric, is singular, has no
    // well-defined determinant sign, or when √|det g| is not rational.
    Metric(Chart chart, ExprMatrix g, int orientation = 1, const ZeroTestOptions &opts = {});

    static Metric euclidean(Chart chart);
    // diag(1, -1, ..., -1); the first chart variable is timelike.
    static Metric minkowski(Chart chart);
    static Metric diagonal(Chart chart, const std::vector<Expr> &entries);

    const Chart &chart() const noexcept { return chart_; }
    const ExprMatrix &g() const noexcept { return g_; }
    const ExprMatrix &inverse() const noexcept { return inv_; }
    const Expr &determinant() const noexcept { return det_; }
    // √|det g| as an exact expression.
    const Expr &volume_factor() const noexcept { return vol_; }
    int det_sign() const noexcept { return det_sign_; }
    int orientation() const noexcept { return orientation_; }
    bool is_diagonal() const;
    std::string str() const;

private:
    Chart chart_;
    ExprMatrix g_;
    ExprMatrix inv_;
    Expr det_;
    Expr vol_;
    int det_sign_ = 1;
    int orientation_ = 1;
};

DiffForm hodge_star(const DiffForm &a, const Metric &g);
// d⋆a == 0.
Decision dual_closure_check(const DiffForm &a, const Metric &g, const ZeroTestOptions &opts = {});
// δ = (-1)^{n(p+1)+1} sign(det g) ⋆d⋆ on p-forms, p >= 1. On Euclidean 1-forms this is minus the divergence.
DiffForm codifferential(const DiffForm &a, const Metric &g);

enum class LaplacianConvention {
    Difference, // dδ - δd
    Hodge, // dδ + δd
};

// δ of a 0-form is taken as zero inside the composition.
DiffForm laplacian(const DiffForm &a, const Metric &g, LaplacianConvention conv = LaplacianConvention::Difference);

// Levi-Civita connection Γ^k_{ij} = ½ g^{kl} (∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij}).
Connection christoffel(const Metric &g);

} // namespace skewform
