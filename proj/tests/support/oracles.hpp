#pragma once

// Numeric oracles that never touch the symbolic derivative code.

#include "skewform/manifold.hpp"

#include <map>
#include <string>
#include <vector>

namespace skewform::proptest {

// Finite-difference curvature: Γ is only ever evaluated numerically.
inline double gamma_at(const Connection &c, std::size_t s, std::size_t a, std::size_t b, const std::vector<double> &pt)
{
    const Expr &g = c.gamma(s, a, b);
    if (g.is_zero()) {
        return 0.0;
    }
    std::map<std::string, double> env;
    for (std::size_t i = 0; i < pt.size(); ++i) {
        env.emplace(c.chart().var(i), pt[i]);
    }
    return eval_double(g, env);
}

inline double riemann_fd(const Connection &c, std::size_t r, std::size_t s, std::size_t m, std::size_t v,
                  const std::vector<double> &pt)
{
    const double h = 1e-3;
    // Five-point central stencil.
    auto partial = [&](std::size_t dir, std::size_t up, std::size_t lo1, std::size_t lo2) {
        auto at = [&](double shift) {
            std::vector<double> q = pt;
            q[dir] += shift;
            return gamma_at(c, up, lo1, lo2, q);
        };
        return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    };
    double out = partial(m, r, v, s) - partial(v, r, m, s);
    for (std::size_t l = 0; l < pt.size(); ++l) {
        out += gamma_at(c, r, m, l, pt) * gamma_at(c, l, v, s, pt) - gamma_at(c, r, v, l, pt) * gamma_at(c, l, m, s, pt);
    }
    return out;
}

} // namespace skewform::proptest
