// Gauss–Legendre quadrature. Nodes via Newton iteration on P_n with the
// Chebyshev-like initial guess; accurate to machine precision for the modest
// orders used here (8 per cell in the library, up to 160 in the spectral
// transforms).
#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace weylseam {

struct QuadratureRule {
    std::vector<double> nodes;   // in (−1, 1), ascending
    std::vector<double> weights; // positive, sum to 2
};

inline QuadratureRule gauss_legendre(int n) {
    require(n >= 1, ErrorKind::InvalidInput, "quadrature order must be positive");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (k+1)P_{k+1} = (2k+1)xP_k − kP_{k−1}.
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Newton converged from the i-th root guess; roots come out descending.
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] =
            2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Shared order-8 rule: plenty for per-cell integrands of the form
// polynomial × e^{izs} with |z|·(cell length) of order one.
inline const QuadratureRule& gl8() {
    static const QuadratureRule rule = gauss_legendre(8);
    return rule;
}

// Map a reference rule to the interval [a, b].
inline void map_rule(const QuadratureRule& rule, double a, double b,
                     std::vector<double>& nodes, std::vector<double>& weights) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const std::size_t n = rule.nodes.size();
    nodes.resize(n);
    weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = mid + half * rule.nodes[i];
        weights[i] = half * rule.weights[i];
    }
}

} // namespace weylseam
