#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebdg/legendre.hpp"

namespace ebdg {

/// Gauss-Legendre rule on [-1,1]: nodes ascending, weights positive,
/// exact for polynomials of degree <= 2n-1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Radau nodes on (0,1] with the right endpoint included; the m-point
/// rule is exact for polynomials of degree <= 2m-2 on [0,1].
struct RadauNodes {
    int m = 0;
    std::vector<double> nodes;    // ascending, last node exactly 1
    std::vector<double> weights;  // sum to 1
};

namespace detail {

inline constexpr int kNewtonMaxIter = 100;
inline constexpr double kNewtonTol = 1e-14;

[[noreturn]] inline void newton_failure(const char* what, int index) {
    throw std::runtime_error(std::string(what) + ": Newton iteration did not converge for root " +
                             std::to_string(index));
}

}  // namespace detail

/// n-point Gauss-Legendre rule via Newton iteration on the roots of P_n,
/// Chebyshev initial guesses, symmetric fill of the second half.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    const double pi = std::acos(-1.0);
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        bool converged = false;
        for (int it = 0; it < detail::kNewtonMaxIter; ++it) {
            const auto p = legendre_all(n, x);
            const double dx = -p[0] / p[1];
            x += dx;
            if (std::abs(dx) < detail::kNewtonTol) {
                converged = true;
                break;
            }
        }
        if (!converged) detail::newton_failure("gauss_legendre", i);
        const double dp = legendre_all(n, x)[1];
        // Guesses start near +1 and walk down; store ascending.
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact midpoint for odd n
    return rule;
}

/// Integral of f over [a,b] with the given reference rule.
template <typename F>
double integrate(const QuadratureRule& rule, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    double sum = 0.0;
    for (int g = 0; g < rule.size(); ++g)
        sum += rule.weights[g] * f(mid + halfwidth * rule.nodes[g]);
    return halfwidth * sum;
}

/// Right-endpoint Gauss-Radau nodes, scaled to (0,1]. The interior nodes are
/// the roots of P_m - P_{m-1} on (-1,1); x = 1 is always a root and becomes
/// the final node. Newton iteration from Chebyshev-Radau initial guesses
/// cos(2*pi*i/(2m-1)); weights by integrating the Lagrange basis.
inline RadauNodes gauss_radau_right(int m) {
    if (m < 1) throw std::invalid_argument("gauss_radau_right: m must be >= 1");
    std::vector<double> x(m);
    x[m - 1] = 1.0;
    const double pi = std::acos(-1.0);
    for (int i = 1; i < m; ++i) {
        double z = std::cos(2.0 * pi * i / (2.0 * m - 1.0));
        bool converged = false;
        for (int it = 0; it < detail::kNewtonMaxIter; ++it) {
            const auto pm = legendre_all(m, z);
            const auto pm1 = legendre_all(m - 1, z);
            const double g = pm[0] - pm1[0];
            const double dg = pm[1] - pm1[1];
            const double dz = -g / dg;
            z += dz;
            if (std::abs(dz) < detail::kNewtonTol) {
                converged = true;
                break;
            }
        }
        if (!converged) detail::newton_failure("gauss_radau_right", i);
        x[m - 1 - i] = z;
    }
    for (int i = 0; i + 1 < m; ++i)
        if (!(x[i] < x[i + 1]) || x[i] <= -1.0)
            throw std::runtime_error("gauss_radau_right: node ordering lost, Newton found a duplicate root");

    RadauNodes radau;
    radau.m = m;
    radau.nodes.resize(m);
    radau.weights.resize(m);
    for (int i = 0; i < m; ++i) radau.nodes[i] = 0.5 * (x[i] + 1.0);
    radau.nodes[m - 1] = 1.0;

    // w_i = integral over [0,1] of the i-th Lagrange basis on the nodes.
    const QuadratureRule gl = gauss_legendre(m / 2 + 2);
    for (int i = 0; i < m; ++i) {
        radau.weights[i] = integrate(gl, 0.0, 1.0, [&](double t) {
            double ell = 1.0;
            for (int j = 0; j < m; ++j)
                if (j != i) ell *= (t - radau.nodes[j]) / (radau.nodes[i] - radau.nodes[j]);
            return ell;
        });
    }
    for (double w : radau.weights)
        if (!(w > 0.0)) throw std::runtime_error("gauss_radau_right: nonpositive weight");
    return radau;
}

}  // namespace ebdg
