#pragma once

#include <array>
#include <cassert>
#include <vector>

namespace ebdg {

/// Legendre polynomial P_k and its first three derivatives at xi, all from
/// one pass of the three-term recurrence. Values beyond order 3 are not
/// needed anywhere in the DG operator (traces stop at third derivatives).
inline std::array<double, 4> legendre_all(int k, double xi) {
    assert(k >= 0);
    std::array<double, 4> p0{1.0, 0.0, 0.0, 0.0};  // P_0
    if (k == 0) return p0;
    std::array<double, 4> p1{xi, 1.0, 0.0, 0.0};  // P_1
    for (int i = 2; i <= k; ++i) {
        const double a = (2.0 * i - 1.0) / i;
        const double b = (i - 1.0) / i;
        std::array<double, 4> p2;
        p2[0] = a * xi * p1[0] - b * p0[0];
        p2[1] = a * (p1[0] + xi * p1[1]) - b * p0[1];
        p2[2] = a * (2.0 * p1[1] + xi * p1[2]) - b * p0[2];
        p2[3] = a * (3.0 * p1[2] + xi * p1[3]) - b * p0[3];
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

inline double legendre_eval(int k, double xi) { return legendre_all(k, xi)[0]; }

/// order-th derivative of P_k at xi, order in {1,2,3}.
inline double legendre_deriv(int k, int order, double xi) {
    assert(order >= 1 && order <= 3);
    return legendre_all(k, xi)[order];
}

/// Modal Legendre basis of a fixed degree on the reference element [-1,1].
struct ReferenceBasis {
    int degree = 0;

    explicit ReferenceBasis(int degree_) : degree(degree_) { assert(degree >= 0); }

    int size() const { return degree + 1; }

    /// Values (resp. derivatives) of all basis functions at xi.
    std::vector<double> values(double xi) const { return table(xi, 0); }
    std::vector<double> derivs(double xi, int order) const { return table(xi, order); }

  private:
    std::vector<double> table(double xi, int order) const {
        std::vector<double> out(size());
        for (int k = 0; k <= degree; ++k) out[k] = legendre_all(k, xi)[order];
        return out;
    }
};

}  // namespace ebdg
