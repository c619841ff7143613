#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ebdg/legendre.hpp"
#include "ebdg/mesh.hpp"

namespace ebdg {

/// Global modal coefficient vector: all u blocks (degree q) in element
/// order, then all v blocks (degree s). q >= 2 so second derivatives are
/// representable; s >= 0.
struct DGState {
    int n = 0, q = 2, s = 0;
    std::vector<double> y;

    DGState() = default;
    DGState(int n_, int q_, int s_) : n(n_), q(q_), s(s_), y(size_of(n_, q_, s_), 0.0) {
        if (q < 2) throw std::invalid_argument("DGState: q must be >= 2");
        if (s < 0 || s > q) throw std::invalid_argument("DGState: need 0 <= s <= q");
        if (n < 1) throw std::invalid_argument("DGState: need at least one element");
    }

    static int size_of(int n, int q, int s) { return n * (q + 1) + n * (s + 1); }
    int size() const { return size_of(n, q, s); }

    int u_offset(int j) const { return j * (q + 1); }
    int v_offset(int j) const { return n * (q + 1) + j * (s + 1); }

    std::span<double> u_coeffs(int j) { return {y.data() + u_offset(j), static_cast<std::size_t>(q + 1)}; }
    std::span<const double> u_coeffs(int j) const {
        return {y.data() + u_offset(j), static_cast<std::size_t>(q + 1)};
    }
    std::span<double> v_coeffs(int j) { return {y.data() + v_offset(j), static_cast<std::size_t>(s + 1)}; }
    std::span<const double> v_coeffs(int j) const {
        return {y.data() + v_offset(j), static_cast<std::size_t>(s + 1)};
    }
};

/// Modal evaluation of a coefficient block at reference coordinate xi;
/// deriv_order applies the chain-rule factor (2/h)^order.
inline double eval_modal(std::span<const double> coeffs, double xi, int deriv_order, double jacobian) {
    double sum = 0.0;
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
        const auto p = legendre_all(k, xi);
        sum += coeffs[k] * p[deriv_order];
    }
    double scale = 1.0;
    for (int r = 0; r < deriv_order; ++r) scale *= jacobian;
    return sum * scale;
}

inline double eval_u(const DGState& st, const Mesh1D& mesh, int j, double xi, int deriv_order = 0) {
    return eval_modal(st.u_coeffs(j), xi, deriv_order, mesh.jacobian(j));
}

inline double eval_v(const DGState& st, const Mesh1D& mesh, int j, double xi, int deriv_order = 0) {
    return eval_modal(st.v_coeffs(j), xi, deriv_order, mesh.jacobian(j));
}

}  // namespace ebdg
