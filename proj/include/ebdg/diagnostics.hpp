#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ebdg/mesh.hpp"
#include "ebdg/operator.hpp"
#include "ebdg/problem.hpp"
#include "ebdg/quadrature.hpp"
#include "ebdg/state.hpp"

namespace ebdg {

/// Error norms of a DG state against the problem's exact solution.
/// energy = sqrt(l2_v^2 + h2_u^2), the norm tabulated by the harness.
struct ErrorReport {
    double l2_v = 0.0;
    double l2_u = 0.0;
    double h2_u = 0.0;
    double energy = 0.0;
    std::vector<double> element_energy_sq;  // per-element share of energy^2
};

/// Element-wise quadrature of the squared errors with q+6 points by default
/// (over-integration so the measurement does not limit observed rates).
inline ErrorReport error_norms(const DGState& st, const BeamProblem& prob, const Mesh1D& mesh, double t,
                               int n_quad = -1) {
    if (!prob.exact) throw std::invalid_argument("error_norms: problem has no exact solution");
    const ExactSolution& ex = *prob.exact;
    const QuadratureRule rule = gauss_legendre(n_quad > 0 ? n_quad : st.q + 6);

    ErrorReport rep;
    rep.element_energy_sq.assign(st.n, 0.0);
    double l2v = 0.0, l2u = 0.0, h2u = 0.0;
    for (int j = 0; j < st.n; ++j) {
        const double halfwidth = 0.5 * mesh.width(j);
        double ev = 0.0, eu = 0.0, euxx = 0.0;
        for (int g = 0; g < rule.size(); ++g) {
            const double xi = rule.nodes[g];
            const double x = mesh.from_reference(j, xi);
            const double w = halfwidth * rule.weights[g];
            const double dv = ex.u_t(x, t) - eval_v(st, mesh, j, xi);
            const double du = ex.u(x, t) - eval_u(st, mesh, j, xi);
            const double duxx = ex.u_xx(x, t) - eval_u(st, mesh, j, xi, 2);
            ev += w * dv * dv;
            eu += w * du * du;
            euxx += w * duxx * duxx;
        }
        l2v += ev;
        l2u += eu;
        h2u += euxx;
        rep.element_energy_sq[j] = ev + euxx;
    }
    rep.l2_v = std::sqrt(l2v);
    rep.l2_u = std::sqrt(l2u);
    rep.h2_u = std::sqrt(h2u);
    rep.energy = std::sqrt(l2v + h2u);
    return rep;
}

struct RateRow {
    int N = 0;
    double error = 0.0;
    std::optional<double> rate;  // empty on the first row
};

struct RateTable {
    std::vector<RateRow> rows;
};

/// rate_i = log2(e_{N}/e_{2N}), attached to the finer row. Requires a
/// doubling N sequence.
inline RateTable convergence_rates(const std::vector<std::pair<int, double>>& errors) {
    RateTable table;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        RateRow row;
        row.N = errors[i].first;
        row.error = errors[i].second;
        if (i > 0) {
            if (errors[i].first != 2 * errors[i - 1].first)
                throw std::invalid_argument("convergence_rates: N sequence must double");
            row.rate = std::log2(errors[i - 1].second / errors[i].second);
        }
        table.rows.push_back(row);
    }
    return table;
}

/// Element-wise L2 projection of f onto degree-`degree` modal coefficients.
inline std::vector<double> project_function(const Mesh1D& mesh, int degree,
                                            const std::function<double(double)>& f, int n_quad = -1) {
    const QuadratureRule rule = gauss_legendre(n_quad > 0 ? n_quad : degree + 6);
    const int n = mesh.num_elements();
    std::vector<double> coeffs(static_cast<std::size_t>(n) * (degree + 1), 0.0);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k <= degree; ++k) {
            double moment = 0.0;
            for (int g = 0; g < rule.size(); ++g)
                moment += rule.weights[g] * f(mesh.from_reference(j, rule.nodes[g])) *
                          legendre_eval(k, rule.nodes[g]);
            // int P_k^2 dxi = 2/(2k+1)
            coeffs[static_cast<std::size_t>(j) * (degree + 1) + k] = moment * (2.0 * k + 1.0) / 2.0;
        }
    }
    return coeffs;
}

/// Plain L2 projection of the initial data g1 -> u (degree q), g2 -> v
/// (degree s).
inline DGState project_initial_data(const BeamProblem& prob, const Mesh1D& mesh, int q, int s) {
    DGState st(mesh.num_elements(), q, s);
    const auto u0 = project_function(mesh, q, prob.g1);
    const auto v0 = project_function(mesh, s, prob.g2);
    for (int j = 0; j < st.n; ++j) {
        for (int k = 0; k <= q; ++k) st.u_coeffs(j)[k] = u0[static_cast<std::size_t>(j) * (q + 1) + k];
        for (int k = 0; k <= s; ++k) st.v_coeffs(j)[k] = v0[static_cast<std::size_t>(j) * (s + 1) + k];
    }
    return st;
}

}  // namespace ebdg
