#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebdg/fluxes.hpp"
#include "ebdg/linalg.hpp"
#include "ebdg/mesh.hpp"
#include "ebdg/problem.hpp"
#include "ebdg/quadrature.hpp"
#include "ebdg/state.hpp"

namespace ebdg {

/// Per-element matrices and endpoint tables. The displacement system is
/// stored row-scaled (mean row by 1/h, mean-slope row as is, bending rows
/// by (h/2)^3) so its conditioning is h-independent; solutions are
/// unchanged. The matrix ref_bending = int D P_i'' P_j'' dxi is shared by
/// the displacement rows, the velocity stiffness and the energy block,
/// which keeps the discrete energy identity exact in floating point.
struct ElementOperators {
    int q = 0, s = 0;
    double h = 0.0;

    Matrix L;  // (q+1)^2 scaled displacement system: rows = mean, mean slope, bending tests P_2..P_q
    LUFactors L_lu;
    Matrix mass;  // (s+1)^2 mu-weighted velocity mass
    LUFactors mass_lu;
    Matrix ref_bending;  // (q+1)^2, int D P_i'' P_j'' dxi on the reference element

    // endpoint traces as rows over the element's coefficients; end 0 = left
    std::array<std::vector<double>, 2> trace_v, trace_vx;          // over v coefficients
    std::array<std::vector<double>, 2> trace_moment, trace_shear;  // over u coefficients
    // endpoint weights of the test functions in the boundary brackets
    std::array<std::vector<double>, 2> test_moment, test_shear;  // displacement rows, scaled by (h/2)^3
    std::array<std::vector<double>, 2> test_psi, test_psix;      // velocity rows

    // load quadrature: physical nodes, physical weights, P_k values per node
    std::vector<double> quad_x, quad_w;
    Matrix basis_v_at_quad;  // (s+1) x n_quad

    Matrix velocity_stiffness() const {  // (s+1)x(q+1), int D psi_xx phi_xx dx
        const double scale = std::pow(2.0 / h, 3);
        Matrix K(s + 1, q + 1);
        for (int k = 0; k <= s; ++k)
            for (int l = 0; l <= q; ++l) K(k, l) = scale * ref_bending(k, l);
        return K;
    }

    Matrix energy_block_u() const {  // (q+1)^2, int D phi_xx phi_xx dx
        const double scale = std::pow(2.0 / h, 3);
        Matrix E(q + 1, q + 1);
        for (int k = 0; k <= q; ++k)
            for (int l = 0; l <= q; ++l) E(k, l) = scale * ref_bending(k, l);
        return E;
    }

    /// Scaled right-hand-side map of the displacement system applied to the
    /// element's own v coefficients (volume + constraint rows).
    Matrix displacement_volume_rhs() const {
        Matrix R(q + 1, s + 1);
        R(0, 0) = 1.0;  // mean constraint: (1/h) int v dx = v_0
        for (int l = 0; l <= s; ++l) R(1, l) = (l % 2 == 1) ? 2.0 : 0.0;  // v(right) - v(left)
        for (int k = 2; k <= q; ++k)
            for (int l = 0; l <= s; ++l) R(k, l) = ref_bending(k, l);
        return R;
    }

    std::vector<double> load_moments(const std::function<double(double, double)>& f, double t) const {
        std::vector<double> r(s + 1, 0.0);
        for (int g = 0; g < static_cast<int>(quad_x.size()); ++g) {
            const double wf = quad_w[g] * f(quad_x[g], t);
            for (int k = 0; k <= s; ++k) r[k] += wf * basis_v_at_quad(k, g);
        }
        return r;
    }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

/// Traces and fluxes feeding one end of the displacement equation.
struct DisplacementFaceData {
    double v = 0.0, v_star = 0.0, vx = 0.0, vx_star = 0.0;
};

/// Fluxes feeding one end of the velocity equation.
struct MomentFaceData {
    double moment_star = 0.0, shear_star = 0.0;
};

/// Solves the local (q+1)x(q+1) system for the element's u_t coefficients:
/// bending-tested rows plus the two constraint rows fixing the mean and the
/// mean slope of u_t.
inline std::vector<double> local_displacement_solve(const ElementOperators& E,
                                                    const DisplacementFaceData& left,
                                                    const DisplacementFaceData& right,
                                                    std::span<const double> v_coeffs) {
    std::vector<double> r = matvec(E.displacement_volume_rhs(), v_coeffs);
    for (int k = 0; k <= E.q; ++k) {
        r[k] += E.test_shear[1][k] * (right.v - right.v_star) + E.test_moment[1][k] * (right.vx_star - right.vx);
        r[k] -= E.test_shear[0][k] * (left.v - left.v_star) + E.test_moment[0][k] * (left.vx_star - left.vx);
    }
    return lu_solve(E.L_lu, r);
}

/// Solves the mu-weighted mass system for the element's v_t coefficients.
/// load may be empty (treated as zero forcing moments).
inline std::vector<double> local_velocity_solve(const ElementOperators& E, const MomentFaceData& left,
                                                const MomentFaceData& right, std::span<const double> u_coeffs,
                                                std::span<const double> load = {}) {
    std::vector<double> r = matvec(E.velocity_stiffness(), u_coeffs);
    for (double& v : r) v = -v;
    for (int k = 0; k <= E.s; ++k) {
        r[k] += -E.test_psi[1][k] * right.shear_star + E.test_psix[1][k] * right.moment_star;
        r[k] -= -E.test_psi[0][k] * left.shear_star + E.test_psix[0][k] * left.moment_star;
        if (!load.empty()) r[k] += load[k];
    }
    return lu_solve(E.mass_lu, r);
}

namespace detail {

inline ElementOperators build_element_operators(const BeamProblem& prob, const Mesh1D& mesh, int j, int q,
                                                int s, const QuadratureRule& rule) {
    ElementOperators E;
    E.q = q;
    E.s = s;
    E.h = mesh.width(j);
    const double jac = mesh.jacobian(j);
    const int nq = rule.size();

    // quadrature tables
    E.quad_x.resize(nq);
    E.quad_w.resize(nq);
    std::vector<double> D_at(nq), mu_at(nq);
    Matrix d2(q + 1, nq);  // P_k'' at nodes
    E.basis_v_at_quad = Matrix(s + 1, nq);
    Matrix basis_u(q + 1, nq);
    for (int g = 0; g < nq; ++g) {
        const double xi = rule.nodes[g];
        E.quad_x[g] = mesh.from_reference(j, xi);
        E.quad_w[g] = 0.5 * E.h * rule.weights[g];
        D_at[g] = prob.D(E.quad_x[g]);
        mu_at[g] = prob.mu(E.quad_x[g]);
        if (!(D_at[g] > 0.0) || !(mu_at[g] > 0.0))
            throw std::invalid_argument("assemble: mu and D must be positive (element " + std::to_string(j) +
                                        ")");
        for (int k = 0; k <= q; ++k) {
            const auto p = legendre_all(k, xi);
            basis_u(k, g) = p[0];
            d2(k, g) = p[2];
            if (k <= s) E.basis_v_at_quad(k, g) = p[0];
        }
    }

    E.ref_bending = Matrix(q + 1, q + 1);
    for (int i = 0; i <= q; ++i)
        for (int l = i; l <= q; ++l) {
            double sum = 0.0;
            for (int g = 0; g < nq; ++g) sum += rule.weights[g] * D_at[g] * d2(i, g) * d2(l, g);
            E.ref_bending(i, l) = sum;
            E.ref_bending(l, i) = sum;
        }

    E.mass = Matrix(s + 1, s + 1);
    for (int i = 0; i <= s; ++i)
        for (int l = i; l <= s; ++l) {
            double sum = 0.0;
            for (int g = 0; g < nq; ++g)
                sum += E.quad_w[g] * mu_at[g] * E.basis_v_at_quad(i, g) * E.basis_v_at_quad(l, g);
            E.mass(i, l) = sum;
            E.mass(l, i) = sum;
        }

    E.L = Matrix(q + 1, q + 1);
    E.L(0, 0) = 1.0;
    for (int l = 0; l <= q; ++l) E.L(1, l) = (l % 2 == 1) ? 2.0 : 0.0;
    for (int k = 2; k <= q; ++k)
        for (int l = 0; l <= q; ++l) E.L(k, l) = E.ref_bending(k, l);

    // endpoint tables
    for (int e = 0; e < 2; ++e) {
        const double xi = (e == 0) ? -1.0 : 1.0;
        const double x = (e == 0) ? mesh.left(j) : mesh.right(j);
        const double D = prob.D(x), Dx = prob.D_x(x);
        E.trace_v[e].assign(s + 1, 0.0);
        E.trace_vx[e].assign(s + 1, 0.0);
        E.test_psi[e].assign(s + 1, 0.0);
        E.test_psix[e].assign(s + 1, 0.0);
        E.trace_moment[e].assign(q + 1, 0.0);
        E.trace_shear[e].assign(q + 1, 0.0);
        E.test_moment[e].assign(q + 1, 0.0);
        E.test_shear[e].assign(q + 1, 0.0);
        const double half_h = 0.5 * E.h;
        for (int k = 0; k <= q; ++k) {
            const auto p = legendre_all(k, xi);
            if (k <= s) {
                E.trace_v[e][k] = p[0];
                E.trace_vx[e][k] = jac * p[1];
                E.test_psi[e][k] = p[0];
                E.test_psix[e][k] = jac * p[1];
            }
            E.trace_moment[e][k] = D * jac * jac * p[2];
            E.trace_shear[e][k] = Dx * jac * jac * p[2] + D * jac * jac * jac * p[3];
            // bracket weights of the (h/2)^3-scaled displacement rows
            E.test_moment[e][k] = half_h * D * p[2];
            E.test_shear[e][k] = half_h * Dx * p[2] + D * p[3];
        }
    }

    try {
        E.L_lu = lu_factor(E.L);
        E.mass_lu = lu_factor(E.mass);
    } catch (const SingularMatrixError&) {
        throw std::runtime_error("assemble: singular local system on element " + std::to_string(j));
    }
    return E;
}

}  // namespace detail

/// Global semi-discrete system y' = A y + load(t) together with the energy
/// matrix H (E^h = 1/2 y^T H y). A and H are dense; elements keep the local
/// factorizations for load evaluation and diagnostics.
struct SemiDiscreteSystem {
    int n = 0, q = 0, s = 0;
    Mesh1D mesh{std::vector<double>{0.0, 1.0}};
    BeamProblem problem;
    FluxSpec spec;
    Matrix A;
    Matrix H;
    std::vector<ElementOperators> elements;

    int size() const { return DGState::size_of(n, q, s); }
    int u_offset(int j) const { return j * (q + 1); }
    int v_offset(int j) const { return n * (q + 1) + j * (s + 1); }

    /// Forcing moments projected into the velocity blocks; u blocks zero.
    std::vector<double> load(double t) const {
        std::vector<double> F(size(), 0.0);
        for (int j = 0; j < n; ++j) {
            const auto moments = elements[j].load_moments(problem.forcing, t);
            const auto block = lu_solve(elements[j].mass_lu, moments);
            for (int k = 0; k <= s; ++k) F[v_offset(j) + k] = block[k];
        }
        return F;
    }
};

/// 1/2 y^T H y, evaluated block-wise.
inline double discrete_energy(const SemiDiscreteSystem& sys, std::span<const double> y) {
    double e = 0.0;
    for (int j = 0; j < sys.n; ++j) {
        const ElementOperators& E = sys.elements[j];
        const double scale = std::pow(2.0 / E.h, 3);
        const double* u = y.data() + sys.u_offset(j);
        const double* v = y.data() + sys.v_offset(j);
        for (int i = 0; i <= sys.q; ++i)
            for (int l = 0; l <= sys.q; ++l) e += scale * E.ref_bending(i, l) * u[i] * u[l];
        for (int i = 0; i <= sys.s; ++i)
            for (int l = 0; l <= sys.s; ++l) e += E.mass(i, l) * v[i] * v[l];
    }
    return 0.5 * e;
}

namespace detail {

// Linear weights of each interface flux over the eight one-sided traces,
// obtained by probing interface_flux with unit trace data.
struct InterfaceWeights {
    // columns: v-, v+, vx-, vx+, M-, M+, S-, S+
    std::array<std::array<double, 8>, 4> w{};  // rows: v*, vx*, M*, S*
};

inline InterfaceWeights probe_interface_weights(const FluxSpec& spec) {
    InterfaceWeights W;
    for (int t = 0; t < 8; ++t) {
        TraceData td;
        double* fields[8] = {&td.v_minus,      &td.v_plus,      &td.vx_minus,    &td.vx_plus,
                             &td.moment_minus, &td.moment_plus, &td.shear_minus, &td.shear_plus};
        *fields[t] = 1.0;
        const InterfaceFlux f = interface_flux(spec, td);
        W.w[0][t] = f.v_star;
        W.w[1][t] = f.vx_star;
        W.w[2][t] = f.moment_star;
        W.w[3][t] = f.shear_star;
    }
    return W;
}

// Same for a physical end over the four interior traces (v, vx, M, S).
struct BoundaryWeights {
    std::array<std::array<double, 4>, 4> w{};  // rows: v*, vx*, M*, S*
};

inline BoundaryWeights probe_boundary_weights(End end, BoundaryType bc, const FluxSpec& spec) {
    BoundaryWeights W;
    for (int t = 0; t < 4; ++t) {
        BoundaryTrace td;
        double* fields[4] = {&td.v, &td.vx, &td.moment, &td.shear};
        *fields[t] = 1.0;
        const InterfaceFlux f = boundary_flux(end, bc, spec.eta1, spec.eta2, td);
        W.w[0][t] = f.v_star;
        W.w[1][t] = f.vx_star;
        W.w[2][t] = f.moment_star;
        W.w[3][t] = f.shear_star;
    }
    return W;
}

// Accumulates rank-one couplings of one element's equations before the
// local solves: out(k, c) += lhs[k] * weight * rhs[c].
inline void add_outer(Matrix& out, std::span<const double> lhs, double weight, std::span<const double> rhs) {
    if (weight == 0.0) return;
    for (int k = 0; k < out.rows(); ++k) {
        if (lhs[k] == 0.0) continue;
        const double f = lhs[k] * weight;
        for (int c = 0; c < out.cols(); ++c) out(k, c) += f * rhs[c];
    }
}

}  // namespace detail

/// Builds the dense semi-discrete system by direct block assembly: volume
/// blocks first, then for every interface and physical end the rank-one
/// couplings of the numerical fluxes, and finally the local solves applied
/// column-wise. n_quad < 1 selects the default max(q,s)+4 points.
inline SemiDiscreteSystem assemble(const BeamProblem& prob, const Mesh1D& mesh, int q, int s,
                                   const FluxSpec& spec, int n_quad = -1) {
    if (q < 2) throw std::invalid_argument("assemble: q must be >= 2");
    if (s < 0 || s > q) throw std::invalid_argument("assemble: need 0 <= s <= q");
    validate(spec);
    validate_boundary(spec, prob.bc_left);
    validate_boundary(spec, prob.bc_right);

    SemiDiscreteSystem sys;
    sys.n = mesh.num_elements();
    sys.q = q;
    sys.s = s;
    sys.mesh = mesh;
    sys.problem = prob;
    sys.spec = spec;

    const int nq = (n_quad > 0) ? n_quad : std::max(q, s) + 4;
    const QuadratureRule rule = gauss_legendre(nq);
    sys.elements.reserve(sys.n);
    for (int j = 0; j < sys.n; ++j)
        sys.elements.push_back(detail::build_element_operators(prob, mesh, j, q, s, rule));

    const int n = sys.n;
    const int nu = q + 1, nv = s + 1;
    const int size = sys.size();
    sys.A = Matrix(size, size);
    sys.H = Matrix(size, size);

    // Pre-solve coupling blocks: per element, neighbors -1/0/+1.
    // Cuu/Cuv feed the displacement rows (scaled), Cvu/Cvv the velocity rows.
    std::vector<std::array<Matrix, 3>> Cuu(n), Cuv(n), Cvu(n), Cvv(n);
    for (int j = 0; j < n; ++j)
        for (int d = 0; d < 3; ++d) {
            Cuu[j][d] = Matrix(nu, nu);
            Cuv[j][d] = Matrix(nu, nv);
            Cvu[j][d] = Matrix(nv, nu);
            Cvv[j][d] = Matrix(nv, nv);
        }

    for (int j = 0; j < n; ++j) {
        const Matrix Rv = sys.elements[j].displacement_volume_rhs();
        for (int k = 0; k < nu; ++k)
            for (int l = 0; l < nv; ++l) Cuv[j][1](k, l) += Rv(k, l);
        const Matrix K = sys.elements[j].velocity_stiffness();
        for (int k = 0; k < nv; ++k)
            for (int l = 0; l < nu; ++l) Cvu[j][1](k, l) -= K(k, l);
    }

    // Interface couplings. At interface i, the minus side is element i-1
    // (its right end), the plus side element i (its left end).
    const detail::InterfaceWeights W = detail::probe_interface_weights(spec);
    enum { V_MINUS, V_PLUS, VX_MINUS, VX_PLUS, M_MINUS, M_PLUS, S_MINUS, S_PLUS };
    for (int i = 1; i < n; ++i) {
        const ElementOperators& EL = sys.elements[i - 1];
        const ElementOperators& ER = sys.elements[i];
        // trace rows and their home blocks: {row, element, is_u_block}
        struct TraceRow {
            std::span<const double> row;
            int elem;
            bool u_block;
        };
        const std::array<TraceRow, 8> traces = {{{EL.trace_v[1], i - 1, false},
                                                 {ER.trace_v[0], i, false},
                                                 {EL.trace_vx[1], i - 1, false},
                                                 {ER.trace_vx[0], i, false},
                                                 {EL.trace_moment[1], i - 1, true},
                                                 {ER.trace_moment[0], i, true},
                                                 {EL.trace_shear[1], i - 1, true},
                                                 {ER.trace_shear[0], i, true}}};

        auto add_coupling = [&](int eq_elem, bool velocity_eq, std::span<const double> test_row,
                                const std::array<double, 8>& weights, double sign) {
            for (int t = 0; t < 8; ++t) {
                const double w = sign * weights[t];
                if (w == 0.0) continue;
                const TraceRow& tr = traces[t];
                const int d = tr.elem - eq_elem + 1;
                Matrix& target = velocity_eq ? (tr.u_block ? Cvu[eq_elem][d] : Cvv[eq_elem][d])
                                             : (tr.u_block ? Cuu[eq_elem][d] : Cuv[eq_elem][d]);
                detail::add_outer(target, test_row, w, tr.row);
            }
        };

        // displacement equation, element i-1, right end: + gS (v- - v*) + gM (vx* - vx-)
        std::array<double, 8> v_minus_minus_star{};
        std::array<double, 8> vxstar_minus_vx_minus{};
        std::array<double, 8> v_plus_minus_star{};
        std::array<double, 8> vxstar_minus_vx_plus{};
        for (int t = 0; t < 8; ++t) {
            v_minus_minus_star[t] = (t == V_MINUS ? 1.0 : 0.0) - W.w[0][t];
            v_plus_minus_star[t] = (t == V_PLUS ? 1.0 : 0.0) - W.w[0][t];
            vxstar_minus_vx_minus[t] = W.w[1][t] - (t == VX_MINUS ? 1.0 : 0.0);
            vxstar_minus_vx_plus[t] = W.w[1][t] - (t == VX_PLUS ? 1.0 : 0.0);
        }
        add_coupling(i - 1, false, EL.test_shear[1], v_minus_minus_star, +1.0);
        add_coupling(i - 1, false, EL.test_moment[1], vxstar_minus_vx_minus, +1.0);
        // displacement equation, element i, left end: - gS (v+ - v*) - gM (vx* - vx+)
        add_coupling(i, false, ER.test_shear[0], v_plus_minus_star, -1.0);
        add_coupling(i, false, ER.test_moment[0], vxstar_minus_vx_plus, -1.0);

        // velocity equation, element i-1, right end: - psi S* + psi_x M*
        add_coupling(i - 1, true, EL.test_psi[1], W.w[3], -1.0);
        add_coupling(i - 1, true, EL.test_psix[1], W.w[2], +1.0);
        // velocity equation, element i, left end: + psi S* - psi_x M*
        add_coupling(i, true, ER.test_psi[0], W.w[3], +1.0);
        add_coupling(i, true, ER.test_psix[0], W.w[2], -1.0);
    }

    // Physical ends.
    for (int side = 0; side < 2; ++side) {
        const bool left_end = (side == 0);
        const int j = left_end ? 0 : n - 1;
        const int e = left_end ? 0 : 1;
        const double outward = left_end ? -1.0 : +1.0;  // bracket orientation
        const ElementOperators& E = sys.elements[j];
        const BoundaryType bc = left_end ? prob.bc_left : prob.bc_right;
        const detail::BoundaryWeights B =
            detail::probe_boundary_weights(left_end ? End::Left : End::Right, bc, spec);

        const std::array<std::span<const double>, 4> traces = {E.trace_v[e], E.trace_vx[e],
                                                               E.trace_moment[e], E.trace_shear[e]};
        const std::array<bool, 4> is_u = {false, false, true, true};

        auto add_coupling = [&](bool velocity_eq, std::span<const double> test_row,
                                const std::array<double, 4>& weights, double sign) {
            for (int t = 0; t < 4; ++t) {
                const double w = sign * weights[t];
                if (w == 0.0) continue;
                Matrix& target = velocity_eq ? (is_u[t] ? Cvu[j][1] : Cvv[j][1])
                                             : (is_u[t] ? Cuu[j][1] : Cuv[j][1]);
                detail::add_outer(target, test_row, w, traces[t]);
            }
        };

        std::array<double, 4> v_minus_star{};
        std::array<double, 4> vxstar_minus_vx{};
        for (int t = 0; t < 4; ++t) {
            v_minus_star[t] = (t == 0 ? 1.0 : 0.0) - B.w[0][t];
            vxstar_minus_vx[t] = B.w[1][t] - (t == 1 ? 1.0 : 0.0);
        }
        add_coupling(false, E.test_shear[e], v_minus_star, outward);
        add_coupling(false, E.test_moment[e], vxstar_minus_vx, outward);
        add_coupling(true, E.test_psi[e], B.w[3], -outward);
        add_coupling(true, E.test_psix[e], B.w[2], outward);
    }

    // Local solves column-by-column, placed into A.
    for (int j = 0; j < n; ++j) {
        const ElementOperators& E = sys.elements[j];
        auto place = [&](const Matrix& C, bool velocity_eq, int col_offset) {
            std::vector<double> col(C.rows());
            for (int c = 0; c < C.cols(); ++c) {
                for (int k = 0; k < C.rows(); ++k) col[k] = C(k, c);
                const std::vector<double> solved =
                    velocity_eq ? lu_solve(E.mass_lu, col) : lu_solve(E.L_lu, col);
                const int row0 = velocity_eq ? sys.v_offset(j) : sys.u_offset(j);
                for (int k = 0; k < C.rows(); ++k) sys.A(row0 + k, col_offset + c) = solved[k];
            }
        };
        for (int d = 0; d < 3; ++d) {
            const int jn = j + d - 1;
            if (jn < 0 || jn >= n) continue;
            place(Cuu[j][d], false, sys.u_offset(jn));
            place(Cuv[j][d], false, sys.v_offset(jn));
            place(Cvu[j][d], true, sys.u_offset(jn));
            place(Cvv[j][d], true, sys.v_offset(jn));
        }
    }

    // Energy matrix: D-weighted bending blocks for u, mass blocks for v.
    for (int j = 0; j < n; ++j) {
        const Matrix Eu = sys.elements[j].energy_block_u();
        for (int k = 0; k < nu; ++k)
            for (int l = 0; l < nu; ++l) sys.H(sys.u_offset(j) + k, sys.u_offset(j) + l) = Eu(k, l);
        for (int k = 0; k < nv; ++k)
            for (int l = 0; l < nv; ++l)
                sys.H(sys.v_offset(j) + k, sys.v_offset(j) + l) = sys.elements[j].mass(k, l);
    }

    return sys;
}

/// Independent assembly oracle: applies the evaluation path (traces ->
/// numerical fluxes -> local solves) to every unit coefficient vector.
/// Desk-scale sizes only.
inline Matrix probe_assembly_oracle(const BeamProblem& prob, const Mesh1D& mesh, int q, int s,
                                    const FluxSpec& spec, int n_quad = -1) {
    SemiDiscreteSystem sys = assemble(prob, mesh, q, s, spec, n_quad);  // reuse element tables only
    const int n = sys.n, size = sys.size();
    Matrix A(size, size);
    DGState state(n, q, s);
    for (int col = 0; col < size; ++col) {
        std::fill(state.y.begin(), state.y.end(), 0.0);
        state.y[col] = 1.0;

        // interface fluxes
        std::vector<InterfaceFlux> face(n + 1);
        for (int i = 1; i < n; ++i) {
            const ElementOperators& EL = sys.elements[i - 1];
            const ElementOperators& ER = sys.elements[i];
            TraceData t;
            t.v_minus = dot(EL.trace_v[1], state.v_coeffs(i - 1));
            t.vx_minus = dot(EL.trace_vx[1], state.v_coeffs(i - 1));
            t.moment_minus = dot(EL.trace_moment[1], state.u_coeffs(i - 1));
            t.shear_minus = dot(EL.trace_shear[1], state.u_coeffs(i - 1));
            t.v_plus = dot(ER.trace_v[0], state.v_coeffs(i));
            t.vx_plus = dot(ER.trace_vx[0], state.v_coeffs(i));
            t.moment_plus = dot(ER.trace_moment[0], state.u_coeffs(i));
            t.shear_plus = dot(ER.trace_shear[0], state.u_coeffs(i));
            face[i] = interface_flux(spec, t);
        }
        {
            const ElementOperators& E0 = sys.elements[0];
            BoundaryTrace t{dot(E0.trace_v[0], state.v_coeffs(0)), dot(E0.trace_vx[0], state.v_coeffs(0)),
                            dot(E0.trace_moment[0], state.u_coeffs(0)),
                            dot(E0.trace_shear[0], state.u_coeffs(0))};
            face[0] = boundary_flux(End::Left, prob.bc_left, spec.eta1, spec.eta2, t);
        }
        {
            const ElementOperators& En = sys.elements[n - 1];
            BoundaryTrace t{dot(En.trace_v[1], state.v_coeffs(n - 1)),
                            dot(En.trace_vx[1], state.v_coeffs(n - 1)),
                            dot(En.trace_moment[1], state.u_coeffs(n - 1)),
                            dot(En.trace_shear[1], state.u_coeffs(n - 1))};
            face[n] = boundary_flux(End::Right, prob.bc_right, spec.eta1, spec.eta2, t);
        }

        for (int j = 0; j < n; ++j) {
            const ElementOperators& E = sys.elements[j];
            DisplacementFaceData dl{dot(E.trace_v[0], state.v_coeffs(j)), face[j].v_star,
                                    dot(E.trace_vx[0], state.v_coeffs(j)), face[j].vx_star};
            DisplacementFaceData dr{dot(E.trace_v[1], state.v_coeffs(j)), face[j + 1].v_star,
                                    dot(E.trace_vx[1], state.v_coeffs(j)), face[j + 1].vx_star};
            const auto ut = local_displacement_solve(E, dl, dr, state.v_coeffs(j));
            MomentFaceData ml{face[j].moment_star, face[j].shear_star};
            MomentFaceData mr{face[j + 1].moment_star, face[j + 1].shear_star};
            const auto vt = local_velocity_solve(E, ml, mr, state.u_coeffs(j));
            for (int k = 0; k <= q; ++k) A(sys.u_offset(j) + k, col) = ut[k];
            for (int k = 0; k <= s; ++k) A(sys.v_offset(j) + k, col) = vt[k];
        }
    }
    return A;
}

}  // namespace ebdg
