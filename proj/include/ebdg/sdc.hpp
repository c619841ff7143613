#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebdg/linalg.hpp"
#include "ebdg/operator.hpp"
#include "ebdg/quadrature.hpp"

namespace ebdg {

/// Spectral-deferred-correction configuration: m right Gauss-Radau nodes on
/// (0,1], J correction sweeps, and the interpolatory integration matrix
/// Q(i,k) = integral over (0, node_i] of the k-th degree-(m-1) Lagrange
/// basis polynomial on the m nodes. Row m-1 of Q holds the Radau weights.
struct SDCConfig {
    int m = 5;
    int J = 15;
    RadauNodes radau;
    Matrix Q;
};

inline SDCConfig make_sdc_config(int m = 5, int J = 15) {
    if (m < 1) throw std::invalid_argument("make_sdc_config: m must be >= 1");
    if (J < 0) throw std::invalid_argument("make_sdc_config: J must be >= 0");
    SDCConfig cfg;
    cfg.m = m;
    cfg.J = J;
    cfg.radau = gauss_radau_right(m);
    cfg.Q = Matrix(m, m);
    const QuadratureRule gl = gauss_legendre(m / 2 + 2);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            cfg.Q(i, k) = integrate(gl, 0.0, cfg.radau.nodes[i], [&](double t) {
                double ell = 1.0;
                for (int j = 0; j < m; ++j)
                    if (j != k) ell *= (t - cfg.radau.nodes[j]) / (cfg.radau.nodes[k] - cfg.radau.nodes[j]);
                return ell;
            });
    return cfg;
}

/// Right-hand side of the linear ODE y' = A y + F(t); F may be empty.
struct LinearODE {
    const Matrix* A = nullptr;
    std::function<std::vector<double>(double)> forcing;  // optional

    int size() const { return A->rows(); }
    std::vector<double> rhs(double t, std::span<const double> y) const {
        std::vector<double> r = matvec(*A, y);
        if (forcing) {
            const std::vector<double> f = forcing(t);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += f[i];
        }
        return r;
    }
};

/// Caches one LU factorization of (I - k A) per distinct substep size k;
/// reused across steps and sweeps as long as dt does not change.
class SDCWorkspace {
  public:
    const LUFactors& factors(const Matrix& A, double k) {
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        const int n = A.rows();
        Matrix M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = ((i == j) ? 1.0 : 0.0) - k * A(i, j);
        try {
            auto [pos, inserted] = cache_.emplace(k, lu_factor(std::move(M)));
            return pos->second;
        } catch (const SingularMatrixError&) {
            throw std::runtime_error("sdc_step: singular implicit system for substep size " +
                                     std::to_string(k));
        }
    }

    void clear() { cache_.clear(); }

  private:
    std::map<double, LUFactors> cache_;
};

/// One SDC step from t_n to t_n + dt: backward-Euler prediction over the
/// Radau substeps, then J sweeps of the correction equation; returns the
/// value at the right endpoint.
inline std::vector<double> sdc_step(const LinearODE& ode, const SDCConfig& cfg, SDCWorkspace& ws,
                                    std::span<const double> y_n, double t_n, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("sdc_step: dt must be positive");
    const int m = cfg.m;
    const int len = ode.size();
    const Matrix& A = *ode.A;

    std::vector<double> tau(m), k(m);
    for (int i = 0; i < m; ++i) {
        tau[i] = t_n + cfg.radau.nodes[i] * dt;
        k[i] = (cfg.radau.nodes[i] - (i ? cfg.radau.nodes[i - 1] : 0.0)) * dt;
    }

    // prediction: (I - k_i A) y_i = y_{i-1} + k_i F(tau_i)
    std::vector<std::vector<double>> Y(m);
    {
        std::vector<double> prev(y_n.begin(), y_n.end());
        for (int i = 0; i < m; ++i) {
            std::vector<double> rhs = prev;
            if (ode.forcing) {
                const std::vector<double> f = ode.forcing(tau[i]);
                for (int c = 0; c < len; ++c) rhs[c] += k[i] * f[c];
            }
            Y[i] = lu_solve(ws.factors(A, k[i]), rhs);
            prev = Y[i];
        }
    }

    // node values of the right-hand side for the interpolatory quadrature
    std::vector<std::vector<double>> G(m);
    auto refresh_rhs = [&] {
        for (int i = 0; i < m; ++i) G[i] = ode.rhs(tau[i], Y[i]);
    };
    refresh_rhs();

    std::vector<double> eps(len), eps_prev(len), delta(len);
    for (int sweep = 0; sweep < cfg.J; ++sweep) {
        std::vector<std::vector<double>> Y_next(m);
        std::fill(eps_prev.begin(), eps_prev.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            // eps_i = y_n - Y_i + dt * sum_k Q(i,k) G_k
            for (int c = 0; c < len; ++c) eps[c] = y_n[c] - Y[i][c];
            for (int kk = 0; kk < m; ++kk) {
                const double w = dt * cfg.Q(i, kk);
                const std::vector<double>& g = G[kk];
                for (int c = 0; c < len; ++c) eps[c] += w * g[c];
            }
            // (I - k_i A) delta_i = delta_{i-1} + eps_i - eps_{i-1}
            std::vector<double> rhs(len);
            for (int c = 0; c < len; ++c) rhs[c] = delta[c] + eps[c] - eps_prev[c];
            delta = lu_solve(ws.factors(A, k[i]), rhs);
            std::swap(eps, eps_prev);
            Y_next[i] = Y[i];
            for (int c = 0; c < len; ++c) Y_next[i][c] += delta[c];
        }
        Y = std::move(Y_next);
        if (sweep + 1 < cfg.J) refresh_rhs();
    }
    return Y[m - 1];
}

/// Time history of a linear-system integration.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> energies;  // discrete energy at every recorded time
    std::vector<double> final_state;
};

/// Repeated SDC steps from t0 to T with step dt (the final step is
/// shortened to land on T exactly); records the discrete energy at every
/// step.
inline Trajectory integrate(const SemiDiscreteSystem& sys, const SDCConfig& cfg, std::span<const double> y0,
                            double t0, double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    LinearODE ode;
    ode.A = &sys.A;
    ode.forcing = [&sys](double t) { return sys.load(t); };
    SDCWorkspace ws;

    Trajectory traj;
    std::vector<double> y(y0.begin(), y0.end());
    double t = t0;
    traj.times.push_back(t);
    traj.energies.push_back(discrete_energy(sys, y));
    const double t_end = T;
    while (t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
        double step = dt;
        if (t + step > t_end) step = t_end - t;  // shortened final step
        y = sdc_step(ode, cfg, ws, y, t, step);
        t += step;
        traj.times.push_back(t);
        traj.energies.push_back(discrete_energy(sys, y));
    }
    traj.final_state = std::move(y);
    return traj;
}

}  // namespace ebdg
