#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace ebdg {

/// The four classical beam end conditions.
enum class BoundaryType { SimplySupported, Free, Clamped, Sliding };

/// Coefficients (a1,b1,a2,b2) of the boundary operator pair
///   -+ a1 v_x + b1 (D u_xx) = 0,   a2 v -+ b2 ((D u_xx)_x) = 0
/// (signs flip between the two ends). Each pair is (0,1) or (1,0).
struct BoundaryCoeffs {
    double a1, b1, a2, b2;
};

inline BoundaryCoeffs boundary_coeffs(BoundaryType bc) {
    switch (bc) {
        case BoundaryType::SimplySupported: return {0.0, 1.0, 1.0, 0.0};
        case BoundaryType::Free: return {0.0, 1.0, 0.0, 1.0};
        case BoundaryType::Clamped: return {1.0, 0.0, 1.0, 0.0};
        case BoundaryType::Sliding: return {1.0, 0.0, 0.0, 1.0};
    }
    throw std::invalid_argument("boundary_coeffs: unknown boundary type");
}

inline std::string to_string(BoundaryType bc) {
    switch (bc) {
        case BoundaryType::SimplySupported: return "simply-supported";
        case BoundaryType::Free: return "free";
        case BoundaryType::Clamped: return "clamped";
        case BoundaryType::Sliding: return "sliding";
    }
    return "?";
}

/// Closed-form solution with the derivative evaluators used by error norms
/// (u_xx, u_t) and by forcing construction (u_xxx, u_xxxx, u_tt).
struct ExactSolution {
    std::function<double(double, double)> u;
    std::function<double(double, double)> u_x;
    std::function<double(double, double)> u_xx;
    std::function<double(double, double)> u_xxx;
    std::function<double(double, double)> u_xxxx;
    std::function<double(double, double)> u_t;
    std::function<double(double, double)> u_tt;
};

/// One beam configuration: coefficients, forcing, initial and boundary data.
/// D exposes its first two derivatives separately because the expanded form
/// (D u_xx)_xx = D u_xxxx + 2 D_x u_xxx + D_xx u_xx is used for forcing
/// construction and in tests. Immutable once built; freely shared.
struct BeamProblem {
    double a = 0.0, b = 1.0;
    std::function<double(double)> mu;
    std::function<double(double)> D;
    std::function<double(double)> D_x;
    std::function<double(double)> D_xx;
    std::function<double(double, double)> forcing;  // f(x,t)
    std::function<double(double)> g1;               // u(x,0)
    std::function<double(double)> g2;               // u_t(x,0)
    BoundaryType bc_left = BoundaryType::SimplySupported;
    BoundaryType bc_right = BoundaryType::SimplySupported;
    std::optional<ExactSolution> exact;
};

/// f = mu u_tt + (D u_xx)_xx composed from the exact solution's derivatives.
inline std::function<double(double, double)> manufactured_forcing(const ExactSolution& exact,
                                                                  std::function<double(double)> mu,
                                                                  std::function<double(double)> D,
                                                                  std::function<double(double)> D_x,
                                                                  std::function<double(double)> D_xx) {
    return [=](double x, double t) {
        return mu(x) * exact.u_tt(x, t) + D(x) * exact.u_xxxx(x, t) + 2.0 * D_x(x) * exact.u_xxx(x, t) +
               D_xx(x) * exact.u_xx(x, t);
    };
}

namespace detail {

/// u(x,t) = sin(w x) sin(w^2 t) with w = 0.6*pi, shared by both presets.
inline ExactSolution standing_wave_solution() {
    const double w = 0.6 * std::acos(-1.0);
    ExactSolution e;
    e.u = [w](double x, double t) { return std::sin(w * x) * std::sin(w * w * t); };
    e.u_x = [w](double x, double t) { return w * std::cos(w * x) * std::sin(w * w * t); };
    e.u_xx = [w](double x, double t) { return -w * w * std::sin(w * x) * std::sin(w * w * t); };
    e.u_xxx = [w](double x, double t) { return -w * w * w * std::cos(w * x) * std::sin(w * w * t); };
    e.u_xxxx = [w](double x, double t) { return w * w * w * w * std::sin(w * x) * std::sin(w * w * t); };
    e.u_t = [w](double x, double t) { return w * w * std::sin(w * x) * std::cos(w * w * t); };
    e.u_tt = [w](double x, double t) { return -w * w * w * w * std::sin(w * x) * std::sin(w * w * t); };
    return e;
}

}  // namespace detail

/// u_tt = -u_xxxx on (0,10), simply supported, f = 0; the exact solution is
/// the standing wave sin(0.6 pi x) sin((0.6 pi)^2 t).
inline BeamProblem preset_uniform_beam() {
    BeamProblem p;
    p.a = 0.0;
    p.b = 10.0;
    p.mu = [](double) { return 1.0; };
    p.D = [](double) { return 1.0; };
    p.D_x = [](double) { return 0.0; };
    p.D_xx = [](double) { return 0.0; };
    p.forcing = [](double, double) { return 0.0; };
    p.exact = detail::standing_wave_solution();
    const auto exact = *p.exact;
    p.g1 = [exact](double x) { return exact.u(x, 0.0); };
    p.g2 = [exact](double x) { return exact.u_t(x, 0.0); };
    return p;
}

/// Variable flexural rigidity D(x) = 1 + 0.1 cos(pi x) on (0,10) with the
/// same standing-wave solution; the forcing below is the expanded closed
/// form of mu u_tt + (D u_xx)_xx for that pair.
inline BeamProblem preset_nonuniform_beam() {
    const double pi = std::acos(-1.0);
    const double w = 0.6 * pi;
    BeamProblem p;
    p.a = 0.0;
    p.b = 10.0;
    p.mu = [](double) { return 1.0; };
    p.D = [pi](double x) { return 1.0 + 0.1 * std::cos(pi * x); };
    p.D_x = [pi](double x) { return -0.1 * pi * std::sin(pi * x); };
    p.D_xx = [pi](double x) { return -0.1 * pi * pi * std::cos(pi * x); };
    p.forcing = [pi, w](double x, double t) {
        const double st = std::sin(w * w * t);
        return (0.1 * w * w * w * w + 0.1 * pi * pi * w * w) * std::cos(pi * x) * std::sin(w * x) * st +
               0.2 * pi * w * w * w * std::sin(pi * x) * std::cos(w * x) * st;
    };
    p.exact = detail::standing_wave_solution();
    const auto exact = *p.exact;
    p.g1 = [exact](double x) { return exact.u(x, 0.0); };
    p.g2 = [exact](double x) { return exact.u_t(x, 0.0); };
    return p;
}

/// Preset lookup used by the experiment config ("uniform-beam", "nonuniform-beam").
inline BeamProblem problem_preset(const std::string& name) {
    if (name == "uniform-beam") return preset_uniform_beam();
    if (name == "nonuniform-beam") return preset_nonuniform_beam();
    throw std::invalid_argument("unknown problem preset: " + name);
}

}  // namespace ebdg
