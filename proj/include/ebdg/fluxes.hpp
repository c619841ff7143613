#pragma once

#include <stdexcept>
#include <string>

#include "ebdg/problem.hpp"

namespace ebdg {

/// Interelement flux parameters plus the boundary parameters eta1/eta2.
/// alpha weights the one-sided traces, beta/tau are jump penalties; the
/// scheme conserves energy iff all four penalties vanish and dissipates
/// otherwise. Parameters are global: the same spec applies at every
/// interface.
struct FluxSpec {
    double alpha1 = 0.5, alpha2 = 0.5;
    double beta1 = 0.0, beta2 = 0.0;
    double tau1 = 0.0, tau2 = 0.0;
    double eta1 = 0.0, eta2 = 0.0;

    static FluxSpec central() { return FluxSpec{}; }
    // One-sided pairing with opposite orientation for the two flux pairs
    // (v/shear from plus/minus, v_x/moment from minus/plus). With the
    // conservative eta = 0 end treatment this orientation keeps the optimal
    // rate all the way to the physical boundaries; the same-orientation
    // variants (alpha1 = alpha2) remain selectable as custom parameters.
    static FluxSpec alternating() {
        FluxSpec s;
        s.alpha1 = 0.0;
        s.alpha2 = 1.0;
        return s;
    }
    static FluxSpec upwind() {
        FluxSpec s;
        s.alpha1 = s.alpha2 = s.beta1 = s.beta2 = s.tau1 = s.tau2 = 0.5;
        return s;
    }

    bool interface_conserving() const { return beta1 == 0.0 && beta2 == 0.0 && tau1 == 0.0 && tau2 == 0.0; }
};

inline void validate(const FluxSpec& s) {
    if (!(s.alpha1 >= 0.0 && s.alpha1 <= 1.0 && s.alpha2 >= 0.0 && s.alpha2 <= 1.0))
        throw std::invalid_argument("FluxSpec: alpha parameters must lie in [0,1]");
    if (!(s.beta1 >= 0.0 && s.beta2 >= 0.0 && s.tau1 >= 0.0 && s.tau2 >= 0.0))
        throw std::invalid_argument("FluxSpec: penalty parameters must be nonnegative");
}

/// eta sign conditions guaranteeing a nonincreasing boundary contribution:
/// eta1*(a1^2-b1^2) >= 0 and eta2*(a2^2-b2^2) >= 0.
inline void validate_boundary(const FluxSpec& s, BoundaryType bc) {
    const BoundaryCoeffs c = boundary_coeffs(bc);
    if (s.eta1 * (c.a1 * c.a1 - c.b1 * c.b1) < 0.0 || s.eta2 * (c.a2 * c.a2 - c.b2 * c.b2) < 0.0)
        throw std::invalid_argument("FluxSpec: eta signs violate the stability condition for " + to_string(bc) +
                                    " boundaries");
}

inline FluxSpec flux_preset(const std::string& name) {
    if (name == "central") return FluxSpec::central();
    if (name == "alternating") return FluxSpec::alternating();
    if (name == "upwind") return FluxSpec::upwind();
    throw std::invalid_argument("unknown flux preset: " + name);
}

/// One-sided values at an interface; "moment" is D u_xx and "shear" its x
/// derivative, the physically meaningful boundary quantities of the beam.
struct TraceData {
    double v_minus = 0.0, v_plus = 0.0;
    double vx_minus = 0.0, vx_plus = 0.0;
    double moment_minus = 0.0, moment_plus = 0.0;
    double shear_minus = 0.0, shear_plus = 0.0;
};

/// Interior trace at a physical end.
struct BoundaryTrace {
    double v = 0.0, vx = 0.0, moment = 0.0, shear = 0.0;
};

/// The four single-valued quantities replacing the discontinuous traces.
struct InterfaceFlux {
    double v_star = 0.0;
    double vx_star = 0.0;
    double moment_star = 0.0;
    double shear_star = 0.0;
};

// Written in jump form (equivalent to the alpha-weighted averages) so that
// coincident traces reproduce the shared value exactly.
inline InterfaceFlux interface_flux(const FluxSpec& s, const TraceData& t) {
    const double jump_v = t.v_minus - t.v_plus;
    const double jump_vx = t.vx_minus - t.vx_plus;
    const double jump_moment = t.moment_minus - t.moment_plus;
    const double jump_shear = t.shear_minus - t.shear_plus;
    InterfaceFlux f;
    f.v_star = t.v_plus + s.alpha1 * jump_v + s.beta1 * jump_shear;
    f.shear_star = t.shear_minus - s.alpha1 * jump_shear + s.tau1 * jump_v;
    f.vx_star = t.vx_plus + s.alpha2 * jump_vx - s.beta2 * jump_moment;
    f.moment_star = t.moment_minus - s.alpha2 * jump_moment - s.tau2 * jump_vx;
    return f;
}

/// Net interface contribution to dE^h/dt:
///   -tau1 [[v]]^2 - beta1 [[shear]]^2 - beta2 [[moment]]^2 - tau2 [[v_x]]^2.
/// Zero for every conserving spec, strictly negative otherwise.
inline double interface_energy_flux(const FluxSpec& s, const TraceData& t) {
    const double jv = t.v_minus - t.v_plus;
    const double jvx = t.vx_minus - t.vx_plus;
    const double jm = t.moment_minus - t.moment_plus;
    const double js = t.shear_minus - t.shear_plus;
    return -s.tau1 * jv * jv - s.beta1 * js * js - s.beta2 * jm * jm - s.tau2 * jvx * jvx;
}

enum class End { Left, Right };

/// zeta1/zeta2 are the boundary-operator values of the interior trace; the
/// one-parameter flux family below is consistent with the homogeneous
/// boundary conditions for any eta1, eta2.
inline InterfaceFlux boundary_flux(End end, BoundaryType bc, double eta1, double eta2,
                                   const BoundaryTrace& t) {
    const BoundaryCoeffs c = boundary_coeffs(bc);
    const double sgn = (end == End::Left) ? -1.0 : 1.0;
    const double zeta1 = sgn * c.a1 * t.vx + c.b1 * t.moment;
    const double zeta2 = c.a2 * t.v - sgn * c.b2 * t.shear;
    InterfaceFlux f;
    f.vx_star = t.vx - sgn * (c.a1 - eta1 * c.b1) * zeta1;
    f.moment_star = t.moment - (c.b1 + eta1 * c.a1) * zeta1;
    f.v_star = t.v - (c.a2 - eta2 * c.b2) * zeta2;
    f.shear_star = t.shear + sgn * (c.b2 + eta2 * c.a2) * zeta2;
    return f;
}

/// Contribution of one physical end to dE^h/dt,
///   -(zeta2^2 eta2 (a2^2-b2^2) + zeta1^2 eta1 (a1^2-b1^2));
/// identical at both ends since a1 b1 = a2 b2 = 0 makes the zeta squares
/// end-independent. Nonpositive whenever the eta sign conditions hold.
inline double boundary_energy_rate(BoundaryType bc, double eta1, double eta2, const BoundaryTrace& t) {
    const BoundaryCoeffs c = boundary_coeffs(bc);
    const double z1sq = c.a1 * c.a1 * t.vx * t.vx + c.b1 * c.b1 * t.moment * t.moment;
    const double z2sq = c.a2 * c.a2 * t.v * t.v + c.b2 * c.b2 * t.shear * t.shear;
    return -(z2sq * eta2 * (c.a2 * c.a2 - c.b2 * c.b2) + z1sq * eta1 * (c.a1 * c.a1 - c.b1 * c.b1));
}

}  // namespace ebdg
