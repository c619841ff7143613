#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ebdg/fluxes.hpp"

using namespace ebdg;

namespace {

TraceData random_traces(std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    TraceData t;
    t.v_minus = unif(rng);
    t.v_plus = unif(rng);
    t.vx_minus = unif(rng);
    t.vx_plus = unif(rng);
    t.moment_minus = unif(rng);
    t.moment_plus = unif(rng);
    t.shear_minus = unif(rng);
    t.shear_plus = unif(rng);
    return t;
}

BoundaryTrace random_boundary_trace(std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    return BoundaryTrace{unif(rng), unif(rng), unif(rng), unif(rng)};
}

// One side's share of the interface energy bracket; the net interface
// contribution is share(minus side) - share(plus side).
double bracket_share(double v, double vx, double moment, double shear, const InterfaceFlux& f) {
    return shear * (v - f.v_star) - v * f.shear_star + moment * (f.vx_star - vx) + vx * f.moment_star;
}

}  // namespace

TEST_CASE("central flux averages the traces") {
    TraceData t;
    t.v_minus = 1.0;
    t.v_plus = 3.0;
    const InterfaceFlux f = interface_flux(FluxSpec::central(), t);
    CHECK(f.v_star == Catch::Approx(2.0).margin(1e-15));
}

TEST_CASE("alternating flux picks one-sided pairs") {
    TraceData t;
    t.v_minus = 1.0;
    t.v_plus = 4.0;
    t.moment_minus = -2.0;
    t.moment_plus = 5.0;
    t.vx_minus = 0.5;
    t.vx_plus = -0.25;
    t.shear_minus = 1.5;
    t.shear_plus = 2.5;

    FluxSpec same_sided;  // alpha1 = alpha2 = 0
    same_sided.alpha1 = same_sided.alpha2 = 0.0;
    const InterfaceFlux fa = interface_flux(same_sided, t);
    CHECK(fa.v_star == 4.0);        // alpha1 = 0 -> plus side
    CHECK(fa.shear_star == 1.5);    // alpha1 = 0 -> minus side
    CHECK(fa.vx_star == -0.25);     // alpha2 = 0 -> plus side
    CHECK(fa.moment_star == -2.0);  // alpha2 = 0 -> minus side

    // the preset pairs the two groups with opposite orientation
    const InterfaceFlux fb = interface_flux(FluxSpec::alternating(), t);
    CHECK(fb.v_star == 4.0);       // alpha1 = 0 -> plus side
    CHECK(fb.shear_star == 1.5);   // alpha1 = 0 -> minus side
    CHECK(fb.vx_star == 0.5);      // alpha2 = 1 -> minus side
    CHECK(fb.moment_star == 5.0);  // alpha2 = 1 -> plus side
    CHECK(FluxSpec::alternating().interface_conserving());
}

TEST_CASE("upwind flux example") {
    TraceData t;
    t.v_minus = 2.0;
    t.v_plus = 0.0;
    t.shear_minus = 1.0;
    t.shear_plus = -1.0;
    const InterfaceFlux f = interface_flux(FluxSpec::upwind(), t);
    CHECK(f.v_star == Catch::Approx(2.0).margin(1e-15));  // average 1 plus 0.5*jump 2
}

TEST_CASE("interface flux consistency on continuous traces") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::uniform_real_distribution<double> par(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        FluxSpec s;
        s.alpha1 = par(rng);
        s.alpha2 = par(rng);
        s.beta1 = par(rng);
        s.beta2 = par(rng);
        s.tau1 = par(rng);
        s.tau2 = par(rng);
        TraceData t;
        t.v_minus = t.v_plus = unif(rng);
        t.vx_minus = t.vx_plus = unif(rng);
        t.moment_minus = t.moment_plus = unif(rng);
        t.shear_minus = t.shear_plus = unif(rng);
        const InterfaceFlux f = interface_flux(s, t);
        CHECK(f.v_star == t.v_minus);
        CHECK(f.vx_star == t.vx_minus);
        CHECK(f.moment_star == t.moment_minus);
        CHECK(f.shear_star == t.shear_minus);
        CHECK(interface_energy_flux(s, t) == 0.0);
    }
}

TEST_CASE("interface energy flux examples") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial)
        CHECK(interface_energy_flux(FluxSpec::central(), random_traces(rng)) == 0.0);

    TraceData t;
    t.v_minus = 1.0;
    t.v_plus = -1.0;  // jump 2, all other jumps zero
    FluxSpec s = FluxSpec::upwind();
    s.beta1 = s.beta2 = s.tau2 = 0.0;
    CHECK(interface_energy_flux(s, t) == Catch::Approx(-2.0).margin(1e-15));
}

TEST_CASE("interface energy flux equals the directly evaluated bracket") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> par(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        FluxSpec s;
        s.alpha1 = par(rng);
        s.alpha2 = par(rng);
        s.beta1 = par(rng);
        s.beta2 = par(rng);
        s.tau1 = par(rng);
        s.tau2 = par(rng);
        const TraceData t = random_traces(rng);
        const InterfaceFlux f = interface_flux(s, t);
        const double direct = bracket_share(t.v_minus, t.vx_minus, t.moment_minus, t.shear_minus, f) -
                              bracket_share(t.v_plus, t.vx_plus, t.moment_plus, t.shear_plus, f);
        CHECK(interface_energy_flux(s, t) == Catch::Approx(direct).margin(1e-12));
    }
}

TEST_CASE("conservation holds exactly iff all penalties vanish") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> par(0.0, 1.0);
    for (double a1 : {0.0, 0.3, 0.5, 1.0})
        for (double a2 : {0.0, 0.5, 1.0}) {
            FluxSpec s;
            s.alpha1 = a1;
            s.alpha2 = a2;
            CHECK(s.interface_conserving());
            for (int trial = 0; trial < 50; ++trial)
                CHECK(interface_energy_flux(s, random_traces(rng)) == 0.0);
        }
    for (int which = 0; which < 4; ++which) {
        FluxSpec s;
        (which == 0 ? s.beta1 : which == 1 ? s.beta2 : which == 2 ? s.tau1 : s.tau2) = 0.25;
        CHECK_FALSE(s.interface_conserving());
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial)
            worst = std::min(worst, interface_energy_flux(s, random_traces(rng)));
        CHECK(worst < -1e-6);  // generic traces dissipate
    }
}

TEST_CASE("interface energy flux is never positive") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> par(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        FluxSpec s;
        s.alpha1 = par(rng);
        s.alpha2 = par(rng);
        s.beta1 = par(rng);
        s.beta2 = par(rng);
        s.tau1 = par(rng);
        s.tau2 = par(rng);
        validate(s);
        CHECK(interface_energy_flux(s, random_traces(rng)) <= 0.0);
    }
}

TEST_CASE("boundary flux simply supported example") {
    BoundaryTrace t;
    t.v = 2.0;
    t.moment = 3.0;
    const InterfaceFlux f = boundary_flux(End::Left, BoundaryType::SimplySupported, 0.0, 0.0, t);
    CHECK(f.v_star == Catch::Approx(0.0).margin(1e-15));
    CHECK(f.moment_star == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("boundary flux of zero traces is zero") {
    for (BoundaryType bc : {BoundaryType::SimplySupported, BoundaryType::Free, BoundaryType::Clamped,
                            BoundaryType::Sliding})
        for (End end : {End::Left, End::Right}) {
            const InterfaceFlux f = boundary_flux(end, bc, -0.7, 0.9, BoundaryTrace{});
            CHECK(f.v_star == 0.0);
            CHECK(f.vx_star == 0.0);
            CHECK(f.moment_star == 0.0);
            CHECK(f.shear_star == 0.0);
        }
}

TEST_CASE("boundary fluxes satisfy the consistency constraints") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> eta(-1.5, 1.5);
    for (BoundaryType bc : {BoundaryType::SimplySupported, BoundaryType::Free, BoundaryType::Clamped,
                            BoundaryType::Sliding}) {
        const BoundaryCoeffs c = boundary_coeffs(bc);
        for (int trial = 0; trial < 200; ++trial) {
            const double e1 = eta(rng), e2 = eta(rng);
            const BoundaryTrace t = random_boundary_trace(rng);
            const InterfaceFlux fl = boundary_flux(End::Left, bc, e1, e2, t);
            CHECK(std::abs(-c.a1 * fl.vx_star + c.b1 * fl.moment_star) < 1e-12);
            CHECK(std::abs(c.a2 * fl.v_star + c.b2 * fl.shear_star) < 1e-12);
            const InterfaceFlux fr = boundary_flux(End::Right, bc, e1, e2, t);
            CHECK(std::abs(c.a1 * fr.vx_star + c.b1 * fr.moment_star) < 1e-12);
            CHECK(std::abs(c.a2 * fr.v_star - c.b2 * fr.shear_star) < 1e-12);
        }
    }
}

TEST_CASE("boundary energy rate examples") {
    std::mt19937 rng(31);
    for (BoundaryType bc : {BoundaryType::SimplySupported, BoundaryType::Free, BoundaryType::Clamped,
                            BoundaryType::Sliding})
        for (int trial = 0; trial < 20; ++trial)
            CHECK(boundary_energy_rate(bc, 0.0, 0.0, random_boundary_trace(rng)) == 0.0);

    BoundaryTrace t;
    t.v = 2.0;
    CHECK(boundary_energy_rate(BoundaryType::SimplySupported, 0.0, 1.0, t) ==
          Catch::Approx(-4.0).margin(1e-15));
}

TEST_CASE("boundary energy rate matches the direct bracket") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> eta(-1.5, 1.5);
    for (BoundaryType bc : {BoundaryType::SimplySupported, BoundaryType::Free, BoundaryType::Clamped,
                            BoundaryType::Sliding})
        for (int trial = 0; trial < 300; ++trial) {
            const double e1 = eta(rng), e2 = eta(rng);
            const BoundaryTrace t = random_boundary_trace(rng);
            // the right end enters the global bracket with +, the left with -
            const InterfaceFlux fr = boundary_flux(End::Right, bc, e1, e2, t);
            const double right = bracket_share(t.v, t.vx, t.moment, t.shear, fr);
            CHECK(boundary_energy_rate(bc, e1, e2, t) == Catch::Approx(right).margin(1e-12));
            const InterfaceFlux fl = boundary_flux(End::Left, bc, e1, e2, t);
            const double left = -bracket_share(t.v, t.vx, t.moment, t.shear, fl);
            CHECK(boundary_energy_rate(bc, e1, e2, t) == Catch::Approx(left).margin(1e-12));
        }
}

TEST_CASE("flux spec validation") {
    FluxSpec bad;
    bad.alpha1 = 1.5;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = FluxSpec{};
    bad.tau1 = -0.1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    FluxSpec s;  // simply supported wants eta1 <= 0 and eta2 >= 0
    s.eta1 = 0.5;
    CHECK_THROWS_AS(validate_boundary(s, BoundaryType::SimplySupported), std::invalid_argument);
    s.eta1 = -0.5;
    s.eta2 = 0.5;
    CHECK_NOTHROW(validate_boundary(s, BoundaryType::SimplySupported));
    CHECK_THROWS_AS(validate_boundary(s, BoundaryType::Free), std::invalid_argument);
    s.eta2 = -0.5;
    CHECK_NOTHROW(validate_boundary(s, BoundaryType::Free));
    s.eta1 = 0.5;
    CHECK_THROWS_AS(validate_boundary(s, BoundaryType::Clamped), std::invalid_argument);
    s.eta2 = 0.5;
    CHECK_NOTHROW(validate_boundary(s, BoundaryType::Clamped));
    s.eta2 = -0.25;
    CHECK_NOTHROW(validate_boundary(s, BoundaryType::Sliding));
}
