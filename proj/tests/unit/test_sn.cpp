#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "gcollapse/error.hpp"
#include "gcollapse/sn.hpp"

using namespace gcollapse;
using namespace gcollapse::sn;

namespace {

RadialGrid gaussian_grid(double r_max, std::size_t n, double mass, double G, double sigma) {
    auto g = RadialGrid::make(r_max, n, mass, G);
    set_gaussian(g, sigma);
    return g;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(RadialGrid::make(1.0, 3, 1.0, 1.0), DimensionError);
    CHECK_THROWS_AS(RadialGrid::make(-1.0, 100, 1.0, 1.0), DimensionError);
    CHECK_THROWS_AS(RadialGrid::make(1.0, 100, 0.0, 1.0), PhysicsError);
    auto g = RadialGrid::make(10.0, 100, 1.0, 1.0);
    CHECK_THROWS_AS(g.normalise(), PhysicsError);
    CHECK_THROWS_AS(set_gaussian(g, 0.0), PhysicsError);
}

TEST_CASE("Gaussian initial state: norm and width") {
    const auto g = gaussian_grid(20.0, 2000, 1.0, 1.0, 1.3);
    CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.rms_width() == doctest::Approx(1.3).epsilon(1e-5));
}

TEST_CASE("Poisson solve against the Gaussian closed form") {
    const double sigma = 1.0;
    const double m = 2.0, G = 0.7;
    const auto g = gaussian_grid(20.0, 2000, m, G, sigma);
    const auto pot = solve_poisson(g);
    double worst = 0.0;
    for (std::size_t i = 1; i < g.n_points; ++i) {
        const double r = g.r(i);
        const double exact = -G * m * std::erf(r / (std::sqrt(2.0) * sigma)) / r;
        worst = std::max(worst, std::abs(pot.phi[i] - exact) / (G * m));
    }
    CHECK(worst < 1e-5);
    CHECK(poisson_residual(g, pot) < 1e-8);
    CHECK(pot.phi.back() * g.r_max == doctest::Approx(-G * m).epsilon(1e-12));

    // Linear in the particle mass.
    auto heavy = g;
    heavy.mass = 2.0 * m;
    const auto pot2 = solve_poisson(heavy);
    for (std::size_t i : {1u, 200u, 1000u, 1999u}) CHECK(pot2.phi[i] == doctest::Approx(2.0 * pot.phi[i]).epsilon(1e-12));
}

TEST_CASE("free Gaussian spreads at the textbook rate") {
    auto g = gaussian_grid(20.0, 1000, 1.0, 0.0, 1.0);
    const double s0 = g.rms_width();
    const double t = 1.0;
    const auto out = evolve_real(g, 0.002, 500);
    const double expected = s0 * std::sqrt(1.0 + (t / (2.0 * s0 * s0)) * (t / (2.0 * s0 * s0)));
    CHECK(out.rms_width() == doctest::Approx(expected).epsilon(5e-3));
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(evolve_real(g, 0.0, 10), PhysicsError);
}

TEST_CASE("harmonic trap: stationary width and breathing") {
    const double omega = 1.0, m = 1.0;
    const double s_eq = std::sqrt(1.0 / (2.0 * m * omega));
    auto still = RadialGrid::make(12.0, 1200, m, 0.0);
    set_gaussian(still, s_eq);
    set_harmonic(still, omega);
    CHECK(stationary_residual(still) < 1e-4);
    CHECK(chemical_potential(still) == doctest::Approx(1.5 * omega).epsilon(1e-4));
    CHECK(evolve_real(still, 0.005, 400).rms_width() == doctest::Approx(s_eq).epsilon(1e-4));

    // sigma^2(t) = s0^2 cos^2 wt + sin^2 wt / (4 m^2 w^2 s0^2)
    auto breathe = RadialGrid::make(12.0, 1200, m, 0.0);
    const double s0 = 0.5;
    set_gaussian(breathe, s0);
    set_harmonic(breathe, omega);
    const double t = 0.6;
    const auto out = evolve_real(breathe, 0.001, 600);
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double expected = std::sqrt(s0 * s0 * c * c + s * s / (4.0 * m * m * omega * omega * s0 * s0));
    CHECK(out.rms_width() == doctest::Approx(expected).epsilon(2e-3));
}

TEST_CASE("self-gravitating ground state") {
    const auto gs = ground_state(RadialGrid::make(30.0, 1500, 1.0, 1.0));
    CHECK(gs.energy < 0.0);
    CHECK(gs.residual < 1e-6);
    CHECK(stationary_residual(gs.state) == doctest::Approx(gs.residual).epsilon(1e-6));
    // Reference values of the m = G = hbar = 1 ground state.
    CHECK(gs.energy == doctest::Approx(-0.05426).epsilon(2e-3));
    CHECK(gs.chemical_potential == doctest::Approx(-0.16276).epsilon(2e-3));
    for (std::size_t i = 1; i < gs.energy_history.size(); ++i) {
        CHECK(gs.energy_history[i] <= gs.energy_history[i - 1] + 1e-12 * std::abs(gs.energy));
    }

    // Static under real-time evolution.
    const auto later = evolve_real(gs.state, 0.02, 200);
    CHECK(later.rms_width() == doctest::Approx(gs.state.rms_width()).epsilon(1e-5));
    CHECK(sn_energy(later) == doctest::Approx(gs.energy).epsilon(1e-5));

    // E scales as G^2 m^5, lengths as 1 / (G m^3).
    const auto other = ground_state(RadialGrid::make(7.5, 1500, 2.0, 0.5));
    CHECK(other.energy == doctest::Approx(8.0 * gs.energy).epsilon(1e-4));
    CHECK(other.state.rms_width() == doctest::Approx(gs.state.rms_width() / 4.0).epsilon(1e-4));
}

TEST_CASE("no bound state without attraction") {
    CHECK_THROWS_AS(ground_state(RadialGrid::make(20.0, 400, 1.0, 0.0)), ConvergenceError);
    CHECK_THROWS_AS(ground_state(RadialGrid::make(20.0, 400, 1.0, -1.0)), ConvergenceError);
}

TEST_CASE("pd timescale of the ground state") {
    const auto gs = ground_state(RadialGrid::make(30.0, 1500, 1.0, 1.0));
    CHECK(std::isinf(pd_timescale(gs.state, 0.0)));
    CHECK_THROWS_AS(pd_timescale(gs.state, -1.0), PhysicsError);
    const double limit = 1.0 / (gs.state.G * mass_profile(gs.state).self_interaction());
    double last = std::numeric_limits<double>::infinity();
    for (double d : {0.5, 2.0, 8.0, 25.0}) {
        const double t = pd_timescale(gs.state, d);
        CHECK(t < last);
        CHECK(t > limit);
        last = t;
    }
    CHECK(mass_profile(gs.state).mass() == doctest::Approx(1.0).epsilon(1e-6));

    // Doubling G at a fixed state halves the time.
    auto stronger = gs.state;
    stronger.G = 2.0;
    CHECK(pd_timescale(stronger, 2.0) == doctest::Approx(pd_timescale(gs.state, 2.0) / 2.0).epsilon(1e-12));
}
