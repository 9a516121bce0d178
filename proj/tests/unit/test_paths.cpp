#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gcollapse/error.hpp"
#include "gcollapse/paths.hpp"
#include "support.hpp"

using namespace gcollapse;
using namespace gcollapse::paths;
using hilbert::Matrix;
using hilbert::Vector;
using residual::action;
using residual::energy_gauge;
using residual::residual_norms;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

StateVector two(Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return StateVector::normalise(v);
}

}  // namespace

TEST_CASE("schrodinger_path: H = 0 is constant, diagonal H propagates phases") {
    const auto psi0 = two(1.0, 1.0);
    const auto times = uniform_times(0.0, 2.0, 21);
    const auto still = schrodinger_path(psi0, Operator::zero(2), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK((still.amplitudes(i) - psi0.amplitudes()).norm() < 1e-15);
    }
    const std::vector<double> e{0.4, -1.1};
    const auto moving = schrodinger_path(psi0, Operator::diagonal(e), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        CHECK(std::abs(moving.amplitudes(i)(0) - std::polar(1.0, -e[0] * t) / std::sqrt(2.0)) < 1e-14);
        CHECK(std::abs(moving.amplitudes(i)(1) - std::polar(1.0, -e[1] * t) / std::sqrt(2.0)) < 1e-14);
    }
    CHECK(action(schrodinger_path(psi0, Operator::diagonal(e), uniform_times(0.0, 2.0, 2001)),
                 Operator::diagonal(e)).S < residual::kQuadratureTolerance);
}

TEST_CASE("schrodinger_path rejects bad input") {
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(schrodinger_path(StateVector::unnormalised(v), Operator::zero(2), uniform_times(0, 1, 3)),
                    PhysicsError);
    CHECK_THROWS_AS(schrodinger_path(two(1, 0), Operator::zero(3), uniform_times(0, 1, 3)), DimensionError);
}

TEST_CASE("two-branch model: generic amplitudes match the closed forms") {
    TwoBranchConfig cfg;
    cfg.alpha1 = 0.8;
    cfg.alpha2 = 0.6;
    cfg.mass = 1.0;
    cfg.phi1 = -0.01;
    cfg.phi2 = -0.01;
    // hand values: w = 0.48, m |Phi_12| = 0.02
    const double pre = 0.5 * 0.48 * 0.02 * std::sqrt(2.0);
    const double post = 0.5 * 0.48 * 0.02 * std::sqrt(2.0 - 4.0 * 0.48 * 0.48);
    CHECK(two_branch_residual_pre_gauge(cfg) == doctest::Approx(pre).epsilon(1e-14));
    CHECK(two_branch_residual_post_gauge(cfg) == doctest::Approx(post).epsilon(1e-14));

    const auto model = two_branch_model(cfg, 1001);
    const Hamiltonian h(model.hamiltonian);
    for (double r : residual_norms(model.product_path, h)) CHECK(std::abs(r - pre) < 1e-8);
    for (double r : residual_norms(energy_gauge(model.product_path, h), h)) CHECK(std::abs(r - post) < 1e-6);
    // the canonical entangled path is an exact solution
    CHECK(max_of(residual_norms(model.canonical_path, h)) < 1e-8);
}

TEST_CASE("two-branch model: residual vanishes for one branch or no potentials") {
    TwoBranchConfig one;
    one.alpha1 = 1.0;
    one.alpha2 = 0.0;
    one.mass = 1.0;
    one.phi1 = -0.01;
    one.phi2 = -0.02;
    const auto m1 = two_branch_model(one, 501);
    CHECK(max_of(residual_norms(m1.product_path, Hamiltonian(m1.hamiltonian))) < 1e-11);  // finite-difference round-off floor

    TwoBranchConfig flat;
    flat.alpha1 = 0.6;
    flat.alpha2 = Complex(0.0, 0.8);
    flat.mass = 1.0;
    const auto m2 = two_branch_model(flat, 501);
    CHECK(max_of(residual_norms(m2.product_path, Hamiltonian(m2.hamiltonian))) < 1e-12);
}

TEST_CASE("two-branch model: 50 random configurations") {
    Rng rng(31);
    for (int k = 0; k < 50; ++k) {
        const Vector a = testing::random_unit(2, rng);
        TwoBranchConfig cfg;
        cfg.alpha1 = a(0);
        cfg.alpha2 = a(1);
        cfg.mass = 0.5 + rng.uniform();
        cfg.phi1 = -0.05 * rng.uniform();
        cfg.phi2 = -0.05 * rng.uniform();
        const auto model = two_branch_model(cfg, 401);
        const Hamiltonian h(model.hamiltonian);
        const double pre = two_branch_residual_pre_gauge(cfg);
        const double post = two_branch_residual_post_gauge(cfg);
        for (double r : residual_norms(model.product_path, h)) CHECK(std::abs(r - pre) < 1e-8);
        for (double r : residual_norms(energy_gauge(model.product_path, h), h)) CHECK(std::abs(r - post) < 1e-6);
    }
}

TEST_CASE("two-branch config validation") {
    TwoBranchConfig cfg;
    cfg.alpha1 = 0.8;
    cfg.alpha2 = 0.8;
    CHECK_THROWS_AS(cfg.validate(), PhysicsError);
    cfg.alpha2 = 0.6;
    cfg.phi1 = 0.1;
    CHECK_THROWS_AS(cfg.validate(), PhysicsError);
}

TEST_CASE("Penrose phase: linear in duration, collapse regime at order one") {
    TwoBranchConfig cfg;
    cfg.alpha1 = 1.0 / std::sqrt(2.0);
    cfg.alpha2 = 1.0 / std::sqrt(2.0);
    cfg.mass = 2.0;
    cfg.phi1 = -0.1;
    cfg.phi2 = -0.15;
    cfg.duration = 0.0;
    CHECK(penrose_phase(cfg).phase == 0.0);
    cfg.duration = 1.0;
    const double p1 = penrose_phase(cfg).phase;
    cfg.duration = 2.0;
    CHECK(penrose_phase(cfg).phase == doctest::Approx(2.0 * p1));
    cfg.duration = 1.0 / (cfg.mass * 0.25);
    const auto at_one = penrose_phase(cfg);
    CHECK(at_one.order_of_magnitude == doctest::Approx(1.0));
    CHECK(at_one.collapse_regime);
    CHECK(at_one.phase > 0.1);
    cfg.duration *= 0.5;
    CHECK_FALSE(penrose_phase(cfg).collapse_regime);
}

TEST_CASE("rotation schedules: shapes, window and amplitudes") {
    const auto s = RotationSchedule::from_amplitudes(0.6, Complex(0.0, 0.8), ScheduleShape::smoothstep, 0.2, 0.8);
    CHECK(std::cos(s.theta_s) == doctest::Approx(0.6));
    CHECK(s.phi == doctest::Approx(kHalfPi));
    CHECK(s.theta(0.0) == s.theta_s);
    CHECK(s.theta(0.2) == s.theta_s);
    CHECK(s.theta(0.9) == kHalfPi);
    CHECK(s.theta_rate(0.1) == 0.0);
    CHECK(s.theta_rate(0.95) == 0.0);
    for (const auto shape : {ScheduleShape::linear, ScheduleShape::smoothstep, ScheduleShape::sine,
                             ScheduleShape::smootherstep}) {
        const auto r = RotationSchedule::from_amplitudes(0.6, 0.8, shape, 0.0, 1.0);
        double last = r.theta(0.0);
        for (int k = 1; k <= 100; ++k) {
            const double th = r.theta(k / 100.0);
            CHECK(th >= last);
            last = th;
        }
        CHECK(last == doctest::Approx(kHalfPi));
    }
    RotationSchedule bad;
    bad.theta_s = 0.3;
    bad.t_start = 1.0;
    bad.t_end = 1.0;
    CHECK_THROWS_AS(bad.validate(), PhysicsError);
}

TEST_CASE("rotation action: pi/2 - theta_s under several schedules") {
    const double theta_s = std::acos(std::sqrt(0.7));
    const auto times = uniform_times(0.0, 1.0, 2001);
    const std::vector<double> e{0.2, -0.5};
    const Operator h = Operator::diagonal(e);
    const auto psi0 = two(std::sqrt(0.7), std::sqrt(0.3));
    const auto lin = collapse_rotation(psi0, h, 1, ScheduleShape::linear, 0.0, 1.0, times);
    const auto norms = residual_norms(energy_gauge(lin.path, Hamiltonian(h)), Hamiltonian(h));
    for (double r : norms) CHECK(r == doctest::Approx(kHalfPi - theta_s).epsilon(1e-5));
    CHECK(action(lin.path, h).S == doctest::Approx(kHalfPi - theta_s).epsilon(1e-6));
    const auto smooth = collapse_rotation(psi0, h, 1, ScheduleShape::smoothstep, 0.0, 1.0, times);
    CHECK(action(smooth.path, h).S == doctest::Approx(kHalfPi - theta_s).epsilon(1e-6));
}

TEST_CASE("rotation already in the surviving branch costs nothing") {
    const auto times = uniform_times(0.0, 1.0, 101);
    const auto rot = collapse_rotation(two(0.0, 1.0), Operator::zero(2), 1, ScheduleShape::linear, 0.0, 1.0, times);
    CHECK(action(rot.path, Operator::zero(2)).S < 1e-14);
    CHECK_THROWS_AS(collapse_rotation(two(1.0, 0.0), Operator::zero(2), 1, ScheduleShape::linear, 0.0, 1.0, times),
                    PhysicsError);
}

TEST_CASE("rotation only proceeds inside its window") {
    const auto times = uniform_times(0.0, 1.0, 1001);
    const std::vector<double> e{0.2, -0.5};
    const Operator h = Operator::diagonal(e);
    const auto rot = collapse_rotation(two(0.6, 0.8), h, 1, ScheduleShape::sine, 0.4, 0.6, times);
    const auto norms = residual_norms(energy_gauge(rot.path, Hamiltonian(h)), Hamiltonian(h));
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.39 || times[i] > 0.61) CHECK(norms[i] < 1e-6);
    }
}

TEST_CASE("detours off the great circle never shorten the rotation") {
    Rng rng(32);
    const auto times = uniform_times(0.0, 1.0, 1001);
    const double theta_s = 0.4;
    for (int k = 0; k < 20; ++k) {
        const double eps = 0.6 * (rng.uniform() - 0.5);
        const double bumps = 1.0 + std::floor(3.0 * rng.uniform());
        const Complex tilt = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        std::vector<Vector> s;
        for (double t : times) {
            const double th = theta_s + (kHalfPi - theta_s) * t;
            Vector v(3);
            v << std::cos(th), std::sin(th), tilt * eps * std::sin(bumps * std::numbers::pi * t);
            s.push_back(v.normalized());
        }
        CHECK(action(EvolutionPath(times, s), Operator::zero(3)).S >= kHalfPi - theta_s - 1e-6);
    }
}

TEST_CASE("Mach-Zehnder: the Schrodinger path outranks rotate-and-return") {
    Matrix bs(2, 2);
    bs << 0.0, 0.7, 0.7, 0.0;
    const Operator h = Operator::hermitian(bs);
    const auto times = uniform_times(0.0, 1.0, 2001);
    const auto psi0 = two(1.0, 0.0);
    const auto free = schrodinger_path(psi0, h, times);
    const auto other = schrodinger_path(two(0.0, 1.0), h, times);
    const double swing = 0.3;
    std::vector<Vector> s;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double th = swing * std::pow(std::sin(std::numbers::pi * times[i]), 2);
        s.push_back(std::cos(th) * free.amplitudes(i) + std::sin(th) * other.amplitudes(i));
    }
    const EvolutionPath detour(times, s);
    const double s_free = action(free, h).S;
    const double s_detour = action(detour, h).S;
    CHECK(s_free < residual::kQuadratureTolerance);
    CHECK(s_detour >= 2.0 * swing - 1e-5);
    const std::vector<Candidate> menu{{"detour", detour}, {"schrodinger", free}};
    const auto ranked = rank_candidates(menu, h);
    CHECK(ranked.front().name == "schrodinger");
}
