#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "gcollapse/error.hpp"
#include "gcollapse/paths.hpp"
#include "gcollapse/residual.hpp"
#include "support.hpp"

using namespace gcollapse;
using namespace gcollapse::residual;
using hilbert::Matrix;
using testing::random_hermitian;
using testing::random_vector;

namespace {

// Normalised v(t) = c0 + c1 t + c2 t^2 with its exact derivative.
struct Curve {
    Vector c0, c1, c2;
    Vector at(double t) const { return (c0 + t * c1 + t * t * c2).normalized(); }
    Vector rate(double t) const {
        const Vector v = c0 + t * c1 + t * t * c2;
        const Vector dv = c1 + 2.0 * t * c2;
        const double n = v.norm();
        return dv / n - v * (v.dot(dv).real() / (n * n * n));
    }
};

Curve random_curve(Eigen::Index dim, Rng& rng) {
    return {random_vector(dim, rng), random_vector(dim, rng), random_vector(dim, rng)};
}

EvolutionPath sample(const Curve& c, const std::vector<double>& times, bool exact) {
    std::vector<Vector> s;
    std::vector<Vector> d;
    for (double t : times) {
        s.push_back(c.at(t));
        d.push_back(c.rate(t));
    }
    return exact ? EvolutionPath(times, s, {}, d) : EvolutionPath(times, s);
}

}  // namespace

TEST_CASE("eigenstate path has vanishing residual") {
    const double e = 0.8;
    const auto times = paths::uniform_times(0.0, 2.0, 2001);
    std::vector<Vector> s;
    for (double t : times) {
        Vector v(2);
        v << std::polar(1.0, -e * t), 0.0;
        s.push_back(v);
    }
    const EvolutionPath p(times, s);
    const std::vector<double> d{e, -0.3};
    const auto norms = residual_norms(p, Operator::diagonal(d));
    CHECK(*std::max_element(norms.begin(), norms.end()) < kQuadratureTolerance);
    CHECK(action(p, Operator::diagonal(d), {Gauge::as_given, false}).S < kQuadratureTolerance);
}

TEST_CASE("frozen excited state: ||R|| = E before the gauge") {
    const double e = 1.7;
    Vector up(2);
    up << 0.0, 1.0;
    const EvolutionPath p({0.0, 0.5, 1.0}, {up, up, up});
    const std::vector<double> d{0.0, e};
    const auto r = residual_at(p, 1, Operator::diagonal(d));
    CHECK(r.norm == doctest::Approx(e).epsilon(1e-15));
    // all of R lies along psi, so the gauge removes it
    CHECK(r.perp_norm < 1e-15);
}

TEST_CASE("finite-difference residual converges at second order to the exact-derivative oracle") {
    Rng rng(21);
    const Curve c = random_curve(3, rng);
    const Operator h = Operator::hermitian(random_hermitian(3, rng));
    auto worst = [&](std::size_t nodes) {
        const auto times = paths::uniform_times(0.0, 1.0, nodes);
        const auto fd = residual_norms(sample(c, times, false), h);
        const auto exact = residual_norms(sample(c, times, true), h);
        double w = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) w = std::max(w, std::abs(fd[i] - exact[i]));
        return w;
    };
    const double coarse = worst(201);
    const double fine = worst(401);
    CHECK(fine < 1e-3);
    CHECK(std::log2(coarse / fine) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("energy gauge leaves a path with <psi|R> = 0 unchanged") {
    // Rotation between two stationary basis states under H = 0: R is orthogonal to psi.
    const auto times = paths::uniform_times(0.0, 1.0, 101);
    std::vector<Vector> s;
    for (double t : times) {
        Vector v(2);
        v << std::cos(t), std::sin(t);
        s.push_back(v);
    }
    const EvolutionPath p(times, s);
    const EvolutionPath g = energy_gauge(p, Operator::zero(2));
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK((g.amplitudes(i) - p.amplitudes(i)).norm() < 1e-12);
    }
}

TEST_CASE("energy gauge removes a global phase drift") {
    const double omega = 0.9;
    const auto times = paths::uniform_times(0.0, 1.0, 1001);
    std::vector<Vector> s;
    for (double t : times) {
        Vector v(2);
        v << std::polar(1.0, omega * t), 0.0;
        s.push_back(v);
    }
    const EvolutionPath p(times, s);
    const Operator h = Operator::zero(2);
    const auto before = residual_norms(p, h);
    const auto after = residual_norms(energy_gauge(p, h), h);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(before[i] == doctest::Approx(omega).epsilon(1e-6));
        CHECK(after[i] < 1e-6);
    }
}

TEST_CASE("energy gauge is the minimum over phase choices") {
    Rng rng(22);
    const Curve c = random_curve(3, rng);
    const Operator h = Operator::hermitian(random_hermitian(3, rng));
    const auto times = paths::uniform_times(0.0, 1.0, 11);
    const EvolutionPath p = sample(c, times, true);
    const auto gauged = residual_norms(energy_gauge(p, h), h);
    for (int k = 0; k < 100; ++k) {
        // Multiply by exp(-i phi(t)); only the rate phi' enters the residual.
        const double rate = 10.0 * (rng.uniform() - 0.5);
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        const std::size_t n = static_cast<std::size_t>(rng.uniform() * 11) % 11;
        const Complex f = std::polar(1.0, -phase);
        const Vector psi = f * p.amplitudes(n);
        const Vector dpsi = f * (p.time_derivative(n) - Complex(0, rate) * p.amplitudes(n));
        CHECK(residual_from(psi, dpsi, h).norm >= gauged[n] - 1e-12);
    }
}

TEST_CASE("gauge reports unitarity violation for norm-drifting input") {
    const auto times = paths::uniform_times(0.0, 1.0, 11);
    std::vector<Vector> s;
    std::vector<Vector> d;
    for (double t : times) {
        Vector v(1);
        v << 1.0;
        Vector dv(1);
        dv << 0.5 * t;  // claims a growing norm
        s.push_back(v);
        d.push_back(dv);
    }
    const auto g = energy_gauge_with_diagnostics(EvolutionPath(times, s, {}, d), Operator::zero(1));
    CHECK(g.unitarity_violated);
    CHECK(g.max_norm_drift == doctest::Approx(0.5));
}

TEST_CASE("action: Schrodinger solution vs quarter rotation") {
    Rng rng(23);
    const Operator h = Operator::hermitian(random_hermitian(3, rng));
    const auto psi0 = StateVector::normalise(random_vector(3, rng));
    const auto times = paths::uniform_times(0.0, 1.0, 2001);
    CHECK(action(paths::schrodinger_path(psi0, h, times), h).S < kQuadratureTolerance);

    // cos theta |1> + sin theta |2>, theta from pi/4 to pi/2: S = pi/4.
    const auto rot_times = paths::uniform_times(0.0, 1.0, 2001);
    std::vector<Vector> s;
    for (double t : rot_times) {
        const double th = std::numbers::pi / 4.0 * (1.0 + t);
        Vector v(2);
        v << std::cos(th), std::sin(th);
        s.push_back(v);
    }
    const auto value = action(EvolutionPath(rot_times, s), Operator::zero(2), {Gauge::energy, true});
    CHECK(value.S == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-6));
    CHECK(value.error_estimate < 1e-6);
}

TEST_CASE("Hamiltonian and path shape checks") {
    const auto times = paths::uniform_times(0.0, 1.0, 5);
    std::vector<Vector> s(5, Vector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0)));
    const EvolutionPath p(times, s);
    CHECK_THROWS_AS(residual_norms(p, Operator::zero(3)), DimensionError);
    CHECK_THROWS_AS(residual_norms(p, Hamiltonian::per_node({Operator::zero(2), Operator::zero(2)})),
                    DimensionError);
    CHECK_THROWS_AS(EvolutionPath({0.0, 1.0}, {s[0], s[0]}), DimensionError);
    CHECK_THROWS_AS(EvolutionPath({0.0, 1.0, 0.5}, {s[0], s[0], s[0]}), DimensionError);
    std::vector<Vector> bad = s;
    bad[2] *= 2.0;
    CHECK_THROWS_AS(EvolutionPath(times, bad), PhysicsError);
}

TEST_CASE("subsample keeps every other node") {
    const auto times = paths::uniform_times(0.0, 1.0, 9);
    std::vector<Vector> s(9, Vector::Constant(1, Complex(1.0, 0.0)));
    const EvolutionPath p(times, s);
    const EvolutionPath q = p.subsample(2);
    REQUIRE(q.size() == 5);
    CHECK(q.times()[4] == 1.0);
    CHECK_THROWS_AS(EvolutionPath(paths::uniform_times(0.0, 1.0, 8), std::vector<Vector>(8, s[0])).subsample(2),
                    DimensionError);
}

TEST_CASE("compose_separable: Pythagorean composition") {
    CHECK(compose_separable(std::vector<double>{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(compose_separable(std::vector<double>(9, 1.0)) == doctest::Approx(3.0));
    CHECK(compose_separable(std::vector<double>{0.7, 0.0}) == doctest::Approx(0.7));
    CHECK_THROWS_AS(compose_separable(std::vector<double>{-1.0}), PhysicsError);
}

TEST_CASE("constant interaction shift contributes nothing") {
    Rng rng(24);
    const auto times = paths::uniform_times(0.0, 1.0, 7);
    const EvolutionPath a = sample(random_curve(2, rng), times, true);
    const EvolutionPath b = sample(random_curve(3, rng), times, true);
    const Operator ha = Operator::hermitian(random_hermitian(2, rng));
    const Operator hb = Operator::hermitian(random_hermitian(3, rng));
    const std::vector<double> c2{2.5, 2.5};
    const std::vector<InteractionTerm> shift{{Operator::diagonal(c2), Operator::identity(3)}};
    const auto with = interacting_residual(a, b, ha, hb, shift);
    const auto without = interacting_residual(a, b, ha, hb, {});
    for (std::size_t n = 0; n < times.size(); ++n) {
        CHECK(with[n].interaction < 1e-24);
        CHECK(with[n].mean_interaction == doctest::Approx(2.5));
        CHECK(with[n].total() == doctest::Approx(without[n].total()).epsilon(1e-12));
    }
}

TEST_CASE("interacting residual against the full product-space residual") {
    Rng rng(25);
    const auto times = paths::uniform_times(0.0, 1.0, 5);
    const Curve ca = random_curve(2, rng);
    const Curve cb = random_curve(2, rng);
    const Matrix ha = random_hermitian(2, rng);
    const Matrix hb = random_hermitian(2, rng);
    const Matrix ia = random_hermitian(2, rng);
    const Matrix ib = random_hermitian(2, rng);
    const std::vector<InteractionTerm> terms{{Operator::hermitian(ia), Operator::hermitian(ib)}};
    const auto got = interacting_residual(sample(ca, times, true), sample(cb, times, true),
                                          Operator::hermitian(ha), Operator::hermitian(hb), terms);
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix full = Eigen::kroneckerProduct(ha, id).eval() + Eigen::kroneckerProduct(id, hb).eval() +
                        Eigen::kroneckerProduct(ia, ib).eval();
    for (std::size_t n = 0; n < times.size(); ++n) {
        const double t = times[n];
        const Vector psi = Eigen::kroneckerProduct(ca.at(t), cb.at(t));
        const Vector dpsi = Eigen::kroneckerProduct(ca.rate(t), cb.at(t)).eval() +
                            Eigen::kroneckerProduct(ca.at(t), cb.rate(t)).eval();
        const Vector r = Complex(0, 1) * dpsi - full * psi;
        const double oracle = r.squaredNorm() - std::norm(psi.dot(r));
        CHECK(got[n].total() == doctest::Approx(oracle).epsilon(1e-10));
    }
}
