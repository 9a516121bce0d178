#include <doctest.h>

#include "gcollapse/error.hpp"
#include "gcollapse/hilbert.hpp"
#include "support.hpp"

using namespace gcollapse;
using namespace gcollapse::hilbert;
using testing::random_hermitian;
using testing::random_unit;
using testing::random_vector;

namespace {

StateVector two(Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return StateVector::normalised(v);
}

}  // namespace

TEST_CASE("inner product on basis and mixed states") {
    CHECK(std::abs(inner(two(1, 0), two(1, 0)) - 1.0) == doctest::Approx(0.0));
    CHECK(std::abs(inner(two(1, 0), two(0, 1))) == doctest::Approx(0.0));
    const auto s = two(0.6, Complex(0, 0.8));
    CHECK(std::abs(inner(s, s) - 1.0) < 1e-15);
    // conjugate-linear in the first slot
    const auto t = two(Complex(0, 1), 0);
    CHECK(std::abs(inner(t, two(1, 0)) - Complex(0, -1)) < 1e-15);
}

TEST_CASE("normalised states reject drift; normalise rescales") {
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector::normalised(v), PhysicsError);
    const auto s = StateVector::normalise(v);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.is_normalised());
    CHECK_THROWS_AS(StateVector::normalise(Vector::Zero(3)), PhysicsError);
    CHECK_FALSE(StateVector::unnormalised(v).is_normalised());
}

TEST_CASE("tensor product ordering and norms") {
    const auto e = tensor(two(1, 0), two(0, 1));
    REQUIRE(e.dim() == 4);
    CHECK(std::abs(e[1] - 1.0) < 1e-15);
    CHECK(std::abs(e[0]) + std::abs(e[2]) + std::abs(e[3]) == 0.0);

    const Complex a(0.6, 0.0);
    const Complex b(0.0, 0.8);
    const auto f = tensor(two(a, b), two(1, 0));
    CHECK(std::abs(f[0] - a) < 1e-15);
    CHECK(std::abs(f[1]) == 0.0);
    CHECK(std::abs(f[2] - b) < 1e-15);
    CHECK(std::abs(f[3]) == 0.0);

    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        const auto u = StateVector::unnormalised(random_vector(3, rng));
        const auto v = StateVector::unnormalised(random_vector(4, rng));
        CHECK(tensor(u, v).norm() == doctest::Approx(u.norm() * v.norm()).epsilon(1e-14));
    }
}

TEST_CASE("apply: identity, diagonal, random Hermitian against hand product") {
    Rng rng(12);
    const auto v = StateVector::normalise(random_vector(3, rng));
    CHECK((apply(Operator::identity(3), v).amplitudes() - v.amplitudes()).norm() == 0.0);

    const std::vector<double> d{2.5, -1.0};
    const auto out = apply(Operator::diagonal(d), two(1, 0));
    CHECK(std::abs(out[0] - 2.5) < 1e-15);
    CHECK(std::abs(out[1]) == 0.0);

    const Matrix h = random_hermitian(3, rng);
    const auto hv = apply(Operator::hermitian(h), v);
    for (Eigen::Index i = 0; i < 3; ++i) {
        Complex acc = 0.0;
        for (Eigen::Index j = 0; j < 3; ++j) acc += h(i, j) * v.amplitudes()(j);
        CHECK(std::abs(hv.amplitudes()(i) - acc) < 1e-14);
    }
}

TEST_CASE("hermitian constructor rejects non-Hermitian matrices") {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(Operator::hermitian(m), PhysicsError);
    CHECK_FALSE(Operator::general(m).is_hermitian());
}

TEST_CASE("dimension mismatches raise DimensionError") {
    CHECK_THROWS_AS(inner(two(1, 0), StateVector::basis(3, 0)), DimensionError);
    CHECK_THROWS_AS(apply(Operator::identity(3), two(1, 0)), DimensionError);
}

TEST_CASE("parallel and perpendicular components split a vector") {
    Rng rng(13);
    const auto psi = StateVector::normalise(random_vector(4, rng));
    const auto w = StateVector::unnormalised(random_vector(4, rng));
    const auto par = parallel_component(w, psi);
    const auto perp = perpendicular_component(w, psi);
    CHECK((par.amplitudes() + perp.amplitudes() - w.amplitudes()).norm() < 1e-14);
    CHECK(std::abs(inner(psi, perp)) < 1e-14);
}

TEST_CASE("partial expectation of a product operator") {
    Rng rng(14);
    const Matrix x = random_hermitian(2, rng);
    const Matrix y = random_hermitian(2, rng);
    const Operator xy = tensor(Operator::hermitian(x), Operator::hermitian(y));
    const auto b = StateVector::normalise(random_vector(2, rng));
    const TensorFactorization split{{2, 2}};

    const Operator reduced = partial_expectation(xy, 1, b, split);
    const Complex yb = b.amplitudes().dot(y * b.amplitudes());
    CHECK((reduced.matrix() - yb * x).norm() < 1e-13);

    const Operator id = partial_expectation(Operator::identity(4), 1, b, split);
    CHECK((id.matrix() - Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("partial expectation: both contraction orders give <V>") {
    Rng rng(15);
    for (int k = 0; k < 10; ++k) {
        const Operator v = Operator::hermitian(random_hermitian(6, rng));
        const auto a = StateVector::normalise(random_vector(3, rng));
        const auto b = StateVector::normalise(random_vector(2, rng));
        const TensorFactorization split{{3, 2}};
        const Complex full = expectation(v, tensor(a, b));
        const Complex via_a = expectation(partial_expectation(v, 1, b, split), a);
        const Complex via_b = expectation(partial_expectation(v, 0, a, split), b);
        CHECK(std::abs(via_a - full) < 1e-12);
        CHECK(std::abs(via_b - full) < 1e-12);
    }
}

TEST_CASE("three-factor partial expectation keeps remaining order") {
    Rng rng(16);
    const Matrix a = random_hermitian(2, rng);
    const Matrix b = random_hermitian(3, rng);
    const Matrix c = random_hermitian(2, rng);
    const Operator abc = tensor(tensor(Operator::hermitian(a), Operator::hermitian(b)), Operator::hermitian(c));
    const auto s = StateVector::normalise(random_vector(3, rng));
    const Operator reduced = partial_expectation(abc, 1, s, TensorFactorization{{2, 3, 2}});
    const Complex bs = s.amplitudes().dot(b * s.amplitudes());
    const Operator expected = tensor(Operator::hermitian(a), Operator::hermitian(c));
    CHECK((reduced.matrix() - bs * expected.matrix()).norm() < 1e-13);
}

TEST_CASE("random unit vectors stay normalised through tensor products") {
    Rng rng(17);
    for (int k = 0; k < 10; ++k) {
        const auto u = StateVector::normalised(random_unit(2, rng));
        const auto v = StateVector::normalised(random_unit(5, rng));
        CHECK(tensor(u, v).is_normalised());
    }
}
