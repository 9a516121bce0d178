#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gcollapse/quadrature.hpp"

using namespace gcollapse::quadrature;

namespace {

std::vector<double> grid(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

std::vector<double> sampled(const std::vector<double>& x, double (*f)(double)) {
    std::vector<double> y;
    for (double v : x) y.push_back(f(v));
    return y;
}

}  // namespace

TEST_CASE("Simpson is exact for cubics on even and odd interval counts") {
    auto cubic = [](double x) { return 2.0 * x * x * x - x * x + 3.0; };
    const double exact = 0.5 * 16.0 - 8.0 / 3.0 + 6.0;  // on [0, 2]
    for (std::size_t n : {3u, 4u, 5u, 8u, 101u, 102u}) {
        const auto x = grid(0.0, 2.0, n);
        std::vector<double> y;
        for (double v : x) y.push_back(cubic(v));
        CHECK(integrate_samples(x, y) == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("sampled integration converges at fourth order") {
    const auto coarse = grid(0.0, std::numbers::pi, 41);
    const auto fine = grid(0.0, std::numbers::pi, 81);
    const double e1 = std::abs(integrate_samples(coarse, sampled(coarse, [](double x) { return std::sin(x); })) - 2.0);
    const double e2 = std::abs(integrate_samples(fine, sampled(fine, [](double x) { return std::sin(x); })) - 2.0);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("non-uniform nodes use the trapezoid rule") {
    const std::vector<double> x{0.0, 0.1, 0.5, 1.0};
    CHECK_FALSE(is_uniform(x));
    const std::vector<double> y{0.0, 0.1, 0.5, 1.0};
    CHECK(integrate_samples(x, y) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(is_uniform(grid(0.0, 1.0, 11)));
}

TEST_CASE("cumulative trapezoid ends at the trapezoid total") {
    const auto x = grid(0.0, 1.0, 11);
    const auto y = sampled(x, [](double v) { return v; });
    const auto c = cumulative_trapezoid(x, y);
    REQUIRE(c.size() == x.size());
    CHECK(c.front() == 0.0);
    CHECK(c.back() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c[5] == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("adaptive Gauss-Kronrod on smooth and peaked integrands") {
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    const double peak = integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
    CHECK(peak == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-9));
    CHECK(integrate([](double x) { return x; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("half-line integrals") {
    CHECK(integrate_half_line([](double x) { return std::exp(-x); }) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_half_line([](double x) { return std::exp(-x * x); }) ==
          doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-10));
    CHECK(integrate_half_line([](double x) { return 1.0 / (1.0 + x * x); }) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-9));
}

TEST_CASE("2D integral over a triangle and a disc quadrant") {
    // int_0^1 int_0^x x y dy dx = 1/8
    const double tri = integrate_2d([](double x, double y) { return x * y; }, 0.0, 1.0,
                                    [](double) { return 0.0; }, [](double x) { return x; });
    CHECK(tri == doctest::Approx(0.125).epsilon(1e-12));
    const double quarter = integrate_2d([](double, double) { return 1.0; }, 0.0, 1.0, [](double) { return 0.0; },
                                        [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); });
    CHECK(quarter == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-8));
}
