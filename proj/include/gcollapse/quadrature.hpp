#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gcollapse::quadrature {

// True if consecutive spacings agree to `rel_tol` of the mean spacing.
bool is_uniform(std::span<const double> nodes, double rel_tol = 1e-9);

// Integral of sampled values. Uniform grids use composite Simpson (with a
// Simpson 3/8 panel at the end when the interval count is odd); non-uniform
// grids fall back to the trapezoid rule. Needs at least two nodes.
double integrate_samples(std::span<const double> nodes, std::span<const double> values);

// Running trapezoid integral, starting from zero at nodes[0].
std::vector<double> cumulative_trapezoid(std::span<const double> nodes,
                                         std::span<const double> values);

struct AdaptiveOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_depth = 40;
};

// Adaptive 15-point Gauss-Kronrod on [a, b] with recursive bisection.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& options = {});

// Integral over [0, inf) via the map x = s / (1 - s).
double integrate_half_line(const std::function<double(double)>& f,
                           const AdaptiveOptions& options = {});

// Iterated 2D integral: outer over [ax, bx], inner over [ay(x), by(x)].
double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                    const std::function<double(double)>& ay,
                    const std::function<double(double)>& by, const AdaptiveOptions& options = {});

}  // namespace gcollapse::quadrature
