#include "gcollapse/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>

#include "gcollapse/error.hpp"

namespace gcollapse::quadrature {

bool is_uniform(std::span<const double> nodes, double rel_tol) {
    if (nodes.size() < 3) return true;
    const double mean = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (std::abs((nodes[i] - nodes[i - 1]) - mean) > rel_tol * std::abs(mean)) return false;
    }
    return true;
}

double integrate_samples(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.size() != values.size()) {
        throw DimensionError("integrate_samples: nodes and values differ in length");
    }
    const std::size_t n = nodes.size();
    if (n < 2) {
        throw DimensionError("integrate_samples: need at least two nodes");
    }
    if (n < 3 || !is_uniform(nodes)) {
        double acc = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            acc += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
        }
        return acc;
    }
    const double h = (nodes.back() - nodes.front()) / static_cast<double>(n - 1);
    const std::size_t intervals = n - 1;
    // Simpson covers an even number of intervals; a 3/8 panel takes the last three if odd.
    const std::size_t simpson_intervals = (intervals % 2 == 0) ? intervals : intervals - 3;
    double acc = 0.0;
    if (simpson_intervals > 0) {
        double s = values[0] + values[simpson_intervals];
        for (std::size_t i = 1; i < simpson_intervals; ++i) {
            s += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
        }
        acc += s * h / 3.0;
    }
    if (simpson_intervals != intervals) {
        const std::size_t k = simpson_intervals;
        acc += 3.0 * h / 8.0 * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
    }
    return acc;
}

std::vector<double> cumulative_trapezoid(std::span<const double> nodes,
                                         std::span<const double> values) {
    if (nodes.size() != values.size()) {
        throw DimensionError("cumulative_trapezoid: nodes and values differ in length");
    }
    std::vector<double> out(nodes.size(), 0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
    }
    return out;
}

namespace {

// QUADPACK G7-K15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b, int depth) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kWgk[static_cast<std::size_t>(j)] * pair;
        if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * pair;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), depth};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& options) {
    if (a == b) return 0.0;
    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod(f, a, b, 0);
    double total = first.value;
    double error = first.error;
    panels.push(first);
    constexpr int kMaxPanels = 4000;
    int count = 1;
    while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total)) &&
           count < kMaxPanels) {
        Panel worst = panels.top();
        if (worst.depth >= options.max_depth) break;
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
        Panel right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }
    if (!std::isfinite(total)) {
        throw ConvergenceError("integrate: non-finite integral");
    }
    return total;
}

double integrate_half_line(const std::function<double(double)>& f,
                           const AdaptiveOptions& options) {
    auto mapped = [&f](double s) {
        if (s >= 1.0) return 0.0;
        const double one_minus = 1.0 - s;
        const double x = s / one_minus;
        return f(x) / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, options);
}

double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                    const std::function<double(double)>& ay,
                    const std::function<double(double)>& by, const AdaptiveOptions& options) {
    AdaptiveOptions inner_options = options;
    inner_options.rel_tol = options.rel_tol * 0.1;
    auto outer = [&](double x) {
        return integrate([&](double y) { return f(x, y); }, ay(x), by(x), inner_options);
    };
    return integrate(outer, ax, bx, options);
}

}  // namespace gcollapse::quadrature
