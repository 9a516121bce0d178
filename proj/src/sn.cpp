#include "gcollapse/sn.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "gcollapse/error.hpp"

namespace gcollapse::sn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Solves a tridiagonal system in place over the interior nodes 1..n-2;
// sub/diag/super are indexed by node, rhs is overwritten with the solution.
template <typename T>
void thomas(const std::vector<T>& sub, std::vector<T> diag, const std::vector<T>& super,
            std::vector<T>& rhs, std::size_t first, std::size_t last) {
    for (std::size_t i = first + 1; i <= last; ++i) {
        if (std::abs(diag[i - 1]) == 0.0) throw DimensionError("tridiagonal solve: singular system");
        const T w = sub[i] / diag[i - 1];
        diag[i] -= w * super[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (std::abs(diag[last]) == 0.0) throw DimensionError("tridiagonal solve: singular system");
    rhs[last] /= diag[last];
    for (std::size_t i = last; i-- > first;) {
        rhs[i] = (rhs[i] - super[i] * rhs[i + 1]) / diag[i];
    }
}

double external_at(const RadialGrid& g, std::size_t i) {
    return g.external.empty() ? 0.0 : g.external[i];
}

// (H u)_i on interior nodes; zero at the ends.
std::vector<Complex> apply_h(const RadialGrid& g, const std::vector<double>& phi,
                             const std::vector<Complex>& u) {
    const double h = g.spacing();
    const double k = 1.0 / (2.0 * g.mass * h * h);
    std::vector<Complex> out(g.n_points, Complex{});
    for (std::size_t i = 1; i + 1 < g.n_points; ++i) {
        out[i] = -k * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + (external_at(g, i) + g.mass * phi[i]) * u[i];
    }
    return out;
}

struct Energies {
    double kinetic = 0.0;
    double external = 0.0;
    double self = 0.0;  // <m Phi>
    double norm = 0.0;
};

Energies energies(const RadialGrid& g, const std::vector<double>& phi) {
    const double h = g.spacing();
    const double k = 1.0 / (2.0 * g.mass * h * h);
    Energies e;
    for (std::size_t i = 1; i + 1 < g.n_points; ++i) {
        const Complex lap = g.u[i + 1] - 2.0 * g.u[i] + g.u[i - 1];
        const double w = std::norm(g.u[i]);
        e.kinetic += -k * std::real(std::conj(g.u[i]) * lap);
        e.external += external_at(g, i) * w;
        e.self += g.mass * phi[i] * w;
        e.norm += w;
    }
    const double scale = 4.0 * kPi * h;
    e.kinetic *= scale;
    e.external *= scale;
    e.self *= scale;
    e.norm *= scale;
    return e;
}

double residual_with(const RadialGrid& g, const std::vector<double>& phi, double mu) {
    const std::vector<Complex> hu = apply_h(g, phi, g.u);
    double acc = 0.0;
    double norm = 0.0;
    for (std::size_t i = 1; i + 1 < g.n_points; ++i) {
        acc += std::norm(hu[i] - mu * g.u[i]);
        norm += std::norm(g.u[i]);
    }
    return std::sqrt(acc / norm);
}

std::vector<double> poisson_for(const RadialGrid& g, const std::vector<Complex>& u) {
    const std::size_t n = g.n_points;
    const double h = g.spacing();
    double norm = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) norm += std::norm(u[i]);
    norm *= 4.0 * kPi * h;

    std::vector<double> w(n, 0.0);
    if (g.G == 0.0 || norm == 0.0) return w;
    std::vector<double> sub(n, 1.0), diag(n, -2.0), super(n, 1.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        w[i] = h * h * 4.0 * kPi * g.G * g.mass * std::norm(u[i]) / g.r(i);
    }
    w[n - 1] = -g.G * g.mass * norm;
    w[n - 2] -= w[n - 1];  // move the known boundary value to the right-hand side
    thomas(sub, diag, super, w, 1, n - 2);
    w[0] = 0.0;

    std::vector<double> phi(n);
    for (std::size_t i = 1; i < n; ++i) phi[i] = w[i] / g.r(i);
    phi[n - 1] = -g.G * g.mass * norm / g.r_max;
    phi[0] = (4.0 * phi[1] - phi[2]) / 3.0;
    return phi;
}

}  // namespace

RadialGrid RadialGrid::make(double r_max, std::size_t n_points, double mass, double G) {
    RadialGrid g;
    g.r_max = r_max;
    g.n_points = n_points;
    g.mass = mass;
    g.G = G;
    g.u.assign(n_points, Complex{});
    g.validate();
    return g;
}

void RadialGrid::validate() const {
    if (n_points < 5 || !(r_max > 0.0) || !std::isfinite(r_max)) {
        throw DimensionError("radial grid: need r_max > 0 and at least 5 points");
    }
    if (u.size() != n_points) throw DimensionError("radial grid: wave length differs from n_points");
    if (!external.empty() && external.size() != n_points) {
        throw DimensionError("radial grid: external potential length differs from n_points");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) throw PhysicsError("radial grid: mass must be > 0");
    if (!std::isfinite(G)) throw PhysicsError("radial grid: G must be finite");
}

double RadialGrid::norm() const {
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < n_points; ++i) acc += std::norm(u[i]);
    return 4.0 * kPi * spacing() * acc;
}

void RadialGrid::normalise() {
    const double n = norm();
    if (!(n > 0.0)) throw PhysicsError("radial grid: cannot normalise a zero wave");
    const double s = 1.0 / std::sqrt(n);
    for (auto& v : u) v *= s;
    u.front() = 0.0;
    u.back() = 0.0;
}

std::vector<double> RadialGrid::probability_density() const {
    std::vector<double> p(n_points, 0.0);
    const double h = spacing();
    for (std::size_t i = 1; i < n_points; ++i) p[i] = std::norm(u[i] / r(i));
    p[0] = std::norm((4.0 * u[1] - u[2]) / (2.0 * h));
    return p;
}

double RadialGrid::mean_r2() const {
    double acc = 0.0;
    double n = 0.0;
    for (std::size_t i = 1; i + 1 < n_points; ++i) {
        const double w = std::norm(u[i]);
        acc += r(i) * r(i) * w;
        n += w;
    }
    return acc / n;
}

void set_gaussian(RadialGrid& grid, double sigma) {
    if (!(sigma > 0.0)) throw PhysicsError("set_gaussian: width must be > 0");
    grid.u.assign(grid.n_points, Complex{});
    for (std::size_t i = 1; i + 1 < grid.n_points; ++i) {
        const double r = grid.r(i);
        grid.u[i] = r * std::exp(-r * r / (4.0 * sigma * sigma));
    }
    grid.normalise();
}

void set_harmonic(RadialGrid& grid, double omega) {
    grid.external.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double r = grid.r(i);
        grid.external[i] = 0.5 * grid.mass * omega * omega * r * r;
    }
}

SNPotential solve_poisson(const RadialGrid& grid) {
    grid.validate();
    return {poisson_for(grid, grid.u)};
}

double poisson_residual(const RadialGrid& grid, const SNPotential& potential) {
    const double h = grid.spacing();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.n_points; ++i) {
        const double w_prev = potential.phi[i - 1] * grid.r(i - 1);
        const double w = potential.phi[i] * grid.r(i);
        const double w_next = potential.phi[i + 1] * grid.r(i + 1);
        const double source = 4.0 * kPi * grid.G * grid.mass * std::norm(grid.u[i]) / grid.r(i);
        worst = std::max(worst, std::abs((w_prev - 2.0 * w + w_next) / (h * h) - source));
    }
    return worst;
}

double chemical_potential(const RadialGrid& grid) {
    const Energies e = energies(grid, poisson_for(grid, grid.u));
    return (e.kinetic + e.external + e.self) / e.norm;
}

double sn_energy(const RadialGrid& grid) {
    const Energies e = energies(grid, poisson_for(grid, grid.u));
    return (e.kinetic + e.external + 0.5 * e.self) / e.norm;
}

double stationary_residual(const RadialGrid& grid) {
    const std::vector<double> phi = poisson_for(grid, grid.u);
    const Energies e = energies(grid, phi);
    return residual_with(grid, phi, (e.kinetic + e.external + e.self) / e.norm);
}

RadialGrid evolve_real(const RadialGrid& grid, double dt, std::size_t steps,
                       const EvolveOptions& options) {
    grid.validate();
    if (!(dt > 0.0)) throw PhysicsError("evolve_real: dt must be > 0");
    RadialGrid g = grid;
    const std::size_t n = g.n_points;
    const double h = g.spacing();
    const double k = 1.0 / (2.0 * g.mass * h * h);
    const Complex half = 0.5 * kI * dt;
    std::vector<Complex> sub(n, -half * k), super(n, -half * k), diag(n), rhs(n);

    auto solve_step = [&](const std::vector<double>& phi) {
        const std::vector<Complex> hu = apply_h(g, phi, g.u);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i] = 1.0 + half * (2.0 * k + external_at(g, i) + g.mass * phi[i]);
            rhs[i] = g.u[i] - half * hu[i];
        }
        thomas(sub, diag, super, rhs, 1, n - 2);
        rhs[0] = 0.0;
        rhs[n - 1] = 0.0;
        return rhs;
    };

    double norm = g.norm();
    for (std::size_t step = 0; step < steps; ++step) {
        std::vector<Complex> next = solve_step(poisson_for(g, g.u));
        for (int it = 0; it < options.self_consistent_iterations; ++it) {
            std::vector<Complex> mid(n);
            for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (g.u[i] + next[i]);
            next = solve_step(poisson_for(g, mid));
        }
        g.u = std::move(next);
        const double updated = g.norm();
        if (std::abs(updated - norm) > options.max_step_drift * norm || !std::isfinite(updated)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "evolve_real: norm drift " << std::abs(updated - norm) / norm << " at step " << step
                << " exceeds " << options.max_step_drift;
            throw ConvergenceError(msg.str());
        }
        norm = updated;
    }
    return g;
}

GroundState ground_state(const RadialGrid& grid_template, const GroundStateOptions& options) {
    grid_template.validate();
    const double m = grid_template.mass;
    const double G = grid_template.G;
    if (!(G > 0.0)) {
        throw ConvergenceError("ground_state: no bound state without attractive self-gravity (G <= 0)");
    }
    const double length = 1.0 / (G * m * m * m);
    const double dtau = options.dtau > 0.0 ? options.dtau : 1.0 / (G * G * std::pow(m, 5));
    const double width = options.initial_width > 0.0 ? options.initial_width
                                                     : std::min(2.0 * length, grid_template.r_max / 10.0);

    RadialGrid g = grid_template;
    set_gaussian(g, width);
    const std::size_t n = g.n_points;
    const double h = g.spacing();
    const double k = 1.0 / (2.0 * m * h * h);
    std::vector<double> sub(n, -dtau * k), super(n, -dtau * k), diag(n);

    GroundState out;
    std::vector<double> phi = poisson_for(g, g.u);
    Energies e = energies(g, phi);
    double energy = (e.kinetic + e.external + 0.5 * e.self) / e.norm;
    out.energy_history.push_back(energy);

    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        // Real arithmetic suffices: the relaxed wave stays real.
        std::vector<double> rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i] = 1.0 + dtau * (2.0 * k + external_at(g, i) + m * phi[i]);
            rhs[i] = g.u[i].real();
        }
        thomas(sub, diag, super, rhs, 1, n - 2);
        for (std::size_t i = 1; i + 1 < n; ++i) g.u[i] = rhs[i];
        g.normalise();

        phi = poisson_for(g, g.u);
        e = energies(g, phi);
        const double next = (e.kinetic + e.external + 0.5 * e.self) / e.norm;
        const double mu = (e.kinetic + e.external + e.self) / e.norm;
        residual = residual_with(g, phi, mu);
        const double change = std::abs(next - energy);
        energy = next;
        out.energy_history.push_back(energy);
        if (change <= options.energy_tol * std::abs(energy) && residual <= options.residual_tol) {
            if (!(energy < 0.0)) {
                throw ConvergenceError("ground_state: relaxed state is unbound (E >= 0)");
            }
            out.state = std::move(g);
            out.energy = energy;
            out.chemical_potential = mu;
            out.residual = residual;
            out.iterations = it;
            return out;
        }
    }
    std::ostringstream msg;
    msg.precision(6);
    msg << "ground_state: no convergence after " << options.max_iterations
        << " iterations (last residual " << residual << ", energy " << energy << ")";
    throw ConvergenceError(msg.str());
}

gravity::MassProfile mass_profile(const RadialGrid& grid) {
    grid.validate();
    std::vector<double> rho = grid.probability_density();
    for (double& v : rho) v *= grid.mass;
    return gravity::MassProfile::tabulated(grid.spacing(), std::move(rho));
}

double pd_timescale(const RadialGrid& state, double displacement) {
    if (!(displacement >= 0.0)) throw PhysicsError("pd_timescale: displacement must be >= 0");
    if (displacement == 0.0) return std::numeric_limits<double>::infinity();
    const auto result = gravity::penrose_self_energy(mass_profile(state), displacement, 0.5, state.G);
    return result.pd_decoherence_time;
}

}  // namespace gcollapse::sn
