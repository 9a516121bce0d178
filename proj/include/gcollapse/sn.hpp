#pragma once

// Radially symmetric Schrodinger-Newton solver in code units (hbar = 1; the
// particle mass m and the coupling G are plain numbers). The wave is stored as
// u(r) = r psi(r) on r_i = i h, i = 0..n-1, with u(0) = u(r_max) = 0.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "gcollapse/gravity.hpp"

namespace gcollapse::sn {

using Complex = std::complex<double>;

struct RadialGrid {
    double r_max = 1.0;
    std::size_t n_points = 0;
    double mass = 1.0;
    double G = 0.0;
    std::vector<Complex> u;         // n_points samples of r psi
    std::vector<double> external;   // V(r_i); empty means V = 0

    // Zero wave on [0, r_max] with n_points nodes (>= 5).
    static RadialGrid make(double r_max, std::size_t n_points, double mass, double G);

    void validate() const;  // throws DimensionError / PhysicsError
    double spacing() const { return r_max / static_cast<double>(n_points - 1); }
    double r(std::size_t i) const { return spacing() * static_cast<double>(i); }

    double norm() const;  // 4 pi h sum |u_i|^2
    void normalise();
    std::vector<double> probability_density() const;  // |psi(r_i)|^2
    double mean_r2() const;                           // <r^2> / norm
    double rms_width() const { return std::sqrt(mean_r2() / 3.0); }
};

// psi ~ exp(-r^2 / (4 sigma^2)), so |psi|^2 has standard deviation sigma per axis.
void set_gaussian(RadialGrid& grid, double sigma);

// V(r) = m omega^2 r^2 / 2.
void set_harmonic(RadialGrid& grid, double omega);

struct SNPotential {
    std::vector<double> phi;  // Phi_N(r_i)
};

// Second-order radial Poisson solve for w = r Phi with w(0) = 0 and the
// exterior value w(r_max) = -G m norm.
SNPotential solve_poisson(const RadialGrid& grid);

// Max-norm residual of the discrete Poisson equation for `potential`.
double poisson_residual(const RadialGrid& grid, const SNPotential& potential);

// <H> with the full mean-field potential, and the SN energy functional
// T + V + (1/2) <m Phi>. Both per unit norm.
double chemical_potential(const RadialGrid& grid);
double sn_energy(const RadialGrid& grid);

// || (H - mu) psi || in the grid norm, mu = <H>.
double stationary_residual(const RadialGrid& grid);

struct EvolveOptions {
    int self_consistent_iterations = 0;  // extra midpoint refreshes of Phi_N per step
    double max_step_drift = 1e-6;        // relative norm change per step before aborting
};

// Crank-Nicolson steps with Phi_N refreshed from the pre-step density.
RadialGrid evolve_real(const RadialGrid& grid, double dt, std::size_t steps,
                       const EvolveOptions& options = {});

struct GroundStateOptions {
    double dtau = 0.0;            // 0: 1 / (G^2 m^5)
    double initial_width = 0.0;   // 0: 2 / (G m^3), capped at r_max / 10
    double energy_tol = 1e-10;    // relative energy change per step
    double residual_tol = 1e-8;   // stationary residual
    std::size_t max_iterations = 200000;
};

struct GroundState {
    RadialGrid state;
    double energy = 0.0;
    double chemical_potential = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    std::vector<double> energy_history;
};

// Backward-Euler imaginary-time relaxation with renormalisation each step.
GroundState ground_state(const RadialGrid& grid_template, const GroundStateOptions& options = {});

// Mass density m |psi|^2 as a tabulated profile.
gravity::MassProfile mass_profile(const RadialGrid& grid);

// 1 / E_pen for two copies of the state at the given distance; +inf at 0.
double pd_timescale(const RadialGrid& state, double displacement);

}  // namespace gcollapse::sn
