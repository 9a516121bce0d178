#pragma once

// Candidate evolutions: exact Schrodinger paths, the two-branch product path
// of a mass superposed at two places, and branch rotations that collapse a
// superposition into one branch.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gcollapse/hilbert.hpp"
#include "gcollapse/residual.hpp"

namespace gcollapse::paths {

using hilbert::Complex;
using hilbert::Operator;
using hilbert::StateVector;
using residual::EvolutionPath;
using residual::Hamiltonian;

std::vector<double> uniform_times(double t_start, double t_end, std::size_t nodes);

// psi(t) = exp(-i H (t - t0)) psi0 at every node, via the eigendecomposition of H.
EvolutionPath schrodinger_path(const StateVector& psi0, const Operator& h,
                               std::vector<double> times);

// Mass m superposed at two well-separated places. Potentials are the
// dimensionless Newtonian potentials of each branch at its own location;
// cross terms Phi_1(x_2), Phi_2(x_1) are taken as zero.
struct TwoBranchConfig {
    Complex alpha1{1.0, 0.0};
    Complex alpha2{0.0, 0.0};
    double mass = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double duration = 1.0;

    void validate() const;  // throws PhysicsError
    double phi12() const { return phi1 + phi2; }
};

// Basis order |chi_i>|Phi_j>: (11, 12, 21, 22), matter factor slowest.
struct TwoBranchModel {
    EvolutionPath product_path;    // (a1|chi1> + a2|chi2>)(a1|Phi1> + a2|Phi2>), a_i = alpha_i e^{-i t m Phi_i / 2}
    EvolutionPath canonical_path;  // alpha1 e^{-i t m Phi_1}|11> + alpha2 e^{-i t m Phi_2}|22>
    Operator hamiltonian;          // diag(m Phi_1, 0, 0, m Phi_2)
};

TwoBranchModel two_branch_model(const TwoBranchConfig& cfg, std::vector<double> times);
TwoBranchModel two_branch_model(const TwoBranchConfig& cfg, std::size_t nodes);

// Closed-form residual norms of the product path, before and after the energy gauge.
double two_branch_residual_pre_gauge(const TwoBranchConfig& cfg);
double two_branch_residual_post_gauge(const TwoBranchConfig& cfg);

struct PenrosePhase {
    double phase = 0.0;               // duration * gauged residual norm
    double order_of_magnitude = 0.0;  // duration * m * |Phi_12|
    bool collapse_regime = false;     // order_of_magnitude >= 1
};

PenrosePhase penrose_phase(const TwoBranchConfig& cfg);

enum class ScheduleShape {
    linear,
    smoothstep,    // 3s^2 - 2s^3
    sine,          // (1 - cos(pi s)) / 2
    smootherstep,  // 6s^5 - 15s^4 + 10s^3
};

enum class Branch { first, second };

// theta(t) rises monotonically from theta_s to pi/2 inside [t_start, t_end]
// and is frozen outside it: rotations only happen in the declared
// interaction window.
struct RotationSchedule {
    double theta_s = 0.0;
    double phi = 0.0;
    ScheduleShape shape = ScheduleShape::linear;
    double t_start = 0.0;
    double t_end = 1.0;
    Branch survivor = Branch::second;

    // cos(theta_s) = |alpha_from|, e^{i phi} sin(theta_s) = alpha_to with the
    // global phase chosen so that alpha_from is real and non-negative.
    static RotationSchedule from_amplitudes(Complex alpha1, Complex alpha2, ScheduleShape shape,
                                            double t_start, double t_end,
                                            Branch survivor = Branch::second);

    void validate() const;
    double theta(double t) const;
    double theta_rate(double t) const;
};

// cos(theta(t)) |from(t)> + e^{i phi} sin(theta(t)) |to(t)> on the grid of the
// two base paths, which must be mutually orthogonal Schrodinger solutions.
EvolutionPath rotation_path(const RotationSchedule& schedule, const EvolutionPath& base1,
                            const EvolutionPath& base2);

// Rotation of psi0 into basis state `survivor` on [t_start, t_end], riding
// on the Schrodinger evolution of H, together with the unrotated reference
// evolution of psi0. Throws PhysicsError if psi0 has no weight on `survivor`.
struct CollapseRotation {
    EvolutionPath path;
    EvolutionPath reference;
    RotationSchedule schedule;
};

CollapseRotation collapse_rotation(const StateVector& psi0, const Operator& h, std::size_t survivor,
                                   ScheduleShape shape, double t_start, double t_end,
                                   const std::vector<double>& times);

struct Candidate {
    std::string name;
    EvolutionPath path;
};

struct RankedCandidate {
    std::string name;
    double action = 0.0;
};

// Candidates ordered by increasing energy-gauge action (stable for ties).
std::vector<RankedCandidate> rank_candidates(std::span<const Candidate> candidates,
                                             const Hamiltonian& h);

}  // namespace gcollapse::paths
