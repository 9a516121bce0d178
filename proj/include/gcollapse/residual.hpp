#pragma once

// Residual of a path off the Schrodinger evolution, R = (i d/dt - H)|psi>,
// its split into components along and across |psi>, the energy gauge and the
// action S = integral dt ||R||.

#include <cstddef>
#include <span>
#include <vector>

#include "gcollapse/hilbert.hpp"

namespace gcollapse::residual {

using hilbert::Complex;
using hilbert::Operator;
using hilbert::StateVector;
using hilbert::Vector;

inline constexpr double kPathNormTolerance = 1e-10;
inline constexpr double kQuadratureTolerance = 1e-6;

// A Hamiltonian that is either constant or supplied per time node.
class Hamiltonian {
public:
    Hamiltonian(Operator constant);  // NOLINT(google-explicit-constructor)
    static Hamiltonian per_node(std::vector<Operator> operators);

    const Operator& at(std::size_t node) const;
    std::size_t dim() const { return operators_.front().dim(); }
    bool is_time_dependent() const { return operators_.size() > 1; }
    std::size_t node_count() const { return operators_.size(); }

private:
    explicit Hamiltonian(std::vector<Operator> operators);

    std::vector<Operator> operators_;
};

// Time grid with one normalised state per node.
//
// Paths may carry exact time derivatives of their states; when they do, the
// residual uses them instead of finite differences. energy_gauge always
// returns a path with derivatives so that the gauge phase rate enters exactly.
class EvolutionPath {
public:
    EvolutionPath(std::vector<double> times, std::vector<Vector> states,
                  std::vector<double> gauge_phase = {}, std::vector<Vector> derivatives = {});

    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(states_.front().size()); }
    std::span<const double> times() const { return times_; }
    const Vector& amplitudes(std::size_t node) const { return states_.at(node); }
    StateVector state(std::size_t node) const;
    std::span<const double> gauge_phase() const { return gauge_phase_; }
    bool has_derivatives() const { return !derivatives_.empty(); }

    // d|psi>/dt at a node: stored derivative if present, otherwise a
    // second-order finite difference (central inside, one-sided at the ends,
    // weighted for non-uniform spacing).
    Vector time_derivative(std::size_t node) const;

    // Every `stride`-th node. The node count must be 1 + k*stride so that the
    // end point is kept.
    EvolutionPath subsample(std::size_t stride) const;

private:
    std::vector<double> times_;
    std::vector<Vector> states_;
    std::vector<double> gauge_phase_;
    std::vector<Vector> derivatives_;
};

struct ResidualSample {
    StateVector r;            // R
    StateVector r_perp;       // (1 - |psi><psi|) R
    Complex parallel_coeff;   // <psi|R>
    double norm = 0.0;        // ||R||
    double perp_norm = 0.0;   // ||R_perp||
};

// Residual from a state and its time derivative at one instant.
ResidualSample residual_from(const Vector& state, const Vector& derivative, const Operator& h);

ResidualSample residual_at(const EvolutionPath& path, std::size_t node, const Hamiltonian& h);

std::vector<double> residual_norms(const EvolutionPath& path, const Hamiltonian& h);

struct GaugeResult {
    EvolutionPath path;
    // Largest |Im <psi~|R~>| seen; nonzero values come from norm drift of the
    // input, which a real phase cannot remove.
    double max_norm_drift = 0.0;
    bool unitarity_violated = false;
};

inline constexpr double kUnitarityDriftTolerance = 1e-6;

// Multiplies the path by exp(-i phi(t)) with d(phi)/dt = -Re <psi~|R~>, so that
// <psi|R> vanishes at every node. The phase is accumulated into gauge_phase.
GaugeResult energy_gauge_with_diagnostics(const EvolutionPath& path, const Hamiltonian& h,
                                          double drift_tolerance = kUnitarityDriftTolerance);
EvolutionPath energy_gauge(const EvolutionPath& path, const Hamiltonian& h);

enum class Gauge { as_given, energy };

struct ActionOptions {
    Gauge gauge = Gauge::energy;
    // Compare against the path on every second node and report a Richardson
    // error estimate.
    bool check_convergence = false;
};

struct ActionValue {
    double S = 0.0;
    double error_estimate = 0.0;  // zero unless convergence checking was requested
};

ActionValue action(const EvolutionPath& path, const Hamiltonian& h, const ActionOptions& options = {});

// sqrt(sum r_i^2): residual norm of separable subsystems, each in its own
// energy gauge.
double compose_separable(std::span<const double> subsystem_norms);

// One factor pair I_A (x) I_B of an interaction Hamiltonian sum_k I_A^k (x) I_B^k.
struct InteractionTerm {
    Operator on_a;
    Operator on_b;
};

Operator interaction_operator(std::span<const InteractionTerm> terms, std::size_t dim_a,
                              std::size_t dim_b);

struct InteractingResidual {
    double subsystem_a = 0.0;   // ||R'_A||^2, energy gauge
    double subsystem_b = 0.0;   // ||R'_B||^2, energy gauge
    double interaction = 0.0;   // <psi| V~^2 |psi>
    double mean_interaction = 0.0;  // <V>

    double total() const { return subsystem_a + subsystem_b + interaction; }
};

// Squared residual of the product path |A(t)> (x) |B(t)> per node, assembled
// from the mean-field subsystem residuals and the fluctuation V~ of the
// interaction around its mean field.
std::vector<InteractingResidual> interacting_residual(const EvolutionPath& a,
                                                      const EvolutionPath& b,
                                                      const Hamiltonian& h_a,
                                                      const Hamiltonian& h_b,
                                                      std::span<const InteractionTerm> h_int);

}  // namespace gcollapse::residual
