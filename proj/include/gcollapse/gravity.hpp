#pragma once

// Newtonian gravity of smeared, spherically symmetric lumps; collapse-time
// estimates driven by the Penrose phase; and the self-energy measures used by
// decoherence models for comparison.

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "gcollapse/units.hpp"

namespace gcollapse::gravity {

enum class ProfileKind { uniform_sphere, gaussian, tabulated };

// Spherically symmetric mass density. All quantities are G-free: the kernel
// k(r) = int d^3y rho(y) / |x - y| at |x| = r, so Phi = -G k.
class MassProfile {
public:
    static MassProfile uniform_sphere(double mass, double radius);
    static MassProfile gaussian(double mass, double sigma);
    // Density samples on the uniform grid r_i = i * spacing, i >= 0.
    static MassProfile tabulated(double spacing, std::vector<double> density);

    ProfileKind kind() const { return kind_; }
    double mass() const { return mass_; }
    double scale() const { return scale_; }  // R for a sphere, sigma for a Gaussian, r_max for tables
    double support() const;                   // density vanishes (or is < 1e-40 relative) beyond this

    double density(double r) const;
    double enclosed_mass(double r) const;
    double kernel(double r) const;

    // K(s) = int_0^s s' k(s') ds'. The shell average of k(|x - d|) over a
    // sphere |x| = r is (K(r + d) - K(|r - d|)) / (2 r d).
    double kernel_primitive(double s) const;

    // W_self = int d^3x rho k; the self-energy is U_self = (G / 2) W_self.
    double self_interaction() const;

    // W_12(d) = int d^3x rho(x) k(|x - d z|) for two copies at distance d.
    double cross_interaction(double d) const;

    // Overlap int sqrt(rho_1 rho_2) / m of two copies at distance d.
    double wave_overlap(double d) const;

private:
    struct Table;

    ProfileKind kind_ = ProfileKind::uniform_sphere;
    double mass_ = 0.0;
    double scale_ = 1.0;
    std::shared_ptr<const Table> table_;
};

enum class Profile { uniform_sphere, gaussian };

// How |Phi_12| of one constituent lump is evaluated.
//   scaling: G m / R, the maximally-localised estimate Phi_12 ~ (m / m_p)^2 at R = 1/m.
//   profile: 2 |Phi_self(0)| from the smeared profile (3 G m / R for a sphere).
enum class Phi12Convention { scaling, profile };

// Lengths in 1/GeV, masses in GeV.
struct MassConfiguration {
    double total_mass = 0.0;
    double smearing_radius = 1.0;
    double displacement = std::numeric_limits<double>::infinity();
    std::uint64_t n_constituents = 1;
    double entangled_fraction = 1.0;
    Profile profile = Profile::uniform_sphere;
    Phi12Convention convention = Phi12Convention::scaling;

    void validate() const;  // throws PhysicsError
    double constituent_mass() const { return total_mass / static_cast<double>(n_constituents); }
    MassProfile constituent_profile() const;
    MassProfile lump_profile() const;  // the whole configuration as one lump
};

double newtonian_potential(const MassConfiguration& cfg, double r);

struct Phi12 {
    double per_constituent = 0.0;  // |Phi_12| for fully orthogonal branches
    double orthogonality = 1.0;    // 1 - overlap^2 at the configured displacement
    double effective = 0.0;        // per_constituent * orthogonality
    bool overlapping = false;      // displacement <= 2 * smearing_radius
};

Phi12 phi12(const MassConfiguration& cfg);

// Penrose-phase accumulation rate f * M * |Phi_12| (GeV).
double phase_rate(const MassConfiguration& cfg);

struct CollapseEstimate {
    double phase_rate = 0.0;
    double tau_natural = std::numeric_limits<double>::infinity();
    double tau_seconds = std::numeric_limits<double>::infinity();
    bool collapses = false;  // false for massless or fully coherent-free configurations
    Phi12 phi;
};

CollapseEstimate collapse_time(const MassConfiguration& cfg);

// 1/2 |a1 a2| sqrt(2 - 4 |a1 a2|^2) with |a1|^2 = weight_first: the gauged
// two-branch residual per unit m |Phi_12|. 1/4 for equal weights, 0 for one branch.
double branch_factor(double weight_first);

// Total coherent mass (GeV) whose Penrose phase reaches 1 after target_tau
// (1/GeV). Only the template's constituent mass (total_mass / n_constituents),
// radius, displacement, profile and coherent fraction are used.
double required_mass(double target_tau, const MassConfiguration& constituent);

enum class QubitScaling { entangled, product };

// Each qubit displaces `electrons_per_qubit` carriers described by `carrier`.
double qubit_estimate(std::uint64_t electrons_per_qubit, double target_tau, QubitScaling scaling,
                      const MassConfiguration& carrier);
double qubit_estimate(std::uint64_t electrons_per_qubit, double target_tau, QubitScaling scaling);

// Electron smeared over its Compton scale R = 1/m.
MassConfiguration electron();

struct SelfEnergyResult {
    double e_pen = 0.0;
    double e_var = 0.0;
    double pd_decoherence_time = std::numeric_limits<double>::infinity();  // 1/GeV
};

// E_pen = (G/2) int int delta_rho delta_rho / |x - y| = G (W_self - W_12(d)).
// E_var uses the branch-diagonal correlation model, which gives
// |alpha_1|^2 |alpha_2|^2 E_pen.
SelfEnergyResult penrose_self_energy(const MassProfile& lump, double displacement,
                                     double weight_first = 0.5, double newton_g = units::kNewtonG);
SelfEnergyResult penrose_self_energy(const MassConfiguration& cfg, double weight_first = 0.5);

// (1 / (8 pi G)) int d^3x |grad delta_Phi|^2 evaluated directly from the
// fields on an axisymmetric 2D quadrature. Equals E_pen by integration by parts.
double field_energy(const MassProfile& lump, double displacement, double rel_tol = 1e-9,
                    double newton_g = units::kNewtonG);

// 2 U_self - G m^2 / d: the far-field limit of E_pen for disjoint lumps.
double penrose_far_field(const MassProfile& lump, double displacement,
                         double newton_g = units::kNewtonG);

struct PdRow {
    double separation = 0.0;
    double phase_rate = 0.0;
    double e_pen = 0.0;
};

std::vector<PdRow> pd_comparison(const MassConfiguration& cfg, std::span<const double> separations);

}  // namespace gcollapse::gravity
