#include "gcollapse/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcollapse/error.hpp"
#include "gcollapse/quadrature.hpp"

namespace gcollapse::gravity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussianSupport = 13.0;  // sigma; e^{-84} relative density beyond

double lerp_table(const std::vector<double>& v, double h, double r) {
    const double x = r / h;
    const auto last = static_cast<double>(v.size() - 1);
    if (x >= last) return v.back();
    const auto i = static_cast<std::size_t>(x);
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
}

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts,
                        double rel_tol) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    quadrature::AdaptiveOptions opts;
    opts.rel_tol = rel_tol;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += quadrature::integrate(f, cuts[i], cuts[i + 1], opts);
    }
    return total;
}

}  // namespace

struct MassProfile::Table {
    double h = 0.0;
    std::vector<double> rho;
    std::vector<double> enclosed;
    std::vector<double> kernel;
    std::vector<double> primitive;  // K(s) on the grid
    double self = 0.0;
};

MassProfile MassProfile::uniform_sphere(double mass, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw PhysicsError("uniform sphere: radius must be > 0 (point sources are not allowed)");
    }
    if (!(mass >= 0.0)) throw PhysicsError("uniform sphere: mass must be >= 0");
    MassProfile p;
    p.kind_ = ProfileKind::uniform_sphere;
    p.mass_ = mass;
    p.scale_ = radius;
    return p;
}

MassProfile MassProfile::gaussian(double mass, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw PhysicsError("gaussian profile: width must be > 0 (point sources are not allowed)");
    }
    if (!(mass >= 0.0)) throw PhysicsError("gaussian profile: mass must be >= 0");
    MassProfile p;
    p.kind_ = ProfileKind::gaussian;
    p.mass_ = mass;
    p.scale_ = sigma;
    return p;
}

MassProfile MassProfile::tabulated(double spacing, std::vector<double> density) {
    if (!(spacing > 0.0) || density.size() < 3) {
        throw DimensionError("tabulated profile: need spacing > 0 and at least 3 samples");
    }
    for (double v : density) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw PhysicsError("tabulated profile: density must be finite and >= 0");
        }
    }
    auto t = std::make_shared<Table>();
    t->h = spacing;
    t->rho = std::move(density);
    const std::size_t n = t->rho.size();
    std::vector<double> r(n), shell(n), radial(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = spacing * static_cast<double>(i);
        shell[i] = 4.0 * kPi * r[i] * r[i] * t->rho[i];
        radial[i] = 4.0 * kPi * r[i] * t->rho[i];
    }
    t->enclosed = quadrature::cumulative_trapezoid(r, shell);
    const std::vector<double> inner = quadrature::cumulative_trapezoid(r, radial);
    const double mass = t->enclosed.back();
    if (!(mass > 0.0)) throw PhysicsError("tabulated profile: total mass must be > 0");
    t->kernel.resize(n);
    t->kernel[0] = inner.back();
    for (std::size_t i = 1; i < n; ++i) {
        t->kernel[i] = t->enclosed[i] / r[i] + (inner.back() - inner[i]);
    }
    std::vector<double> sk(n), rk(n);
    for (std::size_t i = 0; i < n; ++i) {
        sk[i] = r[i] * t->kernel[i];
        rk[i] = shell[i] * t->kernel[i];
    }
    t->primitive = quadrature::cumulative_trapezoid(r, sk);
    t->self = quadrature::cumulative_trapezoid(r, rk).back();

    MassProfile p;
    p.kind_ = ProfileKind::tabulated;
    p.mass_ = mass;
    p.scale_ = r.back();
    p.table_ = std::move(t);
    return p;
}

double MassProfile::support() const {
    switch (kind_) {
        case ProfileKind::uniform_sphere: return scale_;
        case ProfileKind::gaussian: return kGaussianSupport * scale_;
        case ProfileKind::tabulated: return scale_;
    }
    return scale_;
}

double MassProfile::density(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case ProfileKind::uniform_sphere:
            return r <= scale_ ? 3.0 * mass_ / (4.0 * kPi * scale_ * scale_ * scale_) : 0.0;
        case ProfileKind::gaussian: {
            const double s = scale_;
            return mass_ / (std::pow(2.0 * kPi, 1.5) * s * s * s) * std::exp(-r * r / (2.0 * s * s));
        }
        case ProfileKind::tabulated:
            return r >= scale_ ? 0.0 : lerp_table(table_->rho, table_->h, r);
    }
    return 0.0;
}

double MassProfile::enclosed_mass(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case ProfileKind::uniform_sphere: {
            if (r >= scale_) return mass_;
            const double x = r / scale_;
            return mass_ * x * x * x;
        }
        case ProfileKind::gaussian: {
            const double x = r / scale_;
            return mass_ * (std::erf(x / std::numbers::sqrt2) -
                            std::sqrt(2.0 / kPi) * x * std::exp(-0.5 * x * x));
        }
        case ProfileKind::tabulated:
            return r >= scale_ ? mass_ : lerp_table(table_->enclosed, table_->h, r);
    }
    return 0.0;
}

double MassProfile::kernel(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case ProfileKind::uniform_sphere: {
            const double R = scale_;
            if (r >= R) return mass_ / r;
            return mass_ * (3.0 * R * R - r * r) / (2.0 * R * R * R);
        }
        case ProfileKind::gaussian: {
            const double x = r / (std::numbers::sqrt2 * scale_);
            if (x < 1e-6) {
                // erf(x)/x = 2/sqrt(pi) (1 - x^2/3 + ...)
                return mass_ * std::sqrt(2.0 / kPi) / scale_ * (1.0 - x * x / 3.0);
            }
            return mass_ * std::erf(x) / r;
        }
        case ProfileKind::tabulated:
            return r >= scale_ ? mass_ / r : lerp_table(table_->kernel, table_->h, r);
    }
    return 0.0;
}

double MassProfile::kernel_primitive(double s) const {
    s = std::abs(s);
    switch (kind_) {
        case ProfileKind::uniform_sphere: {
            const double R = scale_;
            if (s >= R) return mass_ * (5.0 * R / 8.0 + (s - R));
            return mass_ / (2.0 * R * R * R) * (1.5 * R * R * s * s - 0.25 * s * s * s * s);
        }
        case ProfileKind::gaussian: {
            const double a = 1.0 / (std::numbers::sqrt2 * scale_);
            return mass_ * (s * std::erf(a * s) + std::expm1(-a * a * s * s) / (a * std::sqrt(kPi)));
        }
        case ProfileKind::tabulated:
            if (s >= scale_) return table_->primitive.back() + mass_ * (s - scale_);
            return lerp_table(table_->primitive, table_->h, s);
    }
    return 0.0;
}

double MassProfile::self_interaction() const {
    switch (kind_) {
        case ProfileKind::uniform_sphere: return 1.2 * mass_ * mass_ / scale_;
        case ProfileKind::gaussian: return mass_ * mass_ / (std::sqrt(kPi) * scale_);
        case ProfileKind::tabulated: return table_->self;
    }
    return 0.0;
}

double MassProfile::cross_interaction(double d) const {
    d = std::abs(d);
    if (d == 0.0) return self_interaction();
    if (mass_ == 0.0) return 0.0;
    // 4 pi int r^2 rho(r) <k>_shell dr with the shell average written through K.
    auto integrand = [this, d](double r) {
        return 4.0 * kPi * r * density(r) * (kernel_primitive(r + d) - kernel_primitive(std::abs(r - d))) /
               (2.0 * d);
    };
    const double top = support();
    if (kind_ == ProfileKind::tabulated) {
        const auto& t = *table_;
        std::vector<double> r(t.rho.size()), v(t.rho.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = t.h * static_cast<double>(i);
            v[i] = integrand(r[i]);
        }
        return quadrature::integrate_samples(r, v);
    }
    std::vector<double> cuts{0.0, top};
    const double R = scale_;
    for (double c : {d, R - d, d - R, d + R}) {
        if (c > 0.0 && c < top) cuts.push_back(c);
    }
    return integrate_pieces(integrand, std::move(cuts), 1e-12);
}

double MassProfile::wave_overlap(double d) const {
    d = std::abs(d);
    if (!std::isfinite(d)) return 0.0;
    switch (kind_) {
        case ProfileKind::uniform_sphere: {
            const double R = scale_;
            if (d >= 2.0 * R) return 0.0;
            const double x = d / R;
            return 1.0 - 0.75 * x + x * x * x / 16.0;
        }
        case ProfileKind::gaussian: return std::exp(-d * d / (8.0 * scale_ * scale_));
        case ProfileKind::tabulated: break;
    }
    throw PhysicsError("wave overlap is only defined for analytic profiles");
}

void MassConfiguration::validate() const {
    if (!(total_mass >= 0.0) || !std::isfinite(total_mass)) {
        throw PhysicsError("mass configuration: total mass must be finite and >= 0");
    }
    if (!(smearing_radius > 0.0) || !std::isfinite(smearing_radius)) {
        throw PhysicsError("mass configuration: smearing radius must be > 0 (no point-like sources)");
    }
    if (!(displacement >= 0.0)) {
        throw PhysicsError("mass configuration: displacement must be >= 0");
    }
    if (n_constituents == 0) throw PhysicsError("mass configuration: need at least one constituent");
    if (!(entangled_fraction >= 0.0 && entangled_fraction <= 1.0)) {
        throw PhysicsError("mass configuration: entangled fraction must lie in [0, 1]");
    }
}

MassProfile MassConfiguration::constituent_profile() const {
    validate();
    return profile == Profile::gaussian ? MassProfile::gaussian(constituent_mass(), smearing_radius)
                                        : MassProfile::uniform_sphere(constituent_mass(), smearing_radius);
}

MassProfile MassConfiguration::lump_profile() const {
    validate();
    return profile == Profile::gaussian ? MassProfile::gaussian(total_mass, smearing_radius)
                                        : MassProfile::uniform_sphere(total_mass, smearing_radius);
}

double newtonian_potential(const MassConfiguration& cfg, double r) {
    if (!(r >= 0.0)) throw PhysicsError("newtonian_potential: r must be >= 0");
    return -units::kNewtonG * cfg.lump_profile().kernel(r);
}

Phi12 phi12(const MassConfiguration& cfg) {
    cfg.validate();
    const MassProfile lump = cfg.constituent_profile();
    Phi12 out;
    out.per_constituent = cfg.convention == Phi12Convention::scaling
                              ? units::kNewtonG * lump.mass() / cfg.smearing_radius
                              : 2.0 * units::kNewtonG * lump.kernel(0.0);
    const double overlap = lump.wave_overlap(cfg.displacement);
    out.orthogonality = 1.0 - overlap * overlap;
    out.effective = out.per_constituent * out.orthogonality;
    out.overlapping = cfg.displacement <= 2.0 * cfg.smearing_radius;
    return out;
}

double phase_rate(const MassConfiguration& cfg) {
    return cfg.entangled_fraction * cfg.total_mass * phi12(cfg).effective;
}

CollapseEstimate collapse_time(const MassConfiguration& cfg) {
    CollapseEstimate out;
    out.phi = phi12(cfg);
    out.phase_rate = cfg.entangled_fraction * cfg.total_mass * out.phi.effective;
    if (out.phase_rate > 0.0) {
        out.collapses = true;
        out.tau_natural = 1.0 / out.phase_rate;
        out.tau_seconds = units::natural_to_seconds(out.tau_natural);
    }
    return out;
}

double branch_factor(double weight_first) {
    if (!(weight_first >= 0.0 && weight_first <= 1.0)) {
        throw PhysicsError("branch_factor: branch weight must lie in [0, 1]");
    }
    const double a = std::sqrt(weight_first * (1.0 - weight_first));
    return 0.5 * a * std::sqrt(std::max(0.0, 2.0 - 4.0 * a * a));
}

double required_mass(double target_tau, const MassConfiguration& constituent) {
    if (!(target_tau > 0.0)) throw PhysicsError("required_mass: target time must be > 0");
    const double per_mass = constituent.entangled_fraction * phi12(constituent).effective;
    if (!(per_mass > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (target_tau * per_mass);
}

MassConfiguration electron() {
    MassConfiguration e;
    e.total_mass = units::kElectronMass;
    e.smearing_radius = 1.0 / units::kElectronMass;
    return e;
}

double qubit_estimate(std::uint64_t electrons_per_qubit, double target_tau, QubitScaling scaling,
                      const MassConfiguration& carrier) {
    if (electrons_per_qubit == 0) throw PhysicsError("qubit_estimate: need at least one carrier per qubit");
    if (!(target_tau > 0.0)) throw PhysicsError("qubit_estimate: target time must be > 0");
    // One qubit: its carriers move together, so their phase rates add.
    MassConfiguration qubit = carrier;
    qubit.total_mass = carrier.constituent_mass() * static_cast<double>(electrons_per_qubit);
    qubit.n_constituents = electrons_per_qubit;
    const double rate = phase_rate(qubit);
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    const double linear = 1.0 / (target_tau * rate);
    // Entangled qubits add linearly; independent ones add in quadrature (sqrt n).
    return scaling == QubitScaling::entangled ? linear : linear * linear;
}

double qubit_estimate(std::uint64_t electrons_per_qubit, double target_tau, QubitScaling scaling) {
    return qubit_estimate(electrons_per_qubit, target_tau, scaling, electron());
}

SelfEnergyResult penrose_self_energy(const MassProfile& lump, double displacement,
                                     double weight_first, double newton_g) {
    if (!(displacement >= 0.0)) throw PhysicsError("penrose_self_energy: displacement must be >= 0");
    if (!(weight_first >= 0.0 && weight_first <= 1.0)) {
        throw PhysicsError("penrose_self_energy: branch weight must lie in [0, 1]");
    }
    SelfEnergyResult out;
    if (displacement == 0.0 || lump.mass() == 0.0) return out;
    const double w12 = std::isfinite(displacement) ? lump.cross_interaction(displacement) : 0.0;
    const double e = newton_g * std::max(0.0, lump.self_interaction() - w12);
    if (!std::isfinite(e)) throw PhysicsError("penrose_self_energy: non-finite self-energy");
    out.e_pen = e;
    out.e_var = weight_first * (1.0 - weight_first) * e;
    out.pd_decoherence_time = e > 0.0 ? 1.0 / e : std::numeric_limits<double>::infinity();
    return out;
}

SelfEnergyResult penrose_self_energy(const MassConfiguration& cfg, double weight_first) {
    return penrose_self_energy(cfg.lump_profile(), cfg.displacement, weight_first);
}

double field_energy(const MassProfile& lump, double displacement, double rel_tol,
                    double newton_g) {
    if (!(displacement >= 0.0) || !std::isfinite(displacement)) {
        throw PhysicsError("field_energy: displacement must be finite and >= 0");
    }
    if (displacement == 0.0 || lump.mass() == 0.0) return 0.0;
    const double half = displacement / 2.0;
    // |grad k_1 - grad k_2|^2 at (r, mu) about the midpoint, lumps at z = +-d/2.
    auto density = [&lump, half](double r, double mu) {
        const double rho = r * std::sqrt(std::max(0.0, 1.0 - mu * mu));
        const double z = r * mu;
        const double z1 = z - half, z2 = z + half;
        const double r1 = std::hypot(rho, z1), r2 = std::hypot(rho, z2);
        const double g1 = r1 > 0.0 ? lump.enclosed_mass(r1) / (r1 * r1 * r1) : 0.0;
        const double g2 = r2 > 0.0 ? lump.enclosed_mass(r2) / (r2 * r2 * r2) : 0.0;
        const double dr = -g1 * rho + g2 * rho;
        const double dz = -g1 * z1 + g2 * z2;
        return 2.0 * kPi * r * r * (dr * dr + dz * dz);
    };
    quadrature::AdaptiveOptions inner;
    inner.rel_tol = rel_tol * 0.1;
    auto shell = [&](double r) {
        // Symmetric under z -> -z.
        return 2.0 * quadrature::integrate([&](double mu) { return density(r, mu); }, 0.0, 1.0, inner);
    };
    quadrature::AdaptiveOptions outer;
    outer.rel_tol = rel_tol;
    const double edge = half + lump.support();
    std::vector<double> cuts{0.0, half, edge};
    if (lump.kind() == ProfileKind::uniform_sphere) {
        for (double c : {half - lump.scale(), lump.scale() - half, half + lump.scale()}) {
            if (c > 0.0 && c < edge) cuts.push_back(c);
        }
    }
    double total = integrate_pieces(shell, cuts, rel_tol);
    total += quadrature::integrate_half_line([&](double x) { return shell(edge + edge * x) * edge; }, outer);
    return newton_g / (8.0 * kPi) * total;
}

double penrose_far_field(const MassProfile& lump, double displacement, double newton_g) {
    if (!(displacement > 0.0)) throw PhysicsError("penrose_far_field: displacement must be > 0");
    return newton_g * (lump.self_interaction() - lump.mass() * lump.mass() / displacement);
}

std::vector<PdRow> pd_comparison(const MassConfiguration& cfg, std::span<const double> separations) {
    cfg.validate();
    const MassProfile lump = cfg.lump_profile();
    std::vector<PdRow> rows;
    rows.reserve(separations.size());
    for (double d : separations) {
        MassConfiguration at = cfg;
        at.displacement = d;
        rows.push_back({d, phase_rate(at), penrose_self_energy(lump, d).e_pen});
    }
    return rows;
}

}  // namespace gcollapse::gravity
