#include "gcollapse/paths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gcollapse/error.hpp"

namespace gcollapse::paths {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kOrthogonalityTolerance = 1e-10;

double shape_value(ScheduleShape shape, double s) {
    switch (shape) {
        case ScheduleShape::linear: return s;
        case ScheduleShape::smoothstep: return s * s * (3.0 - 2.0 * s);
        case ScheduleShape::sine: return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
        case ScheduleShape::smootherstep: return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
    }
    return s;
}

double shape_slope(ScheduleShape shape, double s) {
    switch (shape) {
        case ScheduleShape::linear: return 1.0;
        case ScheduleShape::smoothstep: return 6.0 * s * (1.0 - s);
        case ScheduleShape::sine: return 0.5 * std::numbers::pi * std::sin(std::numbers::pi * s);
        case ScheduleShape::smootherstep: return 30.0 * s * s * (s - 1.0) * (s - 1.0);
    }
    return 1.0;
}

}  // namespace

std::vector<double> uniform_times(double t_start, double t_end, std::size_t nodes) {
    if (nodes < 3 || !(t_end > t_start)) {
        throw DimensionError("uniform_times: need >= 3 nodes on a non-empty interval");
    }
    std::vector<double> t(nodes);
    const double h = (t_end - t_start) / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) t[i] = t_start + h * static_cast<double>(i);
    t.back() = t_end;
    return t;
}

EvolutionPath schrodinger_path(const StateVector& psi0, const Operator& h,
                               std::vector<double> times) {
    if (!psi0.is_normalised()) {
        throw PhysicsError("schrodinger_path: initial state must be normalised");
    }
    if (!h.is_hermitian()) {
        throw PhysicsError("schrodinger_path: Hamiltonian must be Hermitian");
    }
    if (h.dim() != psi0.dim()) {
        throw DimensionError("schrodinger_path: Hamiltonian and state dimensions differ");
    }
    Eigen::SelfAdjointEigenSolver<hilbert::Matrix> eig(h.matrix());
    const hilbert::Matrix& vecs = eig.eigenvectors();
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const hilbert::Vector coeffs = vecs.adjoint() * psi0.amplitudes();

    std::vector<hilbert::Vector> states;
    states.reserve(times.size());
    const double t0 = times.empty() ? 0.0 : times.front();
    for (double t : times) {
        hilbert::Vector phased = coeffs;
        for (Eigen::Index k = 0; k < phased.size(); ++k) {
            phased(k) *= std::exp(-kI * vals(k) * (t - t0));
        }
        hilbert::Vector s = vecs * phased;
        s /= s.norm();
        states.push_back(std::move(s));
    }
    return EvolutionPath(std::move(times), std::move(states));
}

void TwoBranchConfig::validate() const {
    const double weight = std::norm(alpha1) + std::norm(alpha2);
    if (std::abs(weight - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "two-branch amplitudes must satisfy |alpha1|^2 + |alpha2|^2 = 1 (got " << weight << ")";
        throw PhysicsError(msg.str());
    }
    if (phi1 > 0.0 || phi2 > 0.0) {
        throw PhysicsError("two-branch potentials must be attractive (<= 0)");
    }
    if (mass < 0.0) throw PhysicsError("two-branch mass must be >= 0");
    if (duration < 0.0) throw PhysicsError("two-branch duration must be >= 0");
}

TwoBranchModel two_branch_model(const TwoBranchConfig& cfg, std::vector<double> times) {
    cfg.validate();
    const double e1 = cfg.mass * cfg.phi1;
    const double e2 = cfg.mass * cfg.phi2;
    const std::vector<double> diag{e1, 0.0, 0.0, e2};
    Operator h = Operator::diagonal(diag);

    std::vector<hilbert::Vector> states;
    states.reserve(times.size());
    const double t0 = times.empty() ? 0.0 : times.front();
    for (double t : times) {
        const double tau = t - t0;
        const Complex a1 = cfg.alpha1 * std::exp(-kI * tau * e1 / 2.0);
        const Complex a2 = cfg.alpha2 * std::exp(-kI * tau * e2 / 2.0);
        hilbert::Vector s(4);
        s << a1 * a1, a1 * a2, a2 * a1, a2 * a2;
        s /= s.norm();
        states.push_back(std::move(s));
    }
    EvolutionPath product(times, std::move(states));

    hilbert::Vector start(4);
    start << cfg.alpha1, 0.0, 0.0, cfg.alpha2;
    EvolutionPath canonical =
        schrodinger_path(StateVector::normalise(start, {"11", "12", "21", "22"}), h, times);
    return TwoBranchModel{std::move(product), std::move(canonical), std::move(h)};
}

TwoBranchModel two_branch_model(const TwoBranchConfig& cfg, std::size_t nodes) {
    const double end = cfg.duration > 0.0 ? cfg.duration : 1.0;
    return two_branch_model(cfg, uniform_times(0.0, end, nodes));
}

double two_branch_residual_pre_gauge(const TwoBranchConfig& cfg) {
    cfg.validate();
    return 0.5 * cfg.mass * std::abs(cfg.alpha1 * cfg.alpha2) * std::abs(cfg.phi12()) *
           std::sqrt(2.0);
}

double two_branch_residual_post_gauge(const TwoBranchConfig& cfg) {
    cfg.validate();
    const double w = std::abs(cfg.alpha1 * cfg.alpha2);
    return 0.5 * cfg.mass * w * std::abs(cfg.phi12()) * std::sqrt(2.0 - 4.0 * w * w);
}

PenrosePhase penrose_phase(const TwoBranchConfig& cfg) {
    PenrosePhase out;
    out.phase = cfg.duration * two_branch_residual_post_gauge(cfg);
    out.order_of_magnitude = cfg.duration * cfg.mass * std::abs(cfg.phi12());
    out.collapse_regime = out.order_of_magnitude >= 1.0;
    return out;
}

RotationSchedule RotationSchedule::from_amplitudes(Complex alpha1, Complex alpha2,
                                                   ScheduleShape shape, double t_start,
                                                   double t_end, Branch survivor) {
    const Complex from = survivor == Branch::second ? alpha1 : alpha2;
    const Complex to = survivor == Branch::second ? alpha2 : alpha1;
    const double weight = std::norm(from) + std::norm(to);
    if (std::abs(weight - 1.0) > 1e-12) {
        throw PhysicsError("rotation amplitudes must be normalised");
    }
    // Remove the global phase so the amplitude of the branch rotated away is real, >= 0.
    const double global = std::abs(from) > 0.0 ? std::arg(from) : 0.0;
    const Complex to_rel = to * std::exp(-kI * global);
    RotationSchedule s;
    s.theta_s = std::atan2(std::abs(to_rel), std::abs(from));
    s.phi = std::abs(to_rel) > 0.0 ? std::arg(to_rel) : 0.0;
    s.shape = shape;
    s.t_start = t_start;
    s.t_end = t_end;
    s.survivor = survivor;
    s.validate();
    return s;
}

void RotationSchedule::validate() const {
    if (!(theta_s > 0.0) || theta_s > kHalfPi + 1e-15) {
        throw PhysicsError("rotation schedule: theta_s must lie in (0, pi/2]");
    }
    if (!(t_end > t_start)) {
        throw PhysicsError("rotation schedule: interaction window must have t_end > t_start");
    }
}

double RotationSchedule::theta(double t) const {
    if (t <= t_start) return theta_s;
    if (t >= t_end) return kHalfPi;
    const double s = (t - t_start) / (t_end - t_start);
    return theta_s + (kHalfPi - theta_s) * shape_value(shape, s);
}

double RotationSchedule::theta_rate(double t) const {
    if (t < t_start || t > t_end) return 0.0;
    const double s = (t - t_start) / (t_end - t_start);
    return (kHalfPi - theta_s) * shape_slope(shape, s) / (t_end - t_start);
}

EvolutionPath rotation_path(const RotationSchedule& schedule, const EvolutionPath& base1,
                            const EvolutionPath& base2) {
    schedule.validate();
    if (base1.size() != base2.size() || base1.dim() != base2.dim()) {
        throw DimensionError("rotation_path: base paths must share grid and dimension");
    }
    const auto times = base1.times();
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] != base2.times()[i]) {
            throw DimensionError("rotation_path: base paths must share the time grid");
        }
        const double overlap = std::abs(base1.amplitudes(i).dot(base2.amplitudes(i)));
        if (overlap > kOrthogonalityTolerance) {
            std::ostringstream msg;
            msg << "rotation_path: base states are not orthogonal at node " << i
                << " (|<1|2>| = " << overlap << ")";
            throw PhysicsError(msg.str());
        }
    }
    if (schedule.t_start < times.front() - 1e-12 || schedule.t_end > times.back() + 1e-12) {
        throw PhysicsError("rotation_path: interaction window lies outside the path time range");
    }
    const EvolutionPath& from = schedule.survivor == Branch::second ? base1 : base2;
    const EvolutionPath& to = schedule.survivor == Branch::second ? base2 : base1;
    const Complex phase = std::exp(kI * schedule.phi);

    std::vector<hilbert::Vector> states;
    states.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double th = schedule.theta(times[i]);
        hilbert::Vector s = std::cos(th) * from.amplitudes(i) + phase * std::sin(th) * to.amplitudes(i);
        s /= s.norm();
        states.push_back(std::move(s));
    }
    return EvolutionPath(std::vector<double>(times.begin(), times.end()), std::move(states));
}

CollapseRotation collapse_rotation(const StateVector& psi0, const Operator& h, std::size_t survivor,
                                   ScheduleShape shape, double t_start, double t_end,
                                   const std::vector<double>& times) {
    if (!psi0.is_normalised()) throw PhysicsError("collapse_rotation: initial state must be normalised");
    if (survivor >= psi0.dim()) throw DimensionError("collapse_rotation: survivor index out of range");
    const auto idx = static_cast<Eigen::Index>(survivor);
    const Complex alpha = psi0[survivor];
    if (std::abs(alpha) == 0.0) {
        throw PhysicsError("collapse_rotation: the initial state has no weight on the surviving branch");
    }
    EvolutionPath reference = schrodinger_path(psi0, h, times);
    hilbert::Vector rest = psi0.amplitudes();
    rest(idx) = 0.0;
    const double rest_norm = rest.norm();
    RotationSchedule schedule = RotationSchedule::from_amplitudes(
        Complex(rest_norm, 0.0), alpha, shape, t_start, t_end, Branch::second);
    if (rest_norm == 0.0) {
        // Already entirely in the surviving branch: nothing to rotate.
        EvolutionPath path = reference;
        return {std::move(path), std::move(reference), schedule};
    }
    EvolutionPath from = schrodinger_path(StateVector::normalise(rest), h, times);
    EvolutionPath to = schrodinger_path(StateVector::basis(psi0.dim(), survivor), h, times);
    EvolutionPath path = rotation_path(schedule, from, to);
    return {std::move(path), std::move(reference), schedule};
}

std::vector<RankedCandidate> rank_candidates(std::span<const Candidate> candidates,
                                             const Hamiltonian& h) {
    std::vector<RankedCandidate> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        out.push_back({c.name, residual::action(c.path, h).S});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) { return a.action < b.action; });
    return out;
}

}  // namespace gcollapse::paths
