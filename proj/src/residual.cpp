#include "gcollapse/residual.hpp"

#include <cmath>
#include <sstream>

#include "gcollapse/error.hpp"
#include "gcollapse/quadrature.hpp"

namespace gcollapse::residual {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_hamiltonian(const EvolutionPath& path, const Hamiltonian& h) {
    if (h.dim() != path.dim()) {
        throw DimensionError("Hamiltonian and path dimensions differ");
    }
    if (h.is_time_dependent() && h.node_count() != path.size()) {
        throw DimensionError("per-node Hamiltonian needs one operator per path node");
    }
}

}  // namespace

Hamiltonian::Hamiltonian(Operator constant) : operators_{std::move(constant)} {}

Hamiltonian::Hamiltonian(std::vector<Operator> operators) : operators_(std::move(operators)) {
    if (operators_.empty()) {
        throw DimensionError("Hamiltonian: at least one operator required");
    }
    for (const auto& op : operators_) {
        if (op.dim() != operators_.front().dim()) {
            throw DimensionError("Hamiltonian: per-node operators differ in dimension");
        }
    }
}

Hamiltonian Hamiltonian::per_node(std::vector<Operator> operators) {
    return Hamiltonian(std::move(operators));
}

const Operator& Hamiltonian::at(std::size_t node) const {
    return operators_.size() == 1 ? operators_.front() : operators_.at(node);
}

EvolutionPath::EvolutionPath(std::vector<double> times, std::vector<Vector> states,
                             std::vector<double> gauge_phase, std::vector<Vector> derivatives)
    : times_(std::move(times)),
      states_(std::move(states)),
      gauge_phase_(std::move(gauge_phase)),
      derivatives_(std::move(derivatives)) {
    if (times_.size() < 3) {
        throw DimensionError("EvolutionPath: at least three time nodes are required");
    }
    if (states_.size() != times_.size()) {
        throw DimensionError("EvolutionPath: one state per time node required");
    }
    if (gauge_phase_.empty()) {
        gauge_phase_.assign(times_.size(), 0.0);
    } else if (gauge_phase_.size() != times_.size()) {
        throw DimensionError("EvolutionPath: one gauge phase per time node required");
    }
    if (!derivatives_.empty() && derivatives_.size() != times_.size()) {
        throw DimensionError("EvolutionPath: one derivative per time node required");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw DimensionError("EvolutionPath: times must be strictly increasing");
        }
    }
    const auto d = states_.front().size();
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].size() != d || (!derivatives_.empty() && derivatives_[i].size() != d)) {
            throw DimensionError("EvolutionPath: all states must share one dimension");
        }
        const double n2 = states_[i].squaredNorm();
        if (std::abs(n2 - 1.0) > kPathNormTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "EvolutionPath: state at node " << i << " is not normalised (<psi|psi> = " << n2
                << ")";
            throw PhysicsError(msg.str());
        }
    }
}

StateVector EvolutionPath::state(std::size_t node) const {
    return StateVector::normalise(states_.at(node));
}

Vector EvolutionPath::time_derivative(std::size_t node) const {
    if (!derivatives_.empty()) return derivatives_.at(node);
    const std::size_t n = times_.size();
    if (node >= n) throw DimensionError("time_derivative: node out of range");
    if (node == 0) {
        const double h1 = times_[1] - times_[0];
        const double h2 = times_[2] - times_[1];
        return (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) * states_[0] +
               ((h1 + h2) / (h1 * h2)) * states_[1] - (h1 / (h2 * (h1 + h2))) * states_[2];
    }
    if (node == n - 1) {
        const double h1 = times_[n - 1] - times_[n - 2];
        const double h2 = times_[n - 2] - times_[n - 3];
        return ((2.0 * h1 + h2) / (h1 * (h1 + h2))) * states_[n - 1] -
               ((h1 + h2) / (h1 * h2)) * states_[n - 2] + (h1 / (h2 * (h1 + h2))) * states_[n - 3];
    }
    const double h1 = times_[node] - times_[node - 1];
    const double h2 = times_[node + 1] - times_[node];
    return (-h2 / (h1 * (h1 + h2))) * states_[node - 1] + ((h2 - h1) / (h1 * h2)) * states_[node] +
           (h1 / (h2 * (h1 + h2))) * states_[node + 1];
}

EvolutionPath EvolutionPath::subsample(std::size_t stride) const {
    if (stride == 0 || (times_.size() - 1) % stride != 0) {
        throw DimensionError("subsample: node count must be 1 + k * stride");
    }
    std::vector<double> t;
    std::vector<Vector> s;
    std::vector<double> g;
    std::vector<Vector> d;
    for (std::size_t i = 0; i < times_.size(); i += stride) {
        t.push_back(times_[i]);
        s.push_back(states_[i]);
        g.push_back(gauge_phase_[i]);
        if (!derivatives_.empty()) d.push_back(derivatives_[i]);
    }
    return EvolutionPath(std::move(t), std::move(s), std::move(g), std::move(d));
}

ResidualSample residual_from(const Vector& state, const Vector& derivative, const Operator& h) {
    if (state.size() != derivative.size() || static_cast<std::size_t>(state.size()) != h.dim()) {
        throw DimensionError("residual_from: dimension mismatch");
    }
    Vector r = kI * derivative - h.matrix() * state;
    const Complex par = state.dot(r) / state.squaredNorm();
    Vector perp = r - par * state;
    ResidualSample out{StateVector::unnormalised(r), StateVector::unnormalised(perp), par, 0.0,
                       0.0};
    out.norm = out.r.norm();
    out.perp_norm = out.r_perp.norm();
    return out;
}

ResidualSample residual_at(const EvolutionPath& path, std::size_t node, const Hamiltonian& h) {
    check_hamiltonian(path, h);
    return residual_from(path.amplitudes(node), path.time_derivative(node), h.at(node));
}

std::vector<double> residual_norms(const EvolutionPath& path, const Hamiltonian& h) {
    check_hamiltonian(path, h);
    std::vector<double> out(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        out[i] = residual_at(path, i, h).norm;
    }
    return out;
}

GaugeResult energy_gauge_with_diagnostics(const EvolutionPath& path, const Hamiltonian& h,
                                          double drift_tolerance) {
    check_hamiltonian(path, h);
    const std::size_t n = path.size();
    std::vector<double> rate(n);
    std::vector<Vector> base_derivative(n);
    double max_drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        base_derivative[i] = path.time_derivative(i);
        const ResidualSample s = residual_from(path.amplitudes(i), base_derivative[i], h.at(i));
        rate[i] = -s.parallel_coeff.real();
        max_drift = std::max(max_drift, std::abs(s.parallel_coeff.imag()));
    }
    const std::vector<double> phase = quadrature::cumulative_trapezoid(path.times(), rate);

    std::vector<Vector> states(n);
    std::vector<Vector> derivatives(n);
    std::vector<double> gauge(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex factor = std::exp(-kI * phase[i]);
        states[i] = factor * path.amplitudes(i);
        derivatives[i] = factor * (base_derivative[i] - kI * rate[i] * path.amplitudes(i));
        gauge[i] = path.gauge_phase()[i] + phase[i];
    }
    EvolutionPath gauged(std::vector<double>(path.times().begin(), path.times().end()),
                         std::move(states), std::move(gauge), std::move(derivatives));
    return GaugeResult{std::move(gauged), max_drift, max_drift > drift_tolerance};
}

EvolutionPath energy_gauge(const EvolutionPath& path, const Hamiltonian& h) {
    return energy_gauge_with_diagnostics(path, h).path;
}

namespace {

double action_value(const EvolutionPath& path, const Hamiltonian& h, Gauge gauge) {
    const std::vector<double> norms = gauge == Gauge::energy
                                          ? residual_norms(energy_gauge(path, h), h)
                                          : residual_norms(path, h);
    return quadrature::integrate_samples(path.times(), norms);
}

}  // namespace

ActionValue action(const EvolutionPath& path, const Hamiltonian& h, const ActionOptions& options) {
    check_hamiltonian(path, h);
    ActionValue out;
    out.S = action_value(path, h, options.gauge);
    if (options.check_convergence && path.size() >= 5 && (path.size() - 1) % 2 == 0 &&
        !h.is_time_dependent()) {
        const double coarse = action_value(path.subsample(2), h, options.gauge);
        // Second-order stencil: error ~ h^2, so the fine-grid error is (S_h - S_2h) / 3.
        out.error_estimate = std::abs(out.S - coarse) / 3.0;
    }
    return out;
}

double compose_separable(std::span<const double> subsystem_norms) {
    double sum = 0.0;
    for (double r : subsystem_norms) {
        if (r < 0.0 || !std::isfinite(r)) {
            throw PhysicsError("compose_separable: residual norms must be finite and >= 0");
        }
        sum += r * r;
    }
    return std::sqrt(sum);
}

Operator interaction_operator(std::span<const InteractionTerm> terms, std::size_t dim_a,
                              std::size_t dim_b) {
    Operator total = Operator::zero(dim_a * dim_b);
    hilbert::Matrix acc = total.matrix();
    bool hermitian = true;
    for (const auto& term : terms) {
        if (term.on_a.dim() != dim_a || term.on_b.dim() != dim_b) {
            throw DimensionError("interaction term factor dimensions do not match the subsystems");
        }
        const Operator product = hilbert::tensor(term.on_a, term.on_b);
        acc += product.matrix();
        hermitian = hermitian && product.is_hermitian();
    }
    if (hermitian) return Operator::hermitian(std::move(acc));
    // A sum of non-Hermitian pairs may still be Hermitian (e.g. S+ S- + S- S+).
    if ((acc - acc.adjoint()).cwiseAbs().maxCoeff() <= hilbert::kHermitianTolerance) {
        return Operator::hermitian(0.5 * (acc + acc.adjoint()));
    }
    throw PhysicsError("interaction Hamiltonian is not Hermitian");
}

std::vector<InteractingResidual> interacting_residual(const EvolutionPath& a,
                                                      const EvolutionPath& b,
                                                      const Hamiltonian& h_a,
                                                      const Hamiltonian& h_b,
                                                      std::span<const InteractionTerm> h_int) {
    check_hamiltonian(a, h_a);
    check_hamiltonian(b, h_b);
    if (a.size() != b.size()) {
        throw DimensionError("interacting_residual: subsystem paths need a common time grid");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.times()[i] != b.times()[i]) {
            throw DimensionError("interacting_residual: subsystem paths need a common time grid");
        }
    }
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    const Operator v_full = interaction_operator(h_int, da, db);
    const hilbert::TensorFactorization split{{da, db}};
    const auto ia = static_cast<Eigen::Index>(da);
    const auto ib = static_cast<Eigen::Index>(db);

    std::vector<InteractingResidual> out(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
        const StateVector sa = a.state(n);
        const StateVector sb = b.state(n);
        const Operator v_a = hilbert::partial_expectation(v_full, 1, sb, split);
        const Operator v_b = hilbert::partial_expectation(v_full, 0, sa, split);
        const double mean = hilbert::expectation(v_a, sa).real();

        const hilbert::Matrix eff_a =
            h_a.at(n).matrix() + v_a.matrix() - mean * hilbert::Matrix::Identity(ia, ia);
        const hilbert::Matrix eff_b =
            h_b.at(n).matrix() + v_b.matrix() - mean * hilbert::Matrix::Identity(ib, ib);
        const ResidualSample ra = residual_from(a.amplitudes(n), a.time_derivative(n),
                                                Operator::hermitian(0.5 * (eff_a + eff_a.adjoint())));
        const ResidualSample rb = residual_from(b.amplitudes(n), b.time_derivative(n),
                                                Operator::hermitian(0.5 * (eff_b + eff_b.adjoint())));

        const hilbert::Matrix fluctuation =
            v_full.matrix() -
            hilbert::tensor(v_a, Operator::identity(db)).matrix() -
            hilbert::tensor(Operator::identity(da), v_b).matrix() +
            mean * hilbert::Matrix::Identity(ia * ib, ia * ib);
        const StateVector psi = hilbert::tensor(sa, sb);
        const Vector v_psi = fluctuation * psi.amplitudes();

        out[n].subsystem_a = ra.perp_norm * ra.perp_norm;
        out[n].subsystem_b = rb.perp_norm * rb.perp_norm;
        out[n].interaction = v_psi.squaredNorm();
        out[n].mean_interaction = mean;
    }
    return out;
}

}  // namespace gcollapse::residual
