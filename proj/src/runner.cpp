#include "gcollapse/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gcollapse/born.hpp"
#include "gcollapse/error.hpp"
#include "gcollapse/gravity.hpp"
#include "gcollapse/paths.hpp"
#include "gcollapse/residual.hpp"
#include "gcollapse/sn.hpp"
#include "gcollapse/units.hpp"

namespace gcollapse::runner {

namespace {

using scenario::Kind;
using scenario::Scenario;
using csv::number;
using hilbert::Complex;

std::string fmt(double v) { return number(v); }

std::string line(const std::string& label, double value) { return label + " = " + fmt(value); }

paths::ScheduleShape parse_shape(const std::string& text) {
    if (text == "linear") return paths::ScheduleShape::linear;
    if (text == "smoothstep") return paths::ScheduleShape::smoothstep;
    if (text == "sine") return paths::ScheduleShape::sine;
    if (text == "smootherstep") return paths::ScheduleShape::smootherstep;
    throw ParseError("unknown shape '" + text + "' (linear, smoothstep, sine, smootherstep)");
}

gravity::Profile parse_profile(const std::string& text) {
    if (text == "uniform_sphere") return gravity::Profile::uniform_sphere;
    if (text == "gaussian") return gravity::Profile::gaussian;
    throw ParseError("unknown profile '" + text + "' (uniform_sphere, gaussian)");
}

gravity::Phi12Convention parse_convention(const std::string& text) {
    if (text == "scaling") return gravity::Phi12Convention::scaling;
    if (text == "profile") return gravity::Phi12Convention::profile;
    throw ParseError("unknown convention '" + text + "' (scaling, profile)");
}

gravity::MassConfiguration mass_configuration(const Scenario& s) {
    gravity::MassConfiguration cfg;
    cfg.total_mass = s.real("mass");
    cfg.smearing_radius = s.real("radius");
    cfg.displacement = s.real("displacement", std::numeric_limits<double>::infinity());
    cfg.n_constituents = s.integer("constituents", 1);
    cfg.entangled_fraction = s.real("fraction", 1.0);
    cfg.profile = parse_profile(s.word("profile", "uniform_sphere"));
    cfg.convention = parse_convention(s.word("convention", "scaling"));
    cfg.validate();
    return cfg;
}

hilbert::Vector to_vector(const std::vector<std::complex<double>>& values) {
    hilbert::Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    return v;
}

RunResult run_two_branch(const Scenario& s) {
    paths::TwoBranchConfig cfg;
    cfg.alpha1 = s.complex("alpha1");
    cfg.alpha2 = s.complex("alpha2");
    cfg.mass = s.real("mass");
    cfg.phi1 = s.real("phi1");
    cfg.phi2 = s.real("phi2");
    cfg.duration = s.real("duration");
    if (!(cfg.duration > 0.0)) throw PhysicsError("two_branch: duration must be > 0");
    const auto nodes = static_cast<std::size_t>(s.integer("nodes", 2001));
    const paths::TwoBranchModel model = paths::two_branch_model(cfg, nodes);
    const residual::Hamiltonian h(model.hamiltonian);
    const std::vector<double> pre = residual::residual_norms(model.product_path, h);
    const residual::EvolutionPath gauged = residual::energy_gauge(model.product_path, h);
    const std::vector<double> post = residual::residual_norms(gauged, h);
    const double pre_exact = paths::two_branch_residual_pre_gauge(cfg);
    const double post_exact = paths::two_branch_residual_post_gauge(cfg);

    RunResult out;
    out.table.header = columns_for(Kind::two_branch);
    for (std::size_t i = 0; i < nodes; ++i) {
        out.table.add({fmt(model.product_path.times()[i]), fmt(pre[i]), fmt(post[i]), fmt(pre_exact),
                       fmt(post_exact)});
    }
    const paths::PenrosePhase phase = paths::penrose_phase(cfg);
    out.summary.push_back(line("action", residual::action(model.product_path, h).S));
    out.summary.push_back(line("penrose_phase", phase.phase));
    out.summary.push_back(line("penrose_phase_order_of_magnitude", phase.order_of_magnitude));
    out.summary.push_back(std::string("collapse_regime = ") + (phase.collapse_regime ? "yes" : "no"));
    return out;
}

RunResult run_rotation(const Scenario& s) {
    const Complex alpha1 = s.complex("alpha1");
    const Complex alpha2 = s.complex("alpha2");
    hilbert::Vector amps(2);
    amps << alpha1, alpha2;
    const auto psi0 = hilbert::StateVector::normalised(amps, {"1", "2"});
    const std::vector<double> energies{s.real("energy1", 0.0), s.real("energy2", 0.0)};
    const auto h = hilbert::Operator::diagonal(energies);
    const std::string survivor_text = s.word("survivor", "second");
    if (survivor_text != "first" && survivor_text != "second") {
        throw ParseError("survivor must be 'first' or 'second'");
    }
    const std::size_t survivor = survivor_text == "first" ? 0 : 1;
    const auto times =
        paths::uniform_times(0.0, s.real("duration"), static_cast<std::size_t>(s.integer("nodes", 4001)));
    const paths::CollapseRotation rot =
        paths::collapse_rotation(psi0, h, survivor, parse_shape(s.word("shape", "linear")),
                                 s.real("t_start"), s.real("t_end"), times);
    const residual::Hamiltonian ham(h);
    const std::vector<double> norms = residual::residual_norms(residual::energy_gauge(rot.path, ham), ham);

    RunResult out;
    out.table.header = columns_for(Kind::rotation);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double c = std::abs(rot.reference.amplitudes(i).dot(rot.path.amplitudes(i)));
        out.table.add({fmt(times[i]), fmt(rot.schedule.theta(times[i])), fmt(rot.schedule.theta_rate(times[i])),
                       fmt(norms[i]), fmt(c)});
    }
    const double alpha_survivor = std::abs(psi0[survivor]);
    const born::PathStatistic stat = born::statistic_A(rot.path, ham, rot.reference);
    out.summary.push_back(line("action", residual::action(rot.path, ham).S));
    out.summary.push_back(line("action_expected", std::numbers::pi / 2.0 - rot.schedule.theta_s));
    out.summary.push_back(line("statistic_A", stat.A));
    out.summary.push_back(line("statistic_A_expected", -std::log(alpha_survivor)));
    out.summary.push_back(line("rate", stat.rate));
    return out;
}

RunResult run_born_race(const Scenario& s) {
    const std::vector<double> weights = s.reals("weights");
    if (weights.empty()) throw ParseError("born_race: weights must not be empty");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw PhysicsError("born_race: weights must be >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw PhysicsError("born_race: weights must sum to 1 (got " + fmt(total) + ")");
    }
    hilbert::Vector amps(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) amps(static_cast<Eigen::Index>(i)) = std::sqrt(weights[i]);
    const auto psi0 = hilbert::StateVector::normalise(amps);
    const auto h = hilbert::Operator::zero(weights.size());
    const residual::Hamiltonian ham(h);
    const auto times = paths::uniform_times(0.0, 1.0, static_cast<std::size_t>(s.integer("nodes", 2001)));
    const auto shape = parse_shape(s.word("shape", "linear"));

    std::vector<born::PathStatistic> stats;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0.0) {
            stats.push_back(born::PathStatistic::divergent_statistic());
            continue;
        }
        const auto rot = paths::collapse_rotation(psi0, h, i, shape, 0.0, 1.0, times);
        stats.push_back(born::statistic_A(rot.path, ham, rot.reference));
    }
    std::vector<double> rates;
    for (const auto& st : stats) rates.push_back(st.rate);
    const auto threads = static_cast<unsigned>(std::max<std::uint64_t>(1, s.integer("threads", 1)));
    const born::RaceFrequencies race = born::race_sample(rates, s.integer("samples"), s.seed, threads);

    RunResult out;
    out.table.header = columns_for(Kind::born_race);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out.table.add({csv::integer(i), fmt(weights[i]), fmt(stats[i].A), fmt(stats[i].rate),
                       fmt(race.closed_form[i]), csv::integer(race.counts[i]), fmt(race.frequencies[i]),
                       fmt(race.sigma(i))});
    }
    out.summary.push_back("samples = " + csv::integer(race.samples));
    out.summary.push_back("ties = " + csv::integer(race.ties));
    return out;
}

RunResult run_estimate(const Scenario& s) {
    RunResult out;
    out.table.header = columns_for(Kind::estimate);
    auto row = [&out](const std::string& q, double v, const std::string& unit) {
        out.table.add({q, fmt(v), unit});
        out.summary.push_back(q + " = " + fmt(v) + (unit.empty() ? "" : " " + unit));
    };
    const std::string mode = s.word("mode");
    if (mode == "collapse_time") {
        const auto cfg = mass_configuration(s);
        const auto est = gravity::collapse_time(cfg);
        row("phi12_per_constituent", est.phi.per_constituent, "");
        row("orthogonality", est.phi.orthogonality, "");
        row("overlapping", est.phi.overlapping ? 1.0 : 0.0, "");
        row("phase_rate", est.phase_rate, "GeV");
        row("tau_natural", est.tau_natural, "1/GeV");
        row("tau_seconds", est.tau_seconds, "s");
        row("collapses", est.collapses ? 1.0 : 0.0, "");
        // Same estimate with the two-branch order-one factor kept.
        const double factor = gravity::branch_factor(s.real("weight", 0.5));
        row("branch_factor", factor, "");
        row("tau_seconds_with_branch_factor",
            factor > 0.0 ? est.tau_seconds / factor : std::numeric_limits<double>::infinity(), "s");
    } else if (mode == "required_mass") {
        const auto cfg = mass_configuration(s);
        const double tau = s.real("tau");
        const double m = gravity::required_mass(tau, cfg);
        row("phi12_per_constituent", gravity::phi12(cfg).per_constituent, "");
        row("required_mass", m, "GeV");
        row("required_mass", units::natural_to_grams(m), "g");
        row("required_mass", units::natural_to_grams(m) * 1e9, "ng");
        row("constituents", m / cfg.constituent_mass(), "");
    } else if (mode == "qubits") {
        gravity::MassConfiguration carrier = gravity::electron();
        if (s.has("mass")) {
            carrier.total_mass = s.real("mass");
            carrier.smearing_radius = 1.0 / carrier.total_mass;
        }
        if (s.has("radius")) carrier.smearing_radius = s.real("radius");
        carrier.profile = parse_profile(s.word("profile", "uniform_sphere"));
        carrier.convention = parse_convention(s.word("convention", "scaling"));
        carrier.entangled_fraction = s.real("fraction", 1.0);
        carrier.validate();
        const auto n_e = s.integer("electrons_per_qubit");
        const double tau = s.real("tau");
        row("qubits_entangled", gravity::qubit_estimate(n_e, tau, gravity::QubitScaling::entangled, carrier), "");
        row("qubits_product", gravity::qubit_estimate(n_e, tau, gravity::QubitScaling::product, carrier), "");
    } else {
        throw ParseError("unknown estimate mode '" + mode + "' (collapse_time, required_mass, qubits)");
    }
    return out;
}

sn::RadialGrid sn_grid(const Scenario& s) {
    return sn::RadialGrid::make(s.real("r_max"), static_cast<std::size_t>(s.integer("n_points")), s.real("mass"),
                                s.real("G"));
}

RunResult run_sn_ground(const Scenario& s) {
    sn::GroundStateOptions opts;
    opts.dtau = s.real("dtau", 0.0);
    opts.residual_tol = s.real("residual_tol", opts.residual_tol);
    opts.max_iterations = static_cast<std::size_t>(s.integer("max_iterations", opts.max_iterations));
    const sn::GroundState gs = sn::ground_state(sn_grid(s), opts);
    const auto density = gs.state.probability_density();
    const auto phi = sn::solve_poisson(gs.state).phi;

    RunResult out;
    out.table.header = columns_for(Kind::sn_ground);
    for (std::size_t i = 0; i < density.size(); ++i) {
        out.table.add({fmt(gs.state.r(i)), fmt(density[i]), fmt(phi[i])});
    }
    out.summary.push_back(line("energy", gs.energy));
    out.summary.push_back(line("chemical_potential", gs.chemical_potential));
    out.summary.push_back(line("residual", gs.residual));
    out.summary.push_back("iterations = " + csv::integer(gs.iterations));
    return out;
}

RunResult run_sn_evolve(const Scenario& s) {
    sn::RadialGrid grid = sn_grid(s);
    const std::string initial = s.word("initial", "gaussian");
    if (initial == "gaussian") {
        sn::set_gaussian(grid, s.real("sigma"));
    } else if (initial == "ground") {
        grid = sn::ground_state(grid).state;
    } else {
        throw ParseError("unknown initial state '" + initial + "' (gaussian, ground)");
    }
    if (s.has("omega")) sn::set_harmonic(grid, s.real("omega"));
    const double dt = s.real("dt");
    const std::uint64_t steps = s.integer("steps");
    const std::uint64_t every = std::max<std::uint64_t>(1, s.integer("sample_every", std::max<std::uint64_t>(1, steps / 100)));

    RunResult out;
    out.table.header = columns_for(Kind::sn_evolve);
    auto sample = [&](std::uint64_t step) {
        out.table.add({fmt(static_cast<double>(step) * dt), fmt(grid.norm()), fmt(grid.rms_width()),
                       fmt(sn::sn_energy(grid))});
    };
    sample(0);
    for (std::uint64_t done = 0; done < steps;) {
        const std::uint64_t chunk = std::min(every, steps - done);
        grid = sn::evolve_real(grid, dt, chunk);
        done += chunk;
        sample(done);
    }
    out.summary.push_back(line("final_norm", grid.norm()));
    out.summary.push_back(line("final_rms_width", grid.rms_width()));
    return out;
}

RunResult run_pd_compare(const Scenario& s) {
    const auto cfg = mass_configuration(s);
    const auto separations = s.reals("separations");
    const auto rows = gravity::pd_comparison(cfg, separations);
    RunResult out;
    out.table.header = columns_for(Kind::pd_compare);
    for (const auto& r : rows) {
        const double phase_time = r.phase_rate > 0.0 ? units::natural_to_seconds(1.0 / r.phase_rate)
                                                     : std::numeric_limits<double>::infinity();
        const double pd_time = r.e_pen > 0.0 ? units::natural_to_seconds(1.0 / r.e_pen)
                                             : std::numeric_limits<double>::infinity();
        out.table.add({fmt(units::natural_to_metres(r.separation)), fmt(r.phase_rate), fmt(r.e_pen),
                       fmt(phase_time), fmt(pd_time)});
    }
    return out;
}

RunResult run_weak_measure(const Scenario& s) {
    const auto state = hilbert::StateVector::normalised(to_vector(s.complexes("state")));
    const auto probe = hilbert::StateVector::normalised(to_vector(s.complexes("probe")));
    const born::WeakMeasurement wm(probe, s.real("p"));
    Rng rng(s.seed);
    hilbert::StateVector psi = state;
    RunResult out;
    out.table.header = columns_for(Kind::weak_measure);
    std::uint64_t detections = 0;
    const std::uint64_t reps = s.integer("repetitions");
    for (std::uint64_t k = 1; k <= reps; ++k) {
        const auto r = born::weak_measure(wm, psi, rng);
        psi = r.post_state;
        if (r.outcome == born::Outcome::plus) ++detections;
        const double weight = std::norm(probe.amplitudes().dot(psi.amplitudes()));
        out.table.add({csv::integer(k), r.outcome == born::Outcome::plus ? "+" : "-", fmt(r.p_plus), fmt(weight)});
    }
    out.summary.push_back("detections = " + csv::integer(detections));
    return out;
}

}  // namespace

std::vector<std::string> columns_for(scenario::Kind kind) {
    switch (kind) {
        case Kind::two_branch: return {"t", "residual_pre_gauge", "residual_post_gauge", "analytic_pre_gauge", "analytic_post_gauge"};
        case Kind::rotation: return {"t", "theta", "theta_rate", "residual_norm", "overlap_C"};
        case Kind::born_race: return {"outcome", "weight", "A", "rate", "closed_form", "count", "frequency", "sigma"};
        case Kind::estimate: return {"quantity", "value", "unit"};
        case Kind::sn_ground: return {"r", "density", "phi_n"};
        case Kind::sn_evolve: return {"t", "norm", "rms_width", "energy"};
        case Kind::pd_compare: return {"separation_m", "phase_rate_gev", "e_pen_gev", "phase_time_s", "pd_time_s"};
        case Kind::weak_measure: return {"step", "outcome", "p_plus", "probe_weight"};
    }
    return {};
}

RunResult run(const scenario::Scenario& s) {
    switch (s.kind) {
        case Kind::two_branch: return run_two_branch(s);
        case Kind::rotation: return run_rotation(s);
        case Kind::born_race: return run_born_race(s);
        case Kind::estimate: return run_estimate(s);
        case Kind::sn_ground: return run_sn_ground(s);
        case Kind::sn_evolve: return run_sn_evolve(s);
        case Kind::pd_compare: return run_pd_compare(s);
        case Kind::weak_measure: return run_weak_measure(s);
    }
    throw ParseError("unsupported scenario kind");
}

}  // namespace gcollapse::runner
