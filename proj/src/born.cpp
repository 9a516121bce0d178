#include "gcollapse/born.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <spdlog/spdlog.h>

#include "gcollapse/error.hpp"
#include "gcollapse/quadrature.hpp"

namespace gcollapse::born {

PathStatistic PathStatistic::from_A(double a) {
    if (!(a >= 0.0)) throw PhysicsError("path statistic A must be >= 0");
    return {a, std::exp(-2.0 * a), false};
}

PathStatistic PathStatistic::divergent_statistic() {
    return {std::numeric_limits<double>::infinity(), 0.0, true};
}

std::vector<double> statistic_integrand(const EvolutionPath& path, const Hamiltonian& h,
                                        const EvolutionPath& reference,
                                        const StatisticOptions& options) {
    if (path.size() != reference.size() || path.dim() != reference.dim()) {
        throw DimensionError("statistic_A: path and reference must share grid and dimension");
    }
    const EvolutionPath gauged = residual::energy_gauge(path, h);
    const std::vector<double> norms = residual::residual_norms(gauged, h);
    std::vector<double> integrand(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path.times()[i] != reference.times()[i]) {
            throw DimensionError("statistic_A: path and reference must share the time grid");
        }
        const double c = std::min(1.0, std::abs(reference.amplitudes(i).dot(gauged.amplitudes(i))));
        integrand[i] = c <= options.c_min ? std::numeric_limits<double>::infinity()
                                          : norms[i] * std::sqrt(1.0 - c * c) / c;
    }
    return integrand;
}

PathStatistic statistic_A(const EvolutionPath& path, const Hamiltonian& h,
                          const EvolutionPath& reference, const StatisticOptions& options) {
    const std::vector<double> integrand = statistic_integrand(path, h, reference, options);
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        if (std::isinf(integrand[i])) {
            spdlog::info("statistic_A: orthogonal excursion at t = {}, rate set to 0",
                         path.times()[i]);
            return PathStatistic::divergent_statistic();
        }
    }
    const double a = quadrature::integrate_samples(path.times(), integrand);
    return PathStatistic::from_A(std::max(0.0, a));
}

std::vector<double> race_closed_form(std::span<const double> rates) {
    if (rates.empty()) throw DimensionError("race_closed_form: no end states");
    double total = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] >= 0.0) || !std::isfinite(rates[i])) {
            throw PhysicsError("race_closed_form: rates must be finite and >= 0");
        }
        if (rates[i] == 0.0) {
            spdlog::info("race_closed_form: end state {} has rate 0 and is excluded", i);
        }
        total += rates[i];
    }
    if (!(total > 0.0)) throw PhysicsError("race_closed_form: all rates are zero");
    std::vector<double> p(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) p[i] = rates[i] / total;
    return p;
}

std::vector<double> outcome_probabilities(std::span<const PathStatistic> statistics) {
    std::vector<double> rates;
    rates.reserve(statistics.size());
    for (const auto& s : statistics) rates.push_back(s.divergent ? 0.0 : s.rate);
    return race_closed_form(rates);
}

HiddenVariableDraw race_draw(std::span<const double> rates, Rng& rng) {
    if (rates.empty()) throw DimensionError("race_draw: no end states");
    HiddenVariableDraw d;
    d.lambdas.resize(rates.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double lambda = rates[i] > 0.0 ? rng.exponential(rates[i])
                                             : std::numeric_limits<double>::infinity();
        d.lambdas[i] = lambda;
        if (lambda < best) {
            best = lambda;
            d.winner = i;
            d.tie = false;
        } else if (lambda == best && std::isfinite(lambda)) {
            d.tie = true;
        }
    }
    return d;
}

double RaceFrequencies::sigma(std::size_t i) const {
    const double p = closed_form.at(i);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

RaceFrequencies race_sample(std::span<const double> rates, std::uint64_t samples,
                            std::uint64_t seed, unsigned threads) {
    if (samples == 0) throw DimensionError("race_sample: need at least one sample");
    RaceFrequencies out;
    out.closed_form = race_closed_form(rates);
    out.samples = samples;
    const std::size_t d = rates.size();

    constexpr std::uint64_t kBlock = 1u << 16;
    const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
    const Rng root(seed);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));

    struct Tally {
        std::vector<std::uint64_t> counts;
        std::uint64_t ties = 0;
    };
    std::vector<Tally> tallies(threads, Tally{std::vector<std::uint64_t>(d, 0), 0});
    std::vector<double> rate_copy(rates.begin(), rates.end());

    auto worker = [&](unsigned w) {
        Tally& t = tallies[w];
        for (std::uint64_t b = w; b < blocks; b += threads) {
            Rng rng = root.split(b);
            const std::uint64_t n = std::min(kBlock, samples - b * kBlock);
            for (std::uint64_t k = 0; k < n; ++k) {
                const HiddenVariableDraw draw = race_draw(rate_copy, rng);
                ++t.counts[draw.winner];
                if (draw.tie) ++t.ties;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    out.counts.assign(d, 0);
    for (const auto& t : tallies) {
        for (std::size_t i = 0; i < d; ++i) out.counts[i] += t.counts[i];
        out.ties += t.ties;
    }
    if (out.ties > 0) {
        spdlog::warn("race_sample: {} exact ties broken towards the lowest index", out.ties);
    }
    out.frequencies.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.frequencies[i] = static_cast<double>(out.counts[i]) / static_cast<double>(samples);
    }
    return out;
}

SuppressionResult suppression_check(double a_first, double a_second) {
    if (std::isnan(a_first) || std::isnan(a_second) || a_first < 0.0 || a_second < 0.0) {
        throw PhysicsError("suppression_check: statistics must be >= 0 or +infinity");
    }
    SuppressionResult out;
    if (std::isinf(a_first) && std::isinf(a_second)) {
        throw PhysicsError("suppression_check: both end states are divergent");
    }
    if (std::isinf(a_first)) {
        out.p_first = 0.0;
        out.p_second = 1.0;
    } else if (std::isinf(a_second)) {
        out.p_first = 1.0;
        out.p_second = 0.0;
    } else {
        // e^{-2a1} / (e^{-2a1} + e^{-2a2}) as a logistic in the difference.
        const double x = 2.0 * (a_first - a_second);
        out.p_first = 1.0 / (1.0 + std::exp(x));
        out.p_second = 1.0 / (1.0 + std::exp(-x));
    }
    out.first_never_observed = out.p_first < kNeverObserved;
    out.second_never_observed = out.p_second < kNeverObserved;
    return out;
}

WeakMeasurement::WeakMeasurement(StateVector q, double p) : q_(std::move(q)), p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw PhysicsError("weak measurement: detection probability p must lie in [0, 1]");
    }
    if (!q_.is_normalised()) {
        throw PhysicsError("weak measurement: probe state must be normalised");
    }
    const auto n = static_cast<Eigen::Index>(q_.dim());
    const hilbert::Matrix proj = q_.amplitudes() * q_.amplitudes().adjoint();
    const hilbert::Matrix plus = std::sqrt(p) * proj;
    const hilbert::Matrix minus =
        hilbert::Matrix::Identity(n, n) - (1.0 - std::sqrt(1.0 - p)) * proj;
    m_plus_ = Operator::general(plus);
    m_minus_ = Operator::general(minus);
}

double WeakMeasurement::completeness_defect() const {
    const auto n = static_cast<Eigen::Index>(q_.dim());
    const hilbert::Matrix sum = m_plus_.matrix().adjoint() * m_plus_.matrix() +
                                m_minus_.matrix().adjoint() * m_minus_.matrix();
    return (sum - hilbert::Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

WeakMeasurementResult weak_measure(const WeakMeasurement& wm, const StateVector& state, Rng& rng) {
    if (!state.is_normalised()) {
        throw PhysicsError("weak_measure: state must be normalised");
    }
    if (state.dim() != wm.probe().dim()) {
        throw DimensionError("weak_measure: state and probe dimensions differ");
    }
    const hilbert::Vector plus = wm.m_plus().matrix() * state.amplitudes();
    const double p_plus = std::clamp(plus.squaredNorm(), 0.0, 1.0);
    WeakMeasurementResult out;
    out.p_plus = p_plus;
    if (rng.uniform() < p_plus) {
        out.outcome = Outcome::plus;
        out.post_state = StateVector::normalise(plus);
    } else {
        out.outcome = Outcome::minus;
        out.post_state = StateVector::normalise(wm.m_minus().matrix() * state.amplitudes());
    }
    return out;
}

WeakMeasurementResult weak_measure(const WeakMeasurement& wm, const StateVector& state,
                                   std::uint64_t seed) {
    Rng rng(seed);
    return weak_measure(wm, state, rng);
}

}  // namespace gcollapse::born
