#pragma once

// Hidden-variable layer: the path statistic A, end-state rates r = exp(-2A),
// the exponential race between candidate end states, and weak measurements.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gcollapse/hilbert.hpp"
#include "gcollapse/residual.hpp"
#include "gcollapse/rng.hpp"

namespace gcollapse::born {

using hilbert::Operator;
using hilbert::StateVector;
using residual::EvolutionPath;
using residual::Hamiltonian;

// A and its rate. A path whose overlap with the reference evolution drops to
// (numerically) zero has a divergent A; it carries rate 0 and takes no part
// in races.
struct PathStatistic {
    double A = 0.0;
    double rate = 1.0;
    bool divergent = false;

    static PathStatistic from_A(double a);
    static PathStatistic divergent_statistic();
};

struct StatisticOptions {
    double c_min = 1e-9;
};

// A = integral dt ||R|| sqrt(1 - C^2) / C with C(t) = |<reference(t)|psi(t)>|,
// evaluated with the path in its energy gauge.
// Per-node integrand of A; +inf where C <= c_min.
std::vector<double> statistic_integrand(const EvolutionPath& path, const Hamiltonian& h,
                                        const EvolutionPath& reference,
                                        const StatisticOptions& options = {});
PathStatistic statistic_A(const EvolutionPath& path, const Hamiltonian& h,
                          const EvolutionPath& reference, const StatisticOptions& options = {});

// P_I = r_I / sum_J r_J. Zero rates drop out with probability 0.
std::vector<double> race_closed_form(std::span<const double> rates);

std::vector<double> outcome_probabilities(std::span<const PathStatistic> statistics);

struct HiddenVariableDraw {
    std::vector<double> lambdas;  // one exponential draw per end state
    std::size_t winner = 0;       // index of the smallest lambda
    bool tie = false;             // exact tie, resolved towards the lowest index
};

HiddenVariableDraw race_draw(std::span<const double> rates, Rng& rng);

struct RaceFrequencies {
    std::vector<std::uint64_t> counts;
    std::vector<double> frequencies;
    std::vector<double> closed_form;
    std::uint64_t samples = 0;
    std::uint64_t ties = 0;

    // Binomial standard deviation of frequency i around the closed form.
    double sigma(std::size_t i) const;
};

// Samples are drawn in fixed-size blocks, each from its own split stream of
// `seed`, so the result does not depend on `threads`.
RaceFrequencies race_sample(std::span<const double> rates, std::uint64_t samples,
                            std::uint64_t seed, unsigned threads = 1);

inline constexpr double kNeverObserved = 1e-12;

struct SuppressionResult {
    double p_first = 0.5;
    double p_second = 0.5;
    bool first_never_observed = false;
    bool second_never_observed = false;
};

// Relative probability of two end states with statistics a_first, a_second
// (either may be +infinity for a divergent path).
SuppressionResult suppression_check(double a_first, double a_second);

// Two-outcome instrument asking "is the system in |q>?" that fires with
// probability p on |q>.
class WeakMeasurement {
public:
    WeakMeasurement(StateVector q, double p);

    const StateVector& probe() const { return q_; }
    double p() const { return p_; }
    const Operator& m_plus() const { return m_plus_; }
    const Operator& m_minus() const { return m_minus_; }

    // max |M+^dag M+ + M-^dag M- - 1|
    double completeness_defect() const;

private:
    StateVector q_;
    double p_;
    Operator m_plus_;
    Operator m_minus_;
};

enum class Outcome { plus, minus };

struct WeakMeasurementResult {
    Outcome outcome = Outcome::minus;
    StateVector post_state;
    double p_plus = 0.0;
};

WeakMeasurementResult weak_measure(const WeakMeasurement& wm, const StateVector& state, Rng& rng);
WeakMeasurementResult weak_measure(const WeakMeasurement& wm, const StateVector& state,
                                   std::uint64_t seed);

}  // namespace gcollapse::born
