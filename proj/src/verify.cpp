#include "gcollapse/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <thread>

#include "gcollapse/born.hpp"
#include "gcollapse/csv.hpp"
#include "gcollapse/error.hpp"
#include "gcollapse/gravity.hpp"
#include "gcollapse/hilbert.hpp"
#include "gcollapse/paths.hpp"
#include "gcollapse/quadrature.hpp"
#include "gcollapse/residual.hpp"
#include "gcollapse/rng.hpp"
#include "gcollapse/runner.hpp"
#include "gcollapse/scenario.hpp"
#include "gcollapse/sn.hpp"
#include "gcollapse/units.hpp"

namespace gcollapse::verify {

using hilbert::Complex;
using hilbert::Matrix;
using hilbert::Operator;
using hilbert::StateVector;
using hilbert::Vector;
using residual::EvolutionPath;
using residual::Hamiltonian;

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Check le(std::string name, double measured, double limit) {
    return {std::move(name), measured, limit, measured <= limit, false};
}

Check flag(std::string name, bool ok) { return {std::move(name), ok ? 0.0 : 1.0, 0.0, ok, false}; }

Check info(std::string name, double measured, double reference) {
    return {std::move(name), measured, reference, true, true};
}

// |log10(x / target)| against log10(factor).
Check within_factor(const std::string& what, double x, double target, double factor) {
    return le(what + " = " + num(x) + ", |log10(x/" + num(target) + ")|",
              std::abs(std::log10(x / target)), std::log10(factor));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

unsigned thread_count(const VerifyOptions& o) {
    if (o.threads != 0) return o.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

Vector random_vector(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(n(rng), n(rng));
    return v;
}

StateVector random_state(std::size_t dim, Rng& rng) { return StateVector::normalise(random_vector(dim, rng)); }

Matrix random_hermitian(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
    return 0.5 * (m + m.adjoint());
}

// Oracle Kronecker products, written out independently of hilbert::tensor.
Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Normalised quadratic curve v(t) = c0 + c1 t + c2 t^2 with exact derivatives.
struct SmoothPath {
    std::vector<Vector> states;
    std::vector<Vector> derivatives;
};

SmoothPath smooth_path(std::size_t dim, const std::vector<double>& times, Rng& rng) {
    const Vector c0 = random_vector(dim, rng);
    const Vector c1 = random_vector(dim, rng);
    const Vector c2 = random_vector(dim, rng);
    SmoothPath p;
    for (double t : times) {
        const Vector v = c0 + t * c1 + t * t * c2;
        const Vector dv = c1 + 2.0 * t * c2;
        const double n = v.norm();
        const double dn = v.dot(dv).real() / n;
        p.states.push_back(v / n);
        p.derivatives.push_back(dv / n - v * (dn / (n * n)));
    }
    return p;
}

// ---------------------------------------------------------------- 1-3

// Hand oracles with their own constants: tau = m_p^2 R / m^2 for one lump
// with |Phi_12| = G m / R.
constexpr double kOraclePlanck = 1.220890e19;       // GeV
constexpr double kOracleSecond = 1.519267447e24;    // 1/GeV per s
constexpr double kOracleFermi = 1e-15 / 1.973269804e-16;  // 1/GeV per fm
constexpr double kOracleGram = 5.60958860e23;       // GeV per g

CriterionResult criterion_1(const VerifyOptions&) {
    CriterionResult r{1, "collapse-time estimates for an electron and a 100-nucleon nucleus", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = gravity::collapse_time(gravity::electron());
    gravity::MassConfiguration nucleus;
    nucleus.total_mass = 100.0;
    nucleus.smearing_radius = 1.0 / nucleus.total_mass;
    const auto n = gravity::collapse_time(nucleus);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    r.checks.push_back(within_factor("electron tau [s]", e.tau_seconds, 7e23, 1.5));
    r.checks.push_back(within_factor("nucleus tau [s]", n.tau_seconds, 1e8, 10.0));
    const double me = 5.1099895e-4;
    const double oracle_e = kOraclePlanck * kOraclePlanck / (me * me * me) / kOracleSecond;
    const double oracle_n = kOraclePlanck * kOraclePlanck / 1e6 / kOracleSecond;
    r.checks.push_back(le("electron tau vs hand oracle, relative", rel(e.tau_seconds, oracle_e), 1e-9));
    r.checks.push_back(le("nucleus tau vs hand oracle, relative", rel(n.tau_seconds, oracle_n), 1e-9));
    r.checks.push_back(le("runtime [s]", secs, 1.0));
    return r;
}

gravity::MassConfiguration silicon(double fraction) {
    gravity::MassConfiguration c;
    c.total_mass = 27.9769265 * 0.93149410242;  // 28Si nucleus, GeV
    c.smearing_radius = units::metres_to_natural(4e-15);
    c.displacement = units::metres_to_natural(10e-15);
    c.entangled_fraction = fraction;
    return c;
}

CriterionResult criterion_2(const VerifyOptions&) {
    CriterionResult r{2, "coherent mass for a 1 s collapse time, silicon-like nuclei", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const double tau = units::seconds_to_natural(1.0);
    const double full = units::natural_to_grams(gravity::required_mass(tau, silicon(1.0))) * 1e9;
    const double part = units::natural_to_grams(gravity::required_mass(tau, silicon(0.2))) * 1e9;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    r.checks.push_back(within_factor("required mass, f = 1 [ng]", full, 0.2, 3.0));
    r.checks.push_back(within_factor("required mass, f = 0.2 [ng]", part, 1.0, 3.0));
    // M = R m_p^2 / (tau f m), the sphere overlap being zero at d = 10 fm > 2R.
    const double m = 27.9769265 * 0.93149410242;
    const double oracle = 4.0 * kOracleFermi * kOraclePlanck * kOraclePlanck / (kOracleSecond * m) /
                          kOracleGram * 1e9;
    r.checks.push_back(le("f = 1 vs hand oracle, relative", rel(full, oracle), 1e-9));
    r.checks.push_back(le("f = 0.2 vs hand oracle, relative", rel(part, oracle / 0.2), 1e-9));
    r.checks.push_back(le("runtime [s]", secs, 1.0));
    return r;
}

CriterionResult criterion_3(const VerifyOptions&) {
    CriterionResult r{3, "qubit counts for a 1 s collapse time, 1e6 electrons per qubit", {}, 0.0};
    const double tau = units::seconds_to_natural(1.0);
    const double ent = gravity::qubit_estimate(1000000, tau, gravity::QubitScaling::entangled);
    const double prod = gravity::qubit_estimate(1000000, tau, gravity::QubitScaling::product);
    r.checks.push_back(within_factor("entangled qubits", ent, 1e17, 10.0));
    r.checks.push_back(within_factor("product qubits", prod, 1e35, 10.0));
    // Entangled: n N m_e |Phi| tau = 1 with |Phi| = (m_e / m_p)^2.
    const double me = 5.1099895e-4;
    const double oracle = kOraclePlanck * kOraclePlanck / (me * me * me) / kOracleSecond / 1e6;
    r.checks.push_back(le("entangled vs hand oracle, relative", rel(ent, oracle), 1e-9));
    r.checks.push_back(le("product vs entangled^2, relative", rel(prod, oracle * oracle), 1e-9));
    return r;
}

// ---------------------------------------------------------------- 4-6

// Closed forms derived from the four components of the product path: the
// |12>, |21> components each carry residual m Phi_12 w / 2 (w = |a1 a2|), and
// <psi|R> = m Phi_12 w^2.
double oracle_pre(double m, double phi12, double w) { return m * std::abs(phi12) * w / std::sqrt(2.0); }
double oracle_post(double m, double phi12, double w) {
    return m * std::abs(phi12) * std::sqrt(std::max(0.0, w * w / 2.0 - w * w * w * w));
}

double max_dev(const std::vector<double>& xs, double target) {
    double d = 0.0;
    for (double x : xs) d = std::max(d, std::abs(x - target));
    return d;
}

CriterionResult criterion_4(const VerifyOptions&) {
    CriterionResult r{4, "two-branch product path residual vs closed forms", {}, 0.0};
    Rng rng(4);
    double worst_pre = 0.0;
    double worst_post = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Vector a = random_vector(2, rng).normalized();
        paths::TwoBranchConfig cfg;
        cfg.alpha1 = a(0);
        cfg.alpha2 = a(1);
        cfg.mass = 0.5 + 1.5 * rng.uniform();
        cfg.phi1 = -0.05 * rng.uniform();
        cfg.phi2 = -0.05 * rng.uniform();
        const auto model = paths::two_branch_model(cfg, 2001);
        const Hamiltonian h(model.hamiltonian);
        const auto pre = residual::residual_norms(model.product_path, h);
        const auto post = residual::residual_norms(residual::energy_gauge(model.product_path, h), h);
        const double w = std::abs(cfg.alpha1 * cfg.alpha2);
        worst_pre = std::max(worst_pre, max_dev(pre, oracle_pre(cfg.mass, cfg.phi12(), w)));
        worst_post = std::max(worst_post, max_dev(post, oracle_post(cfg.mass, cfg.phi12(), w)));
    }
    r.checks.push_back(le("max |numeric - closed form| pre-gauge, 50 configs", worst_pre, 1e-8));
    r.checks.push_back(le("max |numeric - closed form| post-gauge, 50 configs", worst_post, 1e-6));

    auto vanishing = [&r](const std::string& what, paths::TwoBranchConfig cfg) {
        const auto model = paths::two_branch_model(cfg, 1001);
        const Hamiltonian h(model.hamiltonian);
        const auto pre = residual::residual_norms(model.product_path, h);
        const auto post = residual::residual_norms(residual::energy_gauge(model.product_path, h), h);
        r.checks.push_back(le(what + ", max ||R|| pre-gauge", *std::max_element(pre.begin(), pre.end()), 1e-12));
        r.checks.push_back(le(what + ", max ||R|| post-gauge", *std::max_element(post.begin(), post.end()), 1e-12));
    };
    paths::TwoBranchConfig single;
    single.alpha1 = Complex(0.6, 0.8);
    single.alpha2 = 0.0;
    single.mass = 1.0;
    single.phi1 = -0.01;
    single.phi2 = -0.015;
    vanishing("single branch", single);
    paths::TwoBranchConfig flat;
    flat.alpha1 = 0.6;
    flat.alpha2 = Complex(0.0, 0.8);
    flat.mass = 1.0;
    vanishing("zero potentials", flat);
    return r;
}

CriterionResult criterion_5(const VerifyOptions&) {
    CriterionResult r{5, "interacting-residual decomposition vs full tensor-product residual", {}, 0.0};
    Rng rng(5);
    const auto times = paths::uniform_times(0.0, 1.0, 11);
    double worst = 0.0;
    double worst_free = 0.0;
    for (const auto& [da, db] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}}) {
        for (int k = 0; k < 100; ++k) {
            const SmoothPath pa = smooth_path(da, times, rng);
            const SmoothPath pb = smooth_path(db, times, rng);
            const EvolutionPath a(times, pa.states, {}, pa.derivatives);
            const EvolutionPath b(times, pb.states, {}, pb.derivatives);
            const Matrix ha = random_hermitian(da, rng);
            const Matrix hb = random_hermitian(db, rng);
            std::vector<residual::InteractionTerm> terms;
            Matrix v_full = Matrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
            for (int t = 0; t < 2; ++t) {
                const Matrix ia = random_hermitian(da, rng);
                const Matrix ib = random_hermitian(db, rng);
                terms.push_back({Operator::hermitian(ia), Operator::hermitian(ib)});
                v_full += kron(ia, ib);
            }
            const Matrix h_free = kron(ha, Matrix::Identity(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db))) +
                                  kron(Matrix::Identity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da)), hb);
            const auto got = residual::interacting_residual(a, b, Operator::hermitian(ha), Operator::hermitian(hb), terms);
            const auto got_free = residual::interacting_residual(a, b, Operator::hermitian(ha), Operator::hermitian(hb), {});
            for (std::size_t n = 0; n < times.size(); ++n) {
                const Vector psi = kron(pa.states[n], pb.states[n]);
                const Vector dpsi = kron(pa.derivatives[n], pb.states[n]) + kron(pa.states[n], pb.derivatives[n]);
                auto perp2 = [&](const Matrix& h) {
                    const Vector res = Complex(0.0, 1.0) * dpsi - h * psi;
                    return res.squaredNorm() - std::norm(psi.dot(res));
                };
                const double oracle = perp2(h_free + v_full);
                worst = std::max(worst, std::abs(got[n].total() - oracle) / std::max(1.0, oracle));

                // No interaction: the full residual composes from the two
                // subsystem residuals, each in its own energy gauge.
                const double oracle_free = perp2(h_free);
                const double ra = residual::residual_at(a, n, Operator::hermitian(ha)).perp_norm;
                const double rb = residual::residual_at(b, n, Operator::hermitian(hb)).perp_norm;
                const std::vector<double> parts{ra, rb};
                const double composed = residual::compose_separable(parts);
                worst_free = std::max(worst_free, std::abs(composed * composed - oracle_free) / std::max(1.0, oracle_free));
                worst_free = std::max(worst_free, std::abs(got_free[n].total() - oracle_free) / std::max(1.0, oracle_free));
                worst_free = std::max(worst_free, got_free[n].interaction);
            }
        }
    }
    r.checks.push_back(le("max relative |decomposition - full|, 200 instances", worst, 1e-8));
    r.checks.push_back(le("H_int = 0: max relative |Pythagorean - full|", worst_free, 1e-12));

    // n copies of |+> frozen under diag(0, E): each copy has residual E / 2.
    const double e = 1.3;
    const std::vector<double> diag1{0.0, e};
    const Vector plus = Vector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0));
    const EvolutionPath frozen({0.0, 0.5, 1.0}, {plus, plus, plus}, {}, {Vector::Zero(2), Vector::Zero(2), Vector::Zero(2)});
    const double single = residual::residual_at(frozen, 1, Operator::diagonal(diag1)).perp_norm;
    r.checks.push_back(le("single copy residual vs E/2, relative", rel(single, e / 2.0), 1e-12));
    for (std::size_t n : {1u, 4u, 9u, 16u}) {
        const std::vector<double> parts(n, single);
        const double composed = residual::compose_separable(parts);
        // Direct oracle: energy spread of the uniform superposition over 2^n states.
        const std::size_t dim = std::size_t{1} << n;
        double mean = 0.0;
        double second = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double en = e * std::popcount(i);
            mean += en / static_cast<double>(dim);
            second += en * en / static_cast<double>(dim);
        }
        const double spread = std::sqrt(second - mean * mean);
        r.checks.push_back(le("n = " + std::to_string(n) + ": composed / (sqrt(n) r1) - 1",
                              std::abs(composed / (std::sqrt(static_cast<double>(n)) * single) - 1.0), 1e-12));
        r.checks.push_back(le("n = " + std::to_string(n) + ": composed vs energy spread, relative",
                              rel(composed, spread), 1e-12));
        if (n <= 9) {
            std::vector<double> entries(dim);
            for (std::size_t i = 0; i < dim; ++i) entries[i] = e * std::popcount(i);
            const Vector psi = Vector::Constant(static_cast<Eigen::Index>(dim), Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
            const Vector zero = Vector::Zero(static_cast<Eigen::Index>(dim));
            const EvolutionPath full({0.0, 0.5, 1.0}, {psi, psi, psi}, {}, {zero, zero, zero});
            const double direct = residual::residual_at(full, 1, Operator::diagonal(entries)).perp_norm;
            r.checks.push_back(le("n = " + std::to_string(n) + ": full-space residual vs composed, relative",
                                  rel(direct, composed), 1e-12));
        }
    }
    return r;
}

const Operator& two_level_h() {
    static const Operator h = Operator::diagonal(std::vector<double>{0.3, -0.7});
    return h;
}

StateVector rotated_start(double theta_s, double phase) {
    Vector v(2);
    v << std::cos(theta_s), std::polar(std::sin(theta_s), phase);
    return StateVector::normalise(v);
}

// Largest per-node |gauged ||R|| - theta_rate|.
double rate_error(double theta_s, paths::ScheduleShape shape, std::size_t nodes) {
    const auto times = paths::uniform_times(0.0, 1.0, nodes);
    const auto rot = paths::collapse_rotation(rotated_start(theta_s, 0.4), two_level_h(), 1, shape, 0.0, 1.0, times);
    const Hamiltonian h(two_level_h());
    const auto norms = residual::residual_norms(residual::energy_gauge(rot.path, h), h);
    double worst = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        worst = std::max(worst, std::abs(norms[i] - rot.schedule.theta_rate(times[i])));
    }
    return worst;
}

constexpr paths::ScheduleShape kShapes[] = {paths::ScheduleShape::linear, paths::ScheduleShape::smoothstep,
                                            paths::ScheduleShape::sine};
constexpr const char* kShapeNames[] = {"linear", "smoothstep", "sine"};

CriterionResult criterion_6(const VerifyOptions&) {
    CriterionResult r{6, "branch-rotation action and reparametrisation invariance", {}, 0.0};
    const auto times = paths::uniform_times(0.0, 1.0, 4001);
    const Hamiltonian h(two_level_h());
    for (int s = 0; s < 3; ++s) {
        double worst = 0.0;
        for (int k = 1; k <= 5; ++k) {
            const double theta_s = k * kPi / 12.0;
            const auto rot = paths::collapse_rotation(rotated_start(theta_s, 0.4), two_level_h(), 1, kShapes[s], 0.0, 1.0, times);
            const double action = residual::action(rot.path, h).S;
            worst = std::max(worst, std::abs(action - (kPi / 2.0 - theta_s)));
        }
        r.checks.push_back(le(std::string(kShapeNames[s]) + ": max |S - (pi/2 - theta_s)|, 5 angles", worst, 1e-6));
    }
    for (int s = 0; s < 3; ++s) {
        const double coarse = rate_error(kPi / 4.0, kShapes[s], 1001);
        const double fine = rate_error(kPi / 4.0, kShapes[s], 2001);
        const double order = std::log2(coarse / fine);
        r.checks.push_back(le(std::string(kShapeNames[s]) + ": max |||R|| - theta_rate| at 2001 nodes", fine, 1e-5));
        r.checks.push_back(le(std::string(kShapeNames[s]) + ": |observed order - 2| (order " + num(order) + ")",
                              std::abs(order - 2.0), 0.2));
    }
    return r;
}

// ---------------------------------------------------------------- 7-9

CriterionResult criterion_7(const VerifyOptions& o) {
    CriterionResult r{7, "path statistic A and rate of a rotation into one branch", {}, 0.0};
    const auto times = paths::uniform_times(0.0, 1.0, 4001);
    const Hamiltonian h(two_level_h());
    double worst_a = 0.0;
    double worst_rate = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double w = k / 10.0;
        const double theta_s = std::asin(std::sqrt(w));
        const auto rot = paths::collapse_rotation(rotated_start(theta_s, 0.3), two_level_h(), 1,
                                                  paths::ScheduleShape::linear, 0.0, 1.0, times);
        const auto stat = born::statistic_A(rot.path, h, rot.reference);
        const double rate = stat.rate * (1.0 + o.rate_perturbation);
        worst_a = std::max(worst_a, std::abs(stat.A + 0.5 * std::log(w)));
        worst_rate = std::max(worst_rate, std::abs(rate - w));
    }
    r.checks.push_back(le("max |A + ln|alpha_2||, |alpha_2|^2 = 0.1 .. 0.9", worst_a, 1e-6));
    r.checks.push_back(le("max |r - |alpha_2|^2|", worst_rate, 1e-6));
    return r;
}

std::vector<double> born_weights(std::size_t d) {
    Rng rng(800 + d);
    std::vector<double> w(d);
    double total = 0.0;
    for (double& x : w) total += (x = 0.05 + rng.uniform());
    for (double& x : w) x /= total;
    return w;
}

CriterionResult criterion_8(const VerifyOptions& o) {
    CriterionResult r{8, "exponential race reproduces Born weights", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned threads = thread_count(o);
    for (std::size_t d : {2u, 3u, 5u, 8u}) {
        const auto w = born_weights(d);
        std::vector<double> rates;
        for (double x : w) rates.push_back(born::PathStatistic::from_A(-0.5 * std::log(x)).rate);
        rates[0] *= 1.0 + o.rate_perturbation;
        const auto closed = born::race_closed_form(rates);
        double dev = 0.0;
        for (std::size_t i = 0; i < d; ++i) dev = std::max(dev, std::abs(closed[i] - w[i]));
        r.checks.push_back(le("D = " + std::to_string(d) + ": max |P_I - |alpha_I|^2|", dev, 1e-12));

        int passing = 0;
        double worst_z = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto freq = born::race_sample(rates, 1000000, seed * 1000 + d, threads);
            double z = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double sigma = std::sqrt(w[i] * (1.0 - w[i]) / 1e6);
                z = std::max(z, std::abs(freq.frequencies[i] - w[i]) / sigma);
            }
            worst_z = std::max(worst_z, z);
            if (z <= 4.0) ++passing;
        }
        r.checks.push_back(le("D = " + std::to_string(d) + ": seeds outside 4 sigma of 20 (worst " + num(worst_z) + " sigma)",
                              20.0 - passing, 1.0));
    }

    // A over consecutive segments of one rotation adds, so rates multiply.
    const auto times = paths::uniform_times(0.0, 1.0, 4001);
    const Hamiltonian h(two_level_h());
    const auto rot = paths::collapse_rotation(rotated_start(std::asin(std::sqrt(0.3)), 0.0), two_level_h(), 1,
                                              paths::ScheduleShape::smoothstep, 0.0, 1.0, times);
    const auto integrand = born::statistic_integrand(rot.path, h, rot.reference);
    const std::size_t split = 1600;
    const std::span<const double> t_all(times);
    const std::span<const double> f_all(integrand);
    const double a_total = quadrature::integrate_samples(t_all, f_all);
    const double a1 = quadrature::integrate_samples(t_all.first(split + 1), f_all.first(split + 1));
    const double a2 = quadrature::integrate_samples(t_all.subspan(split), f_all.subspan(split));
    r.checks.push_back(le("segments: |r_total - r_1 r_2| / r_total",
                          rel(std::exp(-2.0 * a1) * std::exp(-2.0 * a2), std::exp(-2.0 * a_total)), 1e-10));

    // Two local rotations in sequence (drop branch 1, then branch 2) against
    // one rotation straight into branch 3. With H = 0 each is a two-level
    // rotation in the basis adapted to it. Weights are 0.2, 0.3, 0.5.
    const Operator zero = Operator::zero(2);
    const Hamiltonian h0(zero);
    auto rate_into_second = [&](double w_second) {
        const auto rr = paths::collapse_rotation(rotated_start(std::asin(std::sqrt(w_second)), 0.0), zero, 1,
                                                 paths::ScheduleShape::linear, 0.0, 1.0, times);
        return born::statistic_A(rr.path, h0, rr.reference).rate;
    };
    const double w2 = 0.3;
    const double w3 = 0.5;
    const double r1 = rate_into_second(w2 + w3);
    const double r2 = rate_into_second(w3 / (w2 + w3));
    const double direct = rate_into_second(w3);
    r.checks.push_back(le("sequential rotations: |r_1 r_2 - r_direct| (quadrature)", std::abs(r1 * r2 - direct), 1e-6));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(le("runtime [s]", secs, 30.0));
    return r;
}

CriterionResult criterion_9(const VerifyOptions&) {
    CriterionResult r{9, "weak measurement completeness and projective limit", {}, 0.0};
    Rng rng(9);
    const StateVector q = random_state(3, rng);
    double defect = 0.0;
    for (int k = 0; k <= 10; ++k) defect = std::max(defect, born::WeakMeasurement(q, k / 10.0).completeness_defect());
    r.checks.push_back(le("max completeness defect, p = 0, 0.1 .. 1", defect, 1e-12));

    const born::WeakMeasurement projective(q, 1.0);
    double prob_dev = 0.0;
    double post_dev = 0.0;
    bool saw_plus = false;
    bool saw_minus = false;
    for (std::uint64_t s = 0; s < 40; ++s) {
        const StateVector psi = random_state(3, rng);
        const Complex overlap = q.amplitudes().dot(psi.amplitudes());
        const auto res = born::weak_measure(projective, psi, s);
        prob_dev = std::max(prob_dev, std::abs(res.p_plus - std::norm(overlap)));
        const Vector expected = res.outcome == born::Outcome::plus
                                    ? Vector(q.amplitudes())
                                    : Vector((psi.amplitudes() - overlap * q.amplitudes()).normalized());
        post_dev = std::max(post_dev, std::abs(1.0 - std::abs(expected.dot(res.post_state.amplitudes()))));
        (res.outcome == born::Outcome::plus ? saw_plus : saw_minus) = true;
    }
    r.checks.push_back(le("p = 1: max |p_plus - |<q|psi>|^2|", prob_dev, 1e-12));
    r.checks.push_back(le("p = 1: max post-state infidelity vs projector", post_dev, 1e-12));
    r.checks.push_back(flag("p = 1: both outcomes exercised", saw_plus && saw_minus));
    const auto on_q = born::weak_measure(projective, q, 7);
    r.checks.push_back(flag("p = 1 on |q>: always detected", on_q.outcome == born::Outcome::plus && on_q.p_plus > 1.0 - 1e-12));

    const double p = 0.3;
    const born::WeakMeasurement weak(q, p);
    Rng draws(99);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        if (born::weak_measure(weak, q, draws).outcome == born::Outcome::plus) ++hits;
    }
    const double f = static_cast<double>(hits) / n;
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    r.checks.push_back(le("detection frequency on |q> (" + num(f) + "), |f - p| / sigma", std::abs(f - p) / sigma, 4.0));
    return r;
}

// ---------------------------------------------------------------- 10

Eigen::Vector3d in_ball(Rng& rng) {
    for (;;) {
        const Eigen::Vector3d v(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        if (v.squaredNorm() <= 1.0) return v;
    }
}

struct McPair {
    double self = 0.0;   // <1 / |x - y|>
    double cross = 0.0;  // <1 / |x - y + d z|>
};

// Uniform unit balls, fixed block partition so threads do not change the result.
McPair mc_unit_spheres(double d, std::uint64_t samples, unsigned threads) {
    constexpr std::uint64_t blocks = 64;
    std::vector<McPair> partial(blocks);
    const Rng root(1010);
    auto work = [&](unsigned w) {
        for (std::uint64_t b = w; b < blocks; b += threads) {
            Rng rng = root.split(b);
            const std::uint64_t n = samples / blocks;
            double s = 0.0;
            double c = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                const Eigen::Vector3d x = in_ball(rng);
                const Eigen::Vector3d y = in_ball(rng);
                Eigen::Vector3d sep = x - y;
                s += 1.0 / sep.norm();
                sep.z() += d;
                c += 1.0 / sep.norm();
            }
            partial[b] = {s / static_cast<double>(n), c / static_cast<double>(n)};
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    McPair out;
    for (const auto& p : partial) {
        out.self += p.self / blocks;
        out.cross += p.cross / blocks;
    }
    return out;
}

CriterionResult criterion_10(const VerifyOptions& o) {
    CriterionResult r{10, "Penrose self-energy: zero displacement, far field, gradient form", {}, 0.0};
    const double g = 1.0;
    const auto sphere = gravity::MassProfile::uniform_sphere(1.0, 1.0);
    r.checks.push_back(le("E_pen(d = 0)", std::abs(gravity::penrose_self_energy(sphere, 0.0, 0.5, g).e_pen), 1e-15));

    const double d = 20.0;
    const auto mc = mc_unit_spheres(d, 10000000, thread_count(o));
    const double e_mc = g * (mc.self - mc.cross);
    const double e_pen = gravity::penrose_self_energy(sphere, d, 0.5, g).e_pen;
    const double far = gravity::penrose_far_field(sphere, d, g);
    r.checks.push_back(le("d = 20R: |E_pen - E_MC| / E_MC (E_MC = " + num(e_mc) + ")", rel(e_pen, e_mc), 0.01));
    r.checks.push_back(le("d = 20R: |(2U_self - Gm^2/d) - E_MC| / E_MC", rel(far, e_mc), 0.01));
    // The 2Gm^2/d variant counts the cross term twice; shown for reference.
    const double doubled = g * sphere.self_interaction() - 2.0 * g / d;
    r.checks.push_back(info("d = 20R: |(2U_self - 2Gm^2/d) - E_MC| / E_MC", rel(doubled, e_mc), 0.01));

    const auto gauss = gravity::MassProfile::gaussian(1.0, 1.0);
    for (const auto& [name, prof, sep] : {std::tuple<const char*, gravity::MassProfile, double>{"gaussian", gauss, 0.5},
                                          {"gaussian", gauss, 3.0},
                                          {"sphere", sphere, 1.0},
                                          {"sphere", sphere, 3.0}}) {
        const double field = gravity::field_energy(prof, sep, 1e-10, g);
        const double direct = gravity::penrose_self_energy(prof, sep, 0.5, g).e_pen;
        r.checks.push_back(le(std::string(name) + " d = " + num(sep) + ": gradient form vs double integral, relative",
                              rel(field, direct), 1e-4));
    }
    return r;
}

// ---------------------------------------------------------------- 11

CriterionResult criterion_11(const VerifyOptions&) {
    CriterionResult r{11, "Schrodinger-Newton solver on a 2000-point grid", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    constexpr std::size_t n = 2000;

    const auto gs = sn::ground_state(sn::RadialGrid::make(40.0, n, 1.0, 1.0));
    double rise = 0.0;
    for (std::size_t i = 1; i < gs.energy_history.size(); ++i) {
        rise = std::max(rise, gs.energy_history[i] - gs.energy_history[i - 1]);
    }
    r.checks.push_back(le("imaginary time: largest energy increase per step", rise, 1e-12 * std::abs(gs.energy)));
    r.checks.push_back(le("ground state plug-back residual", sn::stationary_residual(gs.state), 1e-6));

    const auto scaled = sn::ground_state(sn::RadialGrid::make(10.0, n, 2.0, 0.5));
    r.checks.push_back(le("E(m=2, G=0.5) / (G^2 m^5 E(1, 1)) - 1", std::abs(scaled.energy / (8.0 * gs.energy) - 1.0), 1e-4));

    const auto evolved = sn::evolve_real(gs.state, 0.01, 1000);
    r.checks.push_back(le("norm drift over 1000 real-time steps", std::abs(evolved.norm() - gs.state.norm()), 1e-8));

    // Free spreading of |psi|^2 with per-axis width sigma0: sigma(t) =
    // sigma0 sqrt(1 + (t / (2 m sigma0^2))^2).
    auto wave = sn::RadialGrid::make(20.0, n, 1.0, 0.0);
    sn::set_gaussian(wave, 1.0);
    const double sigma0 = wave.rms_width();
    const double t_spread = 2.0 * sigma0 * sigma0;
    const double dt = 0.002;
    const auto chunk = static_cast<std::size_t>(std::lround(t_spread / 10.0 / dt));
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) {
        wave = sn::evolve_real(wave, dt, chunk);
        const double t = k * chunk * dt;
        const double expected = sigma0 * std::sqrt(1.0 + (t / t_spread) * (t / t_spread));
        worst = std::max(worst, rel(wave.rms_width(), expected));
    }
    r.checks.push_back(le("G = 0 spreading: max relative width error over one spreading time", worst, 0.01));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(le("runtime [s]", secs, 60.0));
    return r;
}

// ---------------------------------------------------------------- 12

CriterionResult criterion_12(const VerifyOptions&) {
    CriterionResult r{12, "separation scaling: phase rate vs self-energy", {}, 0.0};
    for (const auto profile : {gravity::Profile::uniform_sphere, gravity::Profile::gaussian}) {
        const std::string name = profile == gravity::Profile::uniform_sphere ? "sphere" : "gaussian";
        gravity::MassConfiguration cfg;
        cfg.total_mass = units::grams_to_natural(1e-12);
        cfg.smearing_radius = units::metres_to_natural(1e-7);
        cfg.profile = profile;
        const double big_r = cfg.smearing_radius;
        const double e_inf = units::kNewtonG * cfg.lump_profile().self_interaction();
        for (double k : {10.0, 20.0}) {
            auto at = [&](double d) {
                gravity::MassConfiguration c = cfg;
                c.displacement = d;
                return std::pair{gravity::phase_rate(c), gravity::penrose_self_energy(c).e_pen};
            };
            const auto [rate1, e1] = at(k * big_r);
            const auto [rate2, e2] = at(2.0 * k * big_r);
            r.checks.push_back(le(name + " d = " + num(k) + "R: |rate(d) / rate(2d) - 1|", std::abs(rate1 / rate2 - 1.0), 1e-6));
            const double ratio = (e_inf - e1) / (e_inf - e2);
            r.checks.push_back(le(name + " d = " + num(k) + "R: |deviation ratio - 2| / 2 (ratio " + num(ratio) + ")",
                                  std::abs(ratio / 2.0 - 1.0), 0.05));
        }
    }
    return r;
}

// ---------------------------------------------------------------- 13

std::string render_run(const scenario::Scenario& s) {
    const auto res = runner::run(s);
    std::string out = csv::render(res.table);
    for (const auto& line : res.summary) out += line + "\n";
    return out;
}

CriterionResult criterion_13(const VerifyOptions& o) {
    CriterionResult r{13, "bundled scenarios are deterministic and round-trip", {}, 0.0};
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    if (!o.scenario_dir.empty()) {
        for (const auto& entry : std::filesystem::directory_iterator(o.scenario_dir, ec)) {
            if (entry.path().extension() == ".scn") files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    r.checks.push_back(flag("bundled scenarios found in '" + o.scenario_dir + "': " + std::to_string(files.size()),
                            !files.empty()));
    for (const auto& f : files) {
        const auto s = scenario::parse_file(f.string());
        const std::string text = scenario::serialise(s);
        const bool round_trip = scenario::serialise(scenario::parse(text, f.string())) == text;
        const bool same = render_run(s) == render_run(s);
        r.checks.push_back(flag(s.name + ": identical output across two runs", same));
        r.checks.push_back(flag(s.name + ": serialise/parse round trip", round_trip));
    }
    return r;
}

}  // namespace

bool CriterionResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass || c.informational; });
}

std::vector<std::string> suite_names() { return {"residual", "born", "gravity", "sn", "all"}; }

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "residual") return {4, 5, 6};
    if (suite == "born") return {7, 8, 9};
    if (suite == "gravity") return {1, 2, 3, 10, 12};
    if (suite == "sn") return {11};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
    throw ParseError("unknown suite '" + suite + "' (expected residual, born, gravity, sn or all)");
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
    using Fn = CriterionResult (*)(const VerifyOptions&);
    static constexpr Fn table[] = {criterion_1, criterion_2,  criterion_3,  criterion_4, criterion_5,
                                   criterion_6, criterion_7,  criterion_8,  criterion_9, criterion_10,
                                   criterion_11, criterion_12, criterion_13};
    if (id < 1 || id > 13) throw ParseError("unknown criterion " + std::to_string(id));
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = table[id - 1](options);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string format(const CriterionResult& result, bool with_checks) {
    char head[512];
    std::snprintf(head, sizeof head, "%s %2d  %s  (%.2f s)\n", result.pass() ? "PASS" : "FAIL", result.id,
                  result.title.c_str(), result.seconds);
    std::string out = head;
    if (!with_checks) return out;
    for (const auto& c : result.checks) {
        const char* tag = c.informational ? "info" : (c.pass ? "ok  " : "FAIL");
        out += "        " + std::string(tag) + "  " + c.name + ": " + num(c.measured) + " (limit " + num(c.limit) + ")\n";
    }
    return out;
}

}  // namespace gcollapse::verify
