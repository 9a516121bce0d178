#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "gcollapse/hilbert.hpp"
#include "gcollapse/rng.hpp"

namespace testing {

using gcollapse::Rng;
using gcollapse::hilbert::Complex;
using gcollapse::hilbert::Matrix;
using gcollapse::hilbert::Vector;

inline Vector random_vector(Eigen::Index dim, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
    return v;
}

inline Vector random_unit(Eigen::Index dim, Rng& rng) { return random_vector(dim, rng).normalized(); }

inline Matrix random_hermitian(Eigen::Index dim, Rng& rng) {
    Matrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) m.col(j) = random_vector(dim, rng);
    return 0.5 * (m + m.adjoint());
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
