#include "gcollapse/hilbert.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gcollapse/error.hpp"

namespace gcollapse::hilbert {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(msg.str());
    }
}

}  // namespace

StateVector::StateVector(Vector amplitudes, VectorRole role, std::vector<std::string> labels)
    : amplitudes_(std::move(amplitudes)), role_(role), labels_(std::move(labels)) {
    if (amplitudes_.size() == 0) {
        throw DimensionError("StateVector: dimension must be positive");
    }
    if (!labels_.empty() && labels_.size() != dim()) {
        throw DimensionError("StateVector: one basis label per amplitude required");
    }
}

StateVector StateVector::normalised(Vector amplitudes, std::vector<std::string> labels) {
    const double n2 = amplitudes.squaredNorm();
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "StateVector: expected a normalised state, got <psi|psi> = " << n2;
        throw PhysicsError(msg.str());
    }
    return StateVector(std::move(amplitudes), VectorRole::normalised, std::move(labels));
}

StateVector StateVector::normalise(Vector amplitudes, std::vector<std::string> labels) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw PhysicsError("StateVector: cannot normalise a zero or non-finite vector");
    }
    amplitudes /= n;
    return StateVector(std::move(amplitudes), VectorRole::normalised, std::move(labels));
}

StateVector StateVector::unnormalised(Vector amplitudes, std::vector<std::string> labels) {
    return StateVector(std::move(amplitudes), VectorRole::unnormalised, std::move(labels));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("StateVector::basis: index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v), VectorRole::normalised, {});
}

Operator::Operator(Matrix entries, OperatorKind kind) : entries_(std::move(entries)), kind_(kind) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw DimensionError("Operator: entries must form a non-empty square matrix");
    }
}

Operator Operator::hermitian(Matrix entries) {
    if (entries.rows() != entries.cols()) {
        throw DimensionError("Operator: entries must form a square matrix");
    }
    const double defect = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (defect > kHermitianTolerance) {
        std::ostringstream msg;
        msg << "Operator: matrix is not Hermitian (max |H - H^dagger| = " << defect << ")";
        throw PhysicsError(msg.str());
    }
    return Operator(std::move(entries), OperatorKind::hermitian);
}

Operator Operator::general(Matrix entries) {
    return Operator(std::move(entries), OperatorKind::general);
}

Operator Operator::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Identity(n, n), OperatorKind::hermitian);
}

Operator Operator::zero(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Zero(n, n), OperatorKind::hermitian);
}

Operator Operator::diagonal(std::span<const double> entries) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = entries[static_cast<std::size_t>(i)];
    }
    return Operator(std::move(m), OperatorKind::hermitian);
}

std::size_t TensorFactorization::total_dim() const {
    return std::accumulate(factor_dims.begin(), factor_dims.end(), std::size_t{1},
                           std::multiplies<>{});
}

Complex inner(const StateVector& u, const StateVector& v) {
    require_same_dim(u.dim(), v.dim(), "inner");
    return u.amplitudes().dot(v.amplitudes());  // Eigen conjugates the left operand
}

StateVector tensor(const StateVector& u, const StateVector& v) {
    const auto a = static_cast<Eigen::Index>(u.dim());
    const auto b = static_cast<Eigen::Index>(v.dim());
    Vector out(a * b);
    for (Eigen::Index i = 0; i < a; ++i) {
        out.segment(i * b, b) = u.amplitudes()(i) * v.amplitudes();
    }
    std::vector<std::string> labels;
    if (!u.labels().empty() && !v.labels().empty()) {
        labels.reserve(static_cast<std::size_t>(a * b));
        for (const auto& lu : u.labels()) {
            for (const auto& lv : v.labels()) {
                labels.push_back(lu + lv);
            }
        }
    }
    if (u.is_normalised() && v.is_normalised()) {
        // Product of unit vectors; rounding can push the norm by a few ulps.
        return StateVector::normalise(std::move(out), std::move(labels));
    }
    return StateVector::unnormalised(std::move(out), std::move(labels));
}

Operator tensor(const Operator& a, const Operator& b) {
    const auto na = static_cast<Eigen::Index>(a.dim());
    const auto nb = static_cast<Eigen::Index>(b.dim());
    Matrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
        }
    }
    if (a.is_hermitian() && b.is_hermitian()) {
        return Operator::hermitian(std::move(out));
    }
    return Operator::general(std::move(out));
}

StateVector apply(const Operator& op, const StateVector& v) {
    require_same_dim(op.dim(), v.dim(), "apply");
    return StateVector::unnormalised(op.matrix() * v.amplitudes());
}

StateVector parallel_component(const StateVector& w, const StateVector& v) {
    const Complex c = inner(v, w);
    return StateVector::unnormalised(c * v.amplitudes());
}

StateVector perpendicular_component(const StateVector& w, const StateVector& v) {
    const Complex c = inner(v, w);
    return StateVector::unnormalised(w.amplitudes() - c * v.amplitudes());
}

Operator partial_expectation(const Operator& op, std::size_t factor, const StateVector& state,
                             const TensorFactorization& factorization) {
    const auto& dims = factorization.factor_dims;
    if (factor >= dims.size()) {
        throw DimensionError("partial_expectation: factor index out of range");
    }
    require_same_dim(op.dim(), factorization.total_dim(), "partial_expectation (operator)");
    require_same_dim(state.dim(), dims[factor], "partial_expectation (factor state)");

    std::size_t prefix = 1;
    for (std::size_t j = 0; j < factor; ++j) prefix *= dims[j];
    std::size_t suffix = 1;
    for (std::size_t j = factor + 1; j < dims.size(); ++j) suffix *= dims[j];
    const std::size_t df = dims[factor];
    const std::size_t rem = prefix * suffix;

    auto full_index = [&](std::size_t reduced, std::size_t s) {
        const std::size_t p = reduced / suffix;
        const std::size_t q = reduced % suffix;
        return static_cast<Eigen::Index>((p * df + s) * suffix + q);
    };

    const auto& phi = state.amplitudes();
    const auto& h = op.matrix();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rem), static_cast<Eigen::Index>(rem));
    for (std::size_t a = 0; a < rem; ++a) {
        for (std::size_t b = 0; b < rem; ++b) {
            Complex acc = 0.0;
            for (std::size_t s = 0; s < df; ++s) {
                const Complex left = std::conj(phi(static_cast<Eigen::Index>(s)));
                for (std::size_t t = 0; t < df; ++t) {
                    acc += left * h(full_index(a, s), full_index(b, t)) *
                           phi(static_cast<Eigen::Index>(t));
                }
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    if (op.is_hermitian()) {
        // Exact Hermitian symmetry up to rounding; symmetrise so the flag holds.
        Matrix sym = 0.5 * (out + out.adjoint());
        return Operator::hermitian(std::move(sym));
    }
    return Operator::general(std::move(out));
}

Complex expectation(const Operator& op, const StateVector& v) {
    require_same_dim(op.dim(), v.dim(), "expectation");
    return v.amplitudes().dot(op.matrix() * v.amplitudes());
}

}  // namespace gcollapse::hilbert
