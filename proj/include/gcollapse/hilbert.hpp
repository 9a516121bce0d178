#pragma once

// Finite-dimensional Hilbert-space kernel.
//
// Kronecker convention: the leftmost factor is the slowest-varying index, so
// for u in C^a and v in C^b, (u (x) v)[i*b + j] = u[i] * v[j]. Every module that
// builds product states or product operators inherits this order.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gcollapse::hilbert {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;

enum class VectorRole {
    normalised,    // a quantum state, <psi|psi> = 1
    unnormalised,  // residuals, operator images, scratch vectors
};

class StateVector {
public:
    StateVector() = default;

    // Throws PhysicsError if | <v|v> - 1 | exceeds kNormTolerance.
    static StateVector normalised(Vector amplitudes, std::vector<std::string> labels = {});
    // Rescales to unit norm; throws PhysicsError on a zero vector.
    static StateVector normalise(Vector amplitudes, std::vector<std::string> labels = {});
    static StateVector unnormalised(Vector amplitudes, std::vector<std::string> labels = {});
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
    VectorRole role() const { return role_; }
    bool is_normalised() const { return role_ == VectorRole::normalised; }
    const std::vector<std::string>& labels() const { return labels_; }
    double norm() const { return amplitudes_.norm(); }

private:
    StateVector(Vector amplitudes, VectorRole role, std::vector<std::string> labels);

    Vector amplitudes_;
    VectorRole role_ = VectorRole::unnormalised;
    std::vector<std::string> labels_;
};

enum class OperatorKind {
    hermitian,
    general,  // e.g. the weak-measurement Kraus operators
};

class Operator {
public:
    Operator() = default;

    // Throws PhysicsError if the matrix is not Hermitian within kHermitianTolerance.
    static Operator hermitian(Matrix entries);
    static Operator general(Matrix entries);
    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim);
    static Operator diagonal(std::span<const double> entries);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }
    OperatorKind kind() const { return kind_; }
    bool is_hermitian() const { return kind_ == OperatorKind::hermitian; }

private:
    Operator(Matrix entries, OperatorKind kind);

    Matrix entries_;
    OperatorKind kind_ = OperatorKind::general;
};

// Factor dimensions of a product space, leftmost slowest.
struct TensorFactorization {
    std::vector<std::size_t> factor_dims;

    std::size_t total_dim() const;
};

// <u|v>, conjugate-linear in u.
Complex inner(const StateVector& u, const StateVector& v);

StateVector tensor(const StateVector& u, const StateVector& v);
Operator tensor(const Operator& a, const Operator& b);

StateVector apply(const Operator& op, const StateVector& v);

// Component of w along the normalised v, and the remainder.
StateVector parallel_component(const StateVector& w, const StateVector& v);
StateVector perpendicular_component(const StateVector& w, const StateVector& v);

// Contracts `op` (acting on the full product space) with `state` on the factor
// `factor` from both sides, giving the operator <state| op |state> on the
// remaining factors in their original order.
Operator partial_expectation(const Operator& op, std::size_t factor, const StateVector& state,
                             const TensorFactorization& factorization);

// Expectation <v|op|v> for a normalised v.
Complex expectation(const Operator& op, const StateVector& v);

}  // namespace gcollapse::hilbert
