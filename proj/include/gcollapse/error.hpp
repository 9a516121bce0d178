#pragma once

#include <stdexcept>
#include <string>

namespace gcollapse {

// Base of every library error. The CLI maps the concrete type to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand shapes do not fit together (vector/operator dims, factorisations).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Inputs violate a physical contract: non-normalised amplitudes, p outside [0,1],
// negative residual norms, unsmeared point sources.
class PhysicsError : public Error {
public:
    using Error::Error;
};

// Iterative solvers that fail to settle, or integrators whose invariants drift.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Scenario text that cannot be parsed or validated.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace gcollapse
