#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rpmem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad ProjectionSpec or malformed domain object.
struct InvalidSpecError : Error {
    using Error::Error;
};

// Vector/matrix shape disagreement.
struct DimensionError : Error {
    using Error::Error;
};

// Argument outside a formula's validity range (e.g. x >= k, tau >= d).
struct OutOfRangeError : Error {
    using Error::Error;
};

// Inconsistent geometry input (d > D, non-unit cone data, empty set).
struct GeometryError : Error {
    using Error::Error;
};

// Query point not representable in the cone.
struct MembershipError : GeometryError {
    using GeometryError::GeometryError;
};

// Experiment generator or fixed-input contract violated.
struct ContractError : Error {
    using Error::Error;
};

// Iterative solver hit its iteration cap. Carries the best iterate so the
// caller can inspect how close it got.
struct SolverError : Error {
    SolverError(const std::string& what, double best_value,
                std::vector<double> best_point)
        : Error(what), best_value(best_value), best_point(std::move(best_point)) {}

    double best_value;
    std::vector<double> best_point;
};

}  // namespace rpmem
