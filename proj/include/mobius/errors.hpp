#pragma once

#include <stdexcept>
#include <string>

namespace mobius {

// Shape or dimension disagreement between operands.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Operands live over different scalar fields.
struct TagMismatchError : std::runtime_error {
    explicit TagMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// Elimination hit a pivot below threshold; carries the failing pivot magnitude.
struct SingularMatrixError : std::runtime_error {
    double pivot;
    explicit SingularMatrixError(double pivot_magnitude)
        : std::runtime_error("singular matrix, pivot magnitude " + std::to_string(pivot_magnitude)),
          pivot(pivot_magnitude) {}
};

// A matrix failed a group-membership precondition.
struct MembershipError : std::runtime_error {
    double residual;
    MembershipError(const std::string& what, double res)
        : std::runtime_error(what + " (residual " + std::to_string(res) + ")"), residual(res) {}
};

// A vector failed the tangency precondition at its base point.
struct TangencyError : std::runtime_error {
    double residual;
    explicit TangencyError(double res)
        : std::runtime_error("vector is not tangent (algebra residual " + std::to_string(res) + ")"),
          residual(res) {}
};

// A condition that is mathematically guaranteed for valid inputs failed anyway.
struct InternalInvariantError : std::runtime_error {
    explicit InternalInvariantError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature produced a metric tensor that is not positive definite.
struct DegenerateMetricError : std::runtime_error {
    double min_eigenvalue;
    explicit DegenerateMetricError(double min_eig)
        : std::runtime_error("metric tensor not positive definite (min eigenvalue " +
                             std::to_string(min_eig) + ")"),
          min_eigenvalue(min_eig) {}
};

// Bad experiment configuration; names the offending key.
struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(const std::string& bad_key, const std::string& what)
        : std::runtime_error("config key '" + bad_key + "': " + what), key(bad_key) {}
};

}  // namespace mobius
