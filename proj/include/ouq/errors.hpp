#pragma once

#include <stdexcept>
#include <string>

namespace ouq {

/// Invalid value for a domain type; the message names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A matrix handed to project_x has a non-negligible element outside the X pattern.
class NonXStateError : public std::runtime_error {
public:
    NonXStateError(int row, int col, double magnitude)
        : std::runtime_error("non-X element at (" + std::to_string(row + 1) + "," +
                             std::to_string(col + 1) + "), |value| = " + std::to_string(magnitude)),
          row_(row), col_(col), magnitude_(magnitude) {}
    int row() const { return row_; }
    int col() const { return col_; }
    double magnitude() const { return magnitude_; }

private:
    int row_, col_;
    double magnitude_;
};

/// Kummer-series parameter b too close to a nonpositive integer (a pole of 1F1).
class PoleParameterError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Series evaluation hit its term cap without meeting the tolerance.
class NoConvergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The closed-form propagator cannot be evaluated at these parameters
/// (epsilon ~ 0, a 1F1 parameter near a pole, or collapsed M/E denominators).
/// Callers are expected to fall back to the ODE engine.
class DegenerateParametersError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation was invoked outside its stated contract.
class ContractError : public std::logic_error {
    using std::logic_error::logic_error;
};

/// Eigen-solve produced values outside the tolerated numeric range.
class NumericDegradationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive integration could not proceed; carries the time reached.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t_reached)
        : std::runtime_error(what + " (t reached: " + std::to_string(t_reached) + ")"),
          t_reached_(t_reached) {}
    double t_reached() const { return t_reached_; }

private:
    double t_reached_;
};

} // namespace ouq
