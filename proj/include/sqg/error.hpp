#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Argument outside the mathematical domain of an operation (alpha range,
/// negative time, degenerate limit).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed: non-finite values, blow-up, or a
/// quadrature that did not reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hankel quadrature failed to converge; carries the radius with the
/// largest error estimate.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double worst_radius, double error_estimate)
        : NumericalError(what), worst_radius_(worst_radius), error_estimate_(error_estimate) {}

    double worst_radius() const noexcept { return worst_radius_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double worst_radius_;
    double error_estimate_;
};

/// Malformed configuration file, unknown key, or bad value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Snapshot or CSV input/output failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sqg
