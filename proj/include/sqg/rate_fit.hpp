#pragma once

#include <span>

namespace sqg {

/// values ~ exp(intercept) (1 + t)^exponent over [t_lo, t_hi].
struct RateFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int n_points = 0;
};

/// Least squares of log(value) on log(1 + t) for samples with
/// t_lo <= t <= t_hi. Throws DomainError with fewer than five samples in the
/// window and NumericalError listing the times of nonpositive values.
RateFit fit_decay_exponent(std::span<const double> times, std::span<const double> values,
                           double t_lo, double t_hi);

}  // namespace sqg
