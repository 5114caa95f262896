#pragma once

#include <functional>

namespace sqg::hankel {

/// Bessel function of the first kind, integer order.
double bessel_j(int order, double x);

/// n-th positive zero of J_order (n >= 1). The first few thousand zeros are
/// cached per order.
double bessel_zero(int order, int n);

struct Options {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int min_intervals = 8;
    int max_intervals = 40000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;   // difference between the last two accepted estimates
    int intervals = 0;
    bool converged = false;
};

/// Computes the improper integral of envelope(u) * J_order(u) over (0, inf).
///
/// The half-line is partitioned at consecutive zeros of J_order; each panel is
/// integrated with adaptive Gauss-Kronrod, and the resulting alternating
/// series is summed with repeated averaging of partial sums (Euler
/// transform) over the trailing half of the panels. The envelope may have an
/// algebraic cusp at u = 0 and may grow polynomially before decaying.
Result bessel_integral(const std::function<double(double)>& envelope, int order,
                       const Options& options = {});

}  // namespace sqg::hankel
