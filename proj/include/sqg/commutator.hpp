#pragma once

#include "sqg/grid.hpp"

namespace sqg {

struct CommutatorOptions {
    double radius = 20.0;  // comparison disk |x| <= radius
    int nodes = 512;       // radial quadrature nodes on the disk (multiple of 16)
};

struct CommutatorResult {
    double relative_error = 0.0;  // ||LHS - RHS||_2 / ||RHS||_2 over the disk
    double lhs_norm = 0.0;
    double rhs_norm = 0.0;
};

/// Checks
///   (-Delta)^{a/2}(|x|^2 g) - |x|^2 (-Delta)^{a/2} g
///     = a^2 (-Delta)^{(a-2)/2} g - 2a div (-Delta)^{(a-2)/2}(x g)
/// on R^2 for g = d/dx1 exp(-|x|^2/w^2).
///
/// g = cos(phi) h(r), so every operator reduces to Hankel transforms of
/// orders 0..2; forward and inverse transforms use fixed composite
/// Gauss-Legendre rules, with a power substitution at rho = 0 to absorb the
/// rho^{a-1} behaviour of the order-0 term. Requires 0 < alpha <= 1 and
/// width <= radius/8.
CommutatorResult commutator_check(double alpha, double width, const CommutatorOptions& options = {});

/// ||(-Delta)^{s/2}(|x|^2 g) - |x|^2 (-Delta)^{s/2} g|| / || |x|^2 g || on the
/// same disk; vanishes for s = 0.
double commutator_residual(double s, double width, const CommutatorOptions& options = {});

/// The same identity evaluated with periodic multipliers on the grid, using
/// box coordinates for |x|^2. Kept for comparison: the torus version carries
/// periodization error that decays only algebraically with L.
CommutatorResult commutator_check_grid(double alpha, double width, const Grid& grid);

}  // namespace sqg
