#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

namespace sqg {

using Vec2 = std::array<double, 2>;

/// Tabulated radial profile of the fractional heat kernel at unit time,
/// G_alpha(1, r) = (2 pi)^{-1} int_0^inf exp(-rho^alpha) J0(r rho) rho d rho,
/// together with its radial derivative and the far-field tail constant.
///
/// Profiles are immutable once built and may be shared between threads.
struct KernelProfile {
    double alpha = 1.0;
    std::vector<double> radii;        // r_0 = 0 < r_1 < ... < r_m = r_max
    std::vector<double> values;       // G_alpha(1, r_i)
    std::vector<double> grad_values;  // d/dr G_alpha(1, r) at r_i
    std::vector<double> log_values;   // ln G_alpha(1, r_i); finite even where values underflow
    std::vector<double> log_slopes;   // d/dr ln G_alpha(1, r) at r_i
    double r_star = 0.0;              // beyond this radius the power-law tail is used
    double c_alpha = 0.0;
    double quad_tol = 0.0;

    double r_max() const { return radii.back(); }
};

/// Far-field constant C_alpha = alpha 2^{alpha-1} pi^{-2} sin(alpha pi/2)
/// Gamma(1+alpha/2) Gamma(alpha/2). Requires 0 < alpha < 2.
double asymptotic_constant(double alpha);

/// Tabulates G_alpha(1, .) on a grid that is uniform (50 steps) on [0, s],
/// s = min(1, (alpha/2)^{1/alpha}), and geometric (ratio 1.02) beyond. r_star is the first radius where the
/// quadrature meets the tail to 10 quad_tol, confirmed at the next two radii;
/// the table then continues with tail values. Without a match r_star is
/// 0.75 r_max. Throws QuadratureError if any radius fails to converge.
///
/// alpha = 2 is tabulated from the exact Gaussian (4 pi)^{-1} exp(-r^2/4).
KernelProfile build_profile(double alpha, double r_max, double quad_tol);

/// G_alpha(1, r) at a single radius by Hankel quadrature (no table).
double kernel_value_quadrature(double alpha, double r, double quad_tol);

/// d/dr G_alpha(1, r) at a single radius by Hankel quadrature.
double kernel_derivative_quadrature(double alpha, double r, double quad_tol);

/// Unit-time profile and its derivative at radius r (interpolated or tail).
double profile_value(const KernelProfile& profile, double r);
double profile_derivative(const KernelProfile& profile, double r);

/// G_alpha(t, x) = t^{-2/alpha} G_alpha(1, t^{-1/alpha} x).
double kernel_eval(const KernelProfile& profile, double t, Vec2 x);

/// Radial form of kernel_eval.
double kernel_eval_radial(const KernelProfile& profile, double t, double r);

/// Gradient of G_alpha(t, .) at x; the zero vector at x = 0.
Vec2 kernel_grad_eval(const KernelProfile& profile, double t, Vec2 x);

/// r^{2+alpha} G_alpha(t, r) / (C_alpha t) for each radius. Rejects alpha = 2.
std::vector<double> tail_limit_check(const KernelProfile& profile, double t,
                                     std::span<const double> radii);

/// Writes the profile as CSV: metadata comment lines, then the header
/// r,G,dGdr,ratio_to_tail.
void write_profile_csv(const KernelProfile& profile, const std::filesystem::path& path);
KernelProfile read_profile_csv(const std::filesystem::path& path);

}  // namespace sqg
