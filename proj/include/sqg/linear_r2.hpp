#pragma once

#include <span>
#include <vector>

#include "sqg/kernel.hpp"
#include "sqg/solver.hpp"

namespace sqg {

struct GaussianBump {
    double amplitude = 0.0;
    double width = 1.0;
    Vec2 center{0.0, 0.0};
};

/// Initial datum on R^2 for the convolution oracle: a sum of Gaussian bumps,
/// or the kernel itself, mass * G_alpha(kernel_time, .).
struct R2Source {
    std::vector<GaussianBump> bumps;
    bool kernel = false;
    double kernel_time = 1.0;
    double kernel_mass = 1.0;

    static R2Source from_init(const InitSpec& init);  // rejects expression data
    static R2Source from_kernel(double time, double mass);
    double mass() const;  // exact integral over R^2
};

struct R2Value {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// (G_alpha(t) * theta0)(x) on R^2 at each point by nested adaptive
/// Gauss-Kronrod quadrature in polar coordinates. Bumps are integrated over
/// |y - c| <= 8w with a radial break at |x - c|; kernel data are integrated
/// about the origin with a radial break at |x| and a mapped infinite tail.
std::vector<R2Value> linear_part_r2(const R2Source& source, const KernelProfile& profile,
                                    double t, std::span<const Vec2> points,
                                    double rel_tol = 1e-8);

}  // namespace sqg
