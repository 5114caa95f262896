#include "sqg/linear_r2.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "sqg/error.hpp"

namespace sqg {

namespace {

constexpr double kPi = std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kDepth = 12;

// G_alpha(t, r) with the time scalings hoisted out of the inner loops.
struct ScaledKernel {
    const KernelProfile& p;
    double amp;
    double scale;
    ScaledKernel(const KernelProfile& profile, double t)
        : p(profile), amp(std::pow(t, -2.0 / profile.alpha)), scale(std::pow(t, -1.0 / profile.alpha)) {}
    double operator()(double r) const { return amp * profile_value(p, scale * r); }
};

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;

    template <class F>
    void add(F&& f, double a, double b, double tol) {
        if (!(b > a)) return;
        double err = 0.0, l1_part = 0.0;
        value += GK::integrate(f, a, b, kDepth, tol, &err, &l1_part);
        error += err;
        l1 += l1_part;
    }
};

// int_0^pi K(sqrt(d^2 + rho^2 - 2 d rho cos phi)) d phi, doubled for the full circle.
template <class K>
double ring(const K& kernel, double d, double rho, double tol) {
    const auto f = [&](double phi) {
        const double s = d * d + rho * rho - 2.0 * d * rho * std::cos(phi);
        return kernel(std::sqrt(std::max(s, 0.0)));
    };
    return 2.0 * GK::integrate(f, 0.0, kPi, kDepth, tol);
}

R2Value convolve_bump(const ScaledKernel& kernel, const GaussianBump& b, Vec2 x, double tol) {
    const double d = std::hypot(x[0] - b.center[0], x[1] - b.center[1]);
    const double reach = 8.0 * b.width;
    const auto radial = [&](double rho) {
        return rho * std::exp(-rho * rho / (b.width * b.width)) * ring(kernel, d, rho, 0.1 * tol);
    };
    Accumulator acc;
    if (d < reach) {
        acc.add(radial, 0.0, d, tol);
        acc.add(radial, d, reach, tol);
    } else {
        acc.add(radial, 0.0, reach, tol);
    }
    return {b.amplitude * acc.value, std::abs(b.amplitude) * acc.error,
            acc.error <= 10.0 * tol * acc.l1};
}

R2Value convolve_kernel(const ScaledKernel& kernel, const ScaledKernel& source, double mass,
                        Vec2 x, double t_width, double tol) {
    const double d = std::hypot(x[0], x[1]);
    const auto radial = [&](double rho) { return rho * source(rho) * ring(kernel, d, rho, 0.1 * tol); };
    const double r_far = 2.0 * d + 20.0 * t_width;
    Accumulator acc;
    acc.add(radial, 0.0, d, tol);
    acc.add(radial, d, r_far, tol);
    // rho = r_far / u maps [r_far, inf) onto (0, 1].
    const auto tail = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double rho = r_far / u;
        return radial(rho) * r_far / (u * u);
    };
    acc.add(tail, 0.0, 1.0, tol);
    return {mass * acc.value, mass * acc.error, acc.error <= 10.0 * tol * acc.l1};
}

}  // namespace

R2Source R2Source::from_init(const InitSpec& init) {
    R2Source s;
    switch (init.kind) {
    case InitKind::gaussian: s.bumps.push_back({init.amplitude, init.width, init.center}); break;
    case InitKind::two_bump:
        s.bumps.push_back({init.amplitude, init.width, init.center});
        s.bumps.push_back({init.amplitude2, init.width, init.center2});
        break;
    case InitKind::expression:
        throw DomainError("linear_part_r2 needs analytic Gaussian data, not an expression");
    }
    return s;
}

R2Source R2Source::from_kernel(double time, double mass) {
    if (!(time > 0.0)) throw DomainError("kernel source time must be positive");
    R2Source s;
    s.kernel = true;
    s.kernel_time = time;
    s.kernel_mass = mass;
    return s;
}

double R2Source::mass() const {
    if (kernel) return kernel_mass;
    double m = 0.0;
    for (const auto& b : bumps) m += b.amplitude * kPi * b.width * b.width;
    return m;
}

std::vector<R2Value> linear_part_r2(const R2Source& source, const KernelProfile& profile, double t,
                                    std::span<const Vec2> points, double rel_tol) {
    if (!(t > 0.0)) throw DomainError("linear_part_r2: t must be positive");
    const ScaledKernel kernel(profile, t);
    std::vector<R2Value> out;
    out.reserve(points.size());
    for (const Vec2& x : points) {
        if (source.kernel) {
            const ScaledKernel src(profile, source.kernel_time);
            const double width = std::pow(t, 1.0 / profile.alpha) +
                                 std::pow(source.kernel_time, 1.0 / profile.alpha);
            out.push_back(convolve_kernel(kernel, src, source.kernel_mass, x, width, rel_tol));
            continue;
        }
        R2Value total;
        for (const auto& b : source.bumps) {
            const R2Value v = convolve_bump(kernel, b, x, rel_tol);
            total.value += v.value;
            total.error += v.error;
            total.converged = total.converged && v.converged;
        }
        out.push_back(total);
    }
    return out;
}

}  // namespace sqg
