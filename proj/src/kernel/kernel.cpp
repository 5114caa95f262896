#include "sqg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sqg/csv.hpp"
#include "sqg/error.hpp"
#include "sqg/hankel.hpp"

namespace sqg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCorePoints = 50;
constexpr double kGeometricRatio = 1.02;
constexpr int kTailConfirmations = 3;

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
}

// Uniform on [0, s] and geometric beyond, where s = min(1, (alpha/2)^{1/alpha})
// is the length scale on which G_alpha(1, .) varies near the origin.
std::vector<double> profile_radii(double alpha, double r_max) {
    const double s = std::min(1.0, std::pow(alpha / 2.0, 1.0 / alpha));
    std::vector<double> radii;
    for (int i = 0; i <= kCorePoints; ++i) radii.push_back(s * i / kCorePoints);
    double r = s;
    while (r * kGeometricRatio < r_max * (1.0 - 1e-9)) {
        r *= kGeometricRatio;
        radii.push_back(r);
    }
    radii.push_back(r_max);
    return radii;
}

// Hermite cubic in ln G on [r_i, r_{i+1}] with a Fritsch-Carlson slope
// limiter; returns (ln G, d ln G / dr).
std::pair<double, double> interpolate_log(const KernelProfile& p, double r) {
    const auto& radii = p.radii;
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(radii.begin(), radii.end(), r) - radii.begin());
    i = std::clamp<std::size_t>(i, 1, radii.size() - 1) - 1;
    const double h = radii[i + 1] - radii[i];
    const double y0 = p.log_values[i];
    const double y1 = p.log_values[i + 1];
    double s0 = p.log_slopes[i];
    double s1 = p.log_slopes[i + 1];
    const double secant = (y1 - y0) / h;
    if (secant == 0.0) {
        s0 = s1 = 0.0;
    } else {
        double a = s0 / secant;
        double b = s1 / secant;
        if (a < 0.0) s0 = a = 0.0;
        if (b < 0.0) s1 = b = 0.0;
        const double norm2 = a * a + b * b;
        if (norm2 > 9.0) {
            const double tau = 3.0 / std::sqrt(norm2);
            s0 = tau * a * secant;
            s1 = tau * b * secant;
        }
    }
    const double t = (r - radii[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double value = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * s0 +
                         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * s1;
    const double slope = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * s0 +
                          (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * s1) /
                         h;
    return {value, slope};
}

}  // namespace

double asymptotic_constant(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw DomainError("asymptotic_constant: alpha must lie in (0, 2), got " +
                          std::to_string(alpha));
    }
    return alpha * std::pow(2.0, alpha - 1.0) / (kPi * kPi) * std::sin(alpha * kPi / 2.0) *
           std::tgamma(1.0 + alpha / 2.0) * std::tgamma(alpha / 2.0);
}

double kernel_value_quadrature(double alpha, double r, double quad_tol) {
    require_alpha(alpha);
    if (r == 0.0) return std::tgamma(2.0 / alpha) / (2.0 * kPi * alpha);
    // Substituting u = r rho moves the oscillation onto a fixed Bessel argument.
    const auto envelope = [=](double u) { return u * std::exp(-std::pow(u / r, alpha)); };
    const auto res = hankel::bessel_integral(envelope, 0, {.rel_tol = quad_tol});
    if (!res.converged) {
        throw QuadratureError("kernel value quadrature did not converge at r=" + std::to_string(r),
                              r, res.error);
    }
    return res.value / (2.0 * kPi * r * r);
}

double kernel_derivative_quadrature(double alpha, double r, double quad_tol) {
    require_alpha(alpha);
    if (r == 0.0) return 0.0;
    const auto envelope = [=](double u) { return u * u * std::exp(-std::pow(u / r, alpha)); };
    const auto res = hankel::bessel_integral(envelope, 1, {.rel_tol = quad_tol});
    if (!res.converged) {
        throw QuadratureError(
            "kernel derivative quadrature did not converge at r=" + std::to_string(r), r,
            res.error);
    }
    return -res.value / (2.0 * kPi * r * r * r);
}

KernelProfile build_profile(double alpha, double r_max, double quad_tol) {
    require_alpha(alpha);
    if (!(r_max >= 10.0)) throw DomainError("build_profile: r_max must be >= 10");
    if (!(quad_tol >= 1e-12 && quad_tol <= 1e-6)) {
        throw DomainError("build_profile: quad_tol must lie in [1e-12, 1e-6]");
    }

    KernelProfile p;
    p.alpha = alpha;
    p.quad_tol = quad_tol;
    p.radii = profile_radii(alpha, r_max);
    const std::size_t m = p.radii.size();
    p.values.resize(m);
    p.grad_values.resize(m);
    p.log_values.resize(m);
    p.log_slopes.resize(m);

    if (alpha == 2.0) {
        p.c_alpha = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = p.radii[i];
            p.log_values[i] = -r * r / 4.0 - std::log(4.0 * kPi);
            p.log_slopes[i] = -r / 2.0;
            p.values[i] = std::exp(p.log_values[i]);
            p.grad_values[i] = p.log_slopes[i] * p.values[i];
        }
        p.r_star = 0.75 * r_max;
        return p;
    }

    p.c_alpha = asymptotic_constant(alpha);
    p.r_star = 0.75 * r_max;
    int agreeing = 0;
    std::size_t filled = m;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = p.radii[i];
        p.values[i] = kernel_value_quadrature(alpha, r, quad_tol);
        p.grad_values[i] = kernel_derivative_quadrature(alpha, r, quad_tol);
        if (!(p.values[i] > 0.0) || !std::isfinite(p.values[i])) {
            throw QuadratureError("kernel profile lost positivity", r, p.values[i]);
        }
        p.log_values[i] = std::log(p.values[i]);
        p.log_slopes[i] = p.grad_values[i] / p.values[i];
        if (i == 0) continue;
        const double tail = p.c_alpha * std::pow(r, -2.0 - alpha);
        agreeing = std::abs(p.values[i] / tail - 1.0) <= 10.0 * quad_tol ? agreeing + 1 : 0;
        if (agreeing == 1) p.r_star = r;
        if (agreeing == kTailConfirmations) {
            filled = i + 1;
            break;
        }
    }
    // Past a confirmed match the table holds the tail itself.
    for (std::size_t i = filled; i < m; ++i) {
        const double r = p.radii[i];
        p.values[i] = p.c_alpha * std::pow(r, -2.0 - alpha);
        p.grad_values[i] = -(2.0 + alpha) * p.values[i] / r;
        p.log_values[i] = std::log(p.values[i]);
        p.log_slopes[i] = -(2.0 + alpha) / r;
    }
    for (std::size_t i = 1; i < m; ++i) {
        if (p.values[i] > p.values[i - 1] || p.grad_values[i] > 0.0) {
            throw QuadratureError("kernel profile not monotone", p.radii[i],
                                  p.values[i] - p.values[i - 1]);
        }
    }
    return p;
}

double profile_value(const KernelProfile& p, double r) {
    if (r > p.r_star) return p.c_alpha * std::pow(r, -2.0 - p.alpha);
    return std::exp(interpolate_log(p, r).first);
}

double profile_derivative(const KernelProfile& p, double r) {
    if (r > p.r_star) return -(2.0 + p.alpha) * p.c_alpha * std::pow(r, -3.0 - p.alpha);
    const auto [log_value, log_slope] = interpolate_log(p, r);
    return std::exp(log_value) * log_slope;
}

double kernel_eval_radial(const KernelProfile& p, double t, double r) {
    if (!(t > 0.0)) throw DomainError("kernel_eval: t must be positive");
    const double scale = std::pow(t, -1.0 / p.alpha);
    return std::pow(t, -2.0 / p.alpha) * profile_value(p, scale * r);
}

double kernel_eval(const KernelProfile& p, double t, Vec2 x) {
    return kernel_eval_radial(p, t, std::hypot(x[0], x[1]));
}

Vec2 kernel_grad_eval(const KernelProfile& p, double t, Vec2 x) {
    if (!(t > 0.0)) throw DomainError("kernel_grad_eval: t must be positive");
    const double r = std::hypot(x[0], x[1]);
    if (r == 0.0) return {0.0, 0.0};
    const double d =
        std::pow(t, -3.0 / p.alpha) * profile_derivative(p, std::pow(t, -1.0 / p.alpha) * r);
    return {d * x[0] / r, d * x[1] / r};
}

std::vector<double> tail_limit_check(const KernelProfile& p, double t,
                                     std::span<const double> radii) {
    if (p.alpha >= 2.0) throw DomainError("tail_limit_check: power-law tail undefined for alpha=2");
    std::vector<double> ratios;
    ratios.reserve(radii.size());
    for (double r : radii) {
        ratios.push_back(std::pow(r, 2.0 + p.alpha) * kernel_eval_radial(p, t, r) /
                         (p.c_alpha * t));
    }
    return ratios;
}

void write_profile_csv(const KernelProfile& p, const std::filesystem::path& path) {
    csv::Writer out(path, {"r", "G", "dGdr", "ratio_to_tail"});
    out.comment("alpha=" + csv::format_double(p.alpha));
    out.comment("r_star=" + csv::format_double(p.r_star));
    out.comment("c_alpha=" + csv::format_double(p.c_alpha));
    out.comment("quad_tol=" + csv::format_double(p.quad_tol));
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        const double r = p.radii[i];
        const double tail = p.c_alpha * std::pow(r, -2.0 - p.alpha);
        const double ratio = (r > 0.0 && tail > 0.0) ? p.values[i] / tail : 0.0;
        out.row({r, p.values[i], p.grad_values[i], ratio});
    }
    out.close();
}

KernelProfile read_profile_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    KernelProfile p;
    bool have_alpha = false;
    bool have_r_star = false;
    for (const auto& c : table.comments) {
        const auto eq = c.find('=');
        if (eq == std::string::npos) continue;
        const auto key = csv::trim(std::string_view(c).substr(0, eq));
        const double value = csv::parse_double(std::string_view(c).substr(eq + 1));
        if (key == "alpha") { p.alpha = value; have_alpha = true; }
        else if (key == "r_star") { p.r_star = value; have_r_star = true; }
        else if (key == "c_alpha") p.c_alpha = value;
        else if (key == "quad_tol") p.quad_tol = value;
    }
    if (!have_alpha || !have_r_star) {
        throw IoError("kernel profile csv lacks alpha/r_star metadata: " + path.string());
    }
    const auto ir = table.column("r");
    const auto ig = table.column("G");
    const auto id = table.column("dGdr");
    for (const auto& row : table.rows) {
        const double r = row[ir];
        p.radii.push_back(r);
        p.values.push_back(row[ig]);
        p.grad_values.push_back(row[id]);
        if (p.alpha == 2.0) {
            p.log_values.push_back(-r * r / 4.0 - std::log(4.0 * kPi));
            p.log_slopes.push_back(-r / 2.0);
        } else {
            p.log_values.push_back(std::log(row[ig]));
            p.log_slopes.push_back(row[id] / row[ig]);
        }
    }
    if (p.radii.size() < 2) throw IoError("kernel profile csv has fewer than two rows");
    return p;
}

}  // namespace sqg
