#include "sqg/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sqg/error.hpp"
#include "sqg/fft.hpp"

namespace sqg {

namespace {

using cplx = std::complex<double>;

bool is_nyquist(const Grid& g, int i, int j) { return i == g.N / 2 || j == g.N / 2; }

}  // namespace

SpectralField frac_power(const SpectralField& f, double s) {
    if (s == 0.0) return f;
    const Grid& g = f.grid;
    SpectralField out(g);
    for (int i = 0; i < g.N; ++i) {
        const double k1 = g.k(i);
        for (int j = 0; j < g.N; ++j) {
            const double k2 = g.k(j);
            const double kk = std::hypot(k1, k2);
            out(i, j) = kk == 0.0 ? cplx{} : f(i, j) * std::pow(kk, s);
        }
    }
    return out;
}

Field frac_power(const Field& f, double s) { return inverse(frac_power(forward(f), s)); }

std::pair<SpectralField, SpectralField> riesz_velocity(const SpectralField& theta) {
    const Grid& g = theta.grid;
    SpectralField u1(g), u2(g);
    for (int i = 0; i < g.N; ++i) {
        const double k1 = g.k(i);
        for (int j = 0; j < g.N; ++j) {
            const double k2 = g.k(j);
            const double kk = std::hypot(k1, k2);
            if (kk == 0.0 || is_nyquist(g, i, j)) continue;
            const cplx a = theta(i, j) / kk;
            u1(i, j) = cplx{0.0, -k2} * a;
            u2(i, j) = cplx{0.0, k1} * a;
        }
    }
    return {std::move(u1), std::move(u2)};
}

std::pair<Field, Field> riesz_velocity(const Field& theta) {
    auto [u1, u2] = riesz_velocity(forward(theta));
    return {inverse(u1), inverse(u2)};
}

bool dealias_keeps(const Grid& g, int i, int j) {
    const int m = std::max(std::abs(g.mode(i)), std::abs(g.mode(j)));
    return 3 * m <= g.N;
}

SpectralField dealias(const SpectralField& f) {
    const Grid& g = f.grid;
    SpectralField out = f;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            if (!dealias_keeps(g, i, j)) out(i, j) = 0.0;
        }
    }
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    const Grid& g = f.grid;
    SpectralField out(g);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            if (is_nyquist(g, i, j)) continue;
            const double k = axis == 0 ? g.k(i) : g.k(j);
            out(i, j) = cplx{0.0, k} * f(i, j);
        }
    }
    return out;
}

std::pair<Field, Field> gradient(const Field& f) {
    const auto hat = forward(f);
    return {inverse(derivative(hat, 0)), inverse(derivative(hat, 1))};
}

SpectralField divergence(const SpectralField& v1, const SpectralField& v2) {
    require_same_grid(v1.grid, v2.grid, "divergence");
    const Grid& g = v1.grid;
    SpectralField out(g);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            if (is_nyquist(g, i, j)) continue;
            out(i, j) = cplx{0.0, g.k(i)} * v1(i, j) + cplx{0.0, g.k(j)} * v2(i, j);
        }
    }
    return out;
}

double riesz_divergence_max(const SpectralField& theta) {
    const auto [u1, u2] = riesz_velocity(theta);
    const Grid& g = theta.grid;
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            worst = std::max(worst, std::abs(g.k(i) * u1(i, j) + g.k(j) * u2(i, j)));
        }
    }
    return worst;
}

double l2_norm(const Field& f) {
    double s = 0.0;
    for (double v : f.data) s += v * v;
    return std::sqrt(s) * f.grid.dx();
}

double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs) s += std::norm(c);
    return std::sqrt(s) * f.grid.dx();
}

double SvResult::tolerance() const { return 1e-8 * (1.0 + std::abs(lhs)); }

SvResult sv_inequality_check(const Field& f, double q, double alpha) {
    if (!(q >= 2.0)) throw DomainError("sv_inequality_check: q must be >= 2");
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw DomainError("sv_inequality_check: alpha must lie in (0, 2]");
    }
    const Grid& g = f.grid;
    const double area = g.dx() * g.dx();

    const Field lap = frac_power(f, alpha);
    Field power(g);
    double lhs = 0.0;
    for (std::size_t n = 0; n < f.data.size(); ++n) {
        const double a = std::abs(f.data[n]);
        lhs += std::pow(a, q - 2.0) * f.data[n] * lap.data[n];
        power.data[n] = std::pow(a, q / 2.0);
    }
    lhs *= area;

    const double rhs = 2.0 / q * std::pow(l2_norm(frac_power(forward(power), alpha / 2.0)), 2);
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
        throw NumericalError("sv_inequality_check: non-finite intermediate");
    }
    return {lhs, rhs};
}

Field random_bandlimited_field(const Grid& g, int max_mode, std::uint64_t seed) {
    if (max_mode < 1 || 3 * max_mode > g.N) {
        throw DomainError("random_bandlimited_field: max_mode must lie in [1, N/3]");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField hat(g);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const int m1 = g.mode(i);
            const int m2 = g.mode(j);
            if (std::max(std::abs(m1), std::abs(m2)) > max_mode) continue;
            const double decay = 1.0 / (1.0 + m1 * m1 + m2 * m2);
            hat(i, j) = decay * cplx{normal(rng), normal(rng)};
        }
    }
    Field f = inverse(hat);
    double peak = 0.0;
    for (double v : f.data) peak = std::max(peak, std::abs(v));
    for (double& v : f.data) v /= peak;
    return f;
}

}  // namespace sqg
