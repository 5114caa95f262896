#include "sqg/norms.hpp"

#include <algorithm>
#include <cmath>

#include "sqg/error.hpp"
#include "sqg/fft.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

void validate(const AnnulusSpec& a, std::optional<double> L) {
    if (!(a.r_min > 0.0 && a.r_min < a.r_max)) {
        throw DomainError("annulus needs 0 < r_min < r_max");
    }
    if (L && a.r_max > 0.5 * *L * (1.0 + 1e-12)) {
        throw DomainError("annulus r_max must not exceed L/2");
    }
}

double weighted_sup_norm(const Field& f, double w, const AnnulusSpec& annulus) {
    const Grid& g = f.grid;
    validate(annulus, g.L);
    double best = 0.0;
    bool any = false;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const double r = std::hypot(g.x(i), g.x(j));
            if (r < annulus.r_min || r > annulus.r_max) continue;
            any = true;
            best = std::max(best, std::pow(r, w) * std::abs(f(i, j)));
        }
    }
    if (!any) throw DomainError("weighted_sup_norm: annulus contains no grid points");
    return best;
}

double weighted_lq_norm(const Field& f, double w, double q, const std::optional<AnnulusSpec>& region) {
    if (!(q >= 1.0)) throw DomainError("weighted_lq_norm: q must be >= 1");
    const Grid& g = f.grid;
    if (region) validate(*region, g.L);
    double s = 0.0;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const double r = std::hypot(g.x(i), g.x(j));
            if (region && (r < region->r_min || r > region->r_max)) continue;
            const double v = w == 0.0 ? std::abs(f(i, j)) : std::pow(r, w) * std::abs(f(i, j));
            s += std::pow(v, q);
        }
    }
    return std::pow(s * g.dx() * g.dx(), 1.0 / q);
}

double sobolev_seminorm(const Field& f, double sigma) {
    if (!(sigma >= 0.0)) throw DomainError("sobolev_seminorm: sigma must be >= 0");
    return l2_norm(frac_power(forward(f), sigma));
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
}

double weighted_gradient_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw DomainError("weighted_gradient_norm: p must be >= 1");
    const auto [g1, g2] = gradient(f);
    const Grid& g = f.grid;
    double s = 0.0;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const double rr = g.x(i) * g.x(i) + g.x(j) * g.x(j);
            s += std::pow(rr * std::hypot(g1(i, j), g2(i, j)), p);
        }
    }
    return std::pow(s * g.dx() * g.dx(), 1.0 / p);
}

}  // namespace sqg
