#include "sqg/commutator.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "sqg/error.hpp"
#include "sqg/fft.hpp"
#include "sqg/hankel.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

namespace {

constexpr int kOrder = 16;
using Gauss = boost::math::quadrature::gauss<double, kOrder>;

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// Composite Gauss-Legendre on [a, b] with equal panels; x(u) maps the
// reference variable u to the integration variable.
Rule composite(double a, double b, int panels,
               const std::function<double(double)>& map = {},
               const std::function<double(double)>& jacobian = {}) {
    Rule rule;
    const auto& nodes = Gauss::abscissa();
    const auto& weights = Gauss::weights();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            for (int sign : {-1, 1}) {
                if (nodes[n] == 0.0 && sign > 0) continue;
                const double u = mid + sign * nodes[n] * 0.5 * h;
                const double w = weights[n] * 0.5 * h;
                rule.x.push_back(map ? map(u) : u);
                rule.w.push_back(jacobian ? w * jacobian(u) : w);
            }
        }
    }
    return rule;
}

// Angular-harmonic Hankel machinery for radial profiles that decay like
// exp(-r^2/w^2) and whose transforms decay like exp(-rho^2 w^2/4).
class HankelPair {
public:
    HankelPair(double width, double radius, double alpha_hint) {
        const double r_far = width * 8.0;
        source_ = composite(0.0, r_far, 48);
        const double rho_max = 2.0 * std::sqrt(45.0) / width;
        const double rho0 = rho_max / 64.0;
        const double p = 1.0 / alpha_hint;
        Rule head = composite(
            0.0, 1.0, 4, [=](double v) { return rho0 * std::pow(v, p); },
            [=](double v) { return rho0 * p * std::pow(v, p - 1.0); });
        const int panels = std::max(64, static_cast<int>(std::ceil(rho_max * radius / 2.0)));
        Rule body = composite(rho0, rho_max, panels);
        spectral_ = head;
        spectral_.x.insert(spectral_.x.end(), body.x.begin(), body.x.end());
        spectral_.w.insert(spectral_.w.end(), body.w.begin(), body.w.end());
    }

    // Forward transform of order m at every spectral node.
    std::vector<double> forward(const std::function<double(double)>& a, int m) const {
        std::vector<double> samples(source_.x.size());
        for (std::size_t j = 0; j < samples.size(); ++j) {
            samples[j] = source_.w[j] * a(source_.x[j]) * source_.x[j];
        }
        std::vector<double> out(spectral_.x.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double rho = spectral_.x[k];
            double s = 0.0;
            for (std::size_t j = 0; j < samples.size(); ++j) {
                s += samples[j] * hankel::bessel_j(m, rho * source_.x[j]);
            }
            out[k] = s;
        }
        return out;
    }

    // int rho^{power} F(rho) kernel(rho, r) d rho
    double inverse(const std::vector<double>& F, double power, double r,
                   const std::function<double(double, double)>& kernel) const {
        double s = 0.0;
        for (std::size_t k = 0; k < F.size(); ++k) {
            const double rho = spectral_.x[k];
            s += spectral_.w[k] * std::pow(rho, power) * F[k] * kernel(rho, r);
        }
        return s;
    }

private:
    Rule source_;
    Rule spectral_;
};

double j_order(int m, double rho, double r) { return hankel::bessel_j(m, rho * r); }

void require_inputs(double width, const CommutatorOptions& options) {
    if (!(width > 0.0) || width > options.radius / 8.0) {
        throw DomainError("commutator check: gaussian width must lie in (0, radius/8]");
    }
    if (options.nodes < 16 || options.nodes % 16 != 0) {
        throw DomainError("commutator check: nodes must be a positive multiple of 16");
    }
}

}  // namespace

CommutatorResult commutator_check(double alpha, double width, const CommutatorOptions& options) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("commutator_check: alpha must lie in (0, 1]");
    }
    require_inputs(width, options);
    const double w2 = width * width;
    const auto h = [=](double r) { return -2.0 * r / w2 * std::exp(-r * r / w2); };

    HankelPair hp(width, options.radius, alpha);
    const auto h1 = hp.forward(h, 1);
    const auto r2h1 = hp.forward([&](double r) { return r * r * h(r); }, 1);
    const auto half0 = hp.forward([&](double r) { return 0.5 * r * h(r); }, 0);
    const auto half2 = hp.forward([&](double r) { return 0.5 * r * h(r); }, 2);

    const auto j1 = [](double rho, double r) { return j_order(1, rho, r); };
    const auto j2 = [](double rho, double r) { return j_order(2, rho, r); };
    const auto dj0 = [](double rho, double r) { return -rho * j_order(1, rho, r); };
    const auto dj2 = [](double rho, double r) {
        return 0.5 * rho * (j_order(1, rho, r) - j_order(3, rho, r));
    };

    const Rule disk = composite(0.0, options.radius, options.nodes / kOrder);
    double diff2 = 0.0, lhs2 = 0.0, rhs2 = 0.0;
    for (std::size_t n = 0; n < disk.x.size(); ++n) {
        const double r = disk.x[n];
        const double lhs = hp.inverse(r2h1, alpha + 1.0, r, j1) -
                           r * r * hp.inverse(h1, alpha + 1.0, r, j1);
        const double b = hp.inverse(h1, alpha - 1.0, r, j1);
        const double a0p = hp.inverse(half0, alpha - 1.0, r, dj0);
        const double a2 = hp.inverse(half2, alpha - 1.0, r, j2);
        const double a2p = hp.inverse(half2, alpha - 1.0, r, dj2);
        const double rhs = alpha * alpha * b - 2.0 * alpha * (a0p + a2p + 2.0 * a2 / r);
        const double weight = disk.w[n] * r;
        diff2 += weight * (lhs - rhs) * (lhs - rhs);
        lhs2 += weight * lhs * lhs;
        rhs2 += weight * rhs * rhs;
    }
    // The cos(phi) factor contributes the same pi to every norm.
    const double pi = std::acos(-1.0);
    return {std::sqrt(diff2 / rhs2), std::sqrt(pi * lhs2), std::sqrt(pi * rhs2)};
}

double commutator_residual(double s, double width, const CommutatorOptions& options) {
    require_inputs(width, options);
    const double w2 = width * width;
    const auto h = [=](double r) { return -2.0 * r / w2 * std::exp(-r * r / w2); };
    HankelPair hp(width, options.radius, 1.0);
    const auto h1 = hp.forward(h, 1);
    const auto r2h1 = hp.forward([&](double r) { return r * r * h(r); }, 1);
    const auto j1 = [](double rho, double r) { return j_order(1, rho, r); };

    const Rule disk = composite(0.0, options.radius, options.nodes / kOrder);
    double diff2 = 0.0, ref2 = 0.0;
    for (std::size_t n = 0; n < disk.x.size(); ++n) {
        const double r = disk.x[n];
        const double c = hp.inverse(r2h1, s + 1.0, r, j1) - r * r * hp.inverse(h1, s + 1.0, r, j1);
        const double ref = r * r * h(r);
        diff2 += disk.w[n] * r * c * c;
        ref2 += disk.w[n] * r * ref * ref;
    }
    return std::sqrt(diff2 / ref2);
}

CommutatorResult commutator_check_grid(double alpha, double width, const Grid& g) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("commutator_check_grid: alpha must lie in (0, 1]");
    }
    if (!(width > 0.0) || width > g.L / 8.0) {
        throw DomainError("commutator_check_grid: gaussian width must lie in (0, L/8]");
    }
    Field gf(g), r2g(g), x1g(g), x2g(g);
    for (int i = 0; i < g.N; ++i) {
        const double x1 = g.x(i);
        for (int j = 0; j < g.N; ++j) {
            const double x2 = g.x(j);
            const double rr = x1 * x1 + x2 * x2;
            const double v = -2.0 * x1 / (width * width) * std::exp(-rr / (width * width));
            gf(i, j) = v;
            r2g(i, j) = rr * v;
            x1g(i, j) = x1 * v;
            x2g(i, j) = x2 * v;
        }
    }
    const Field a = frac_power(r2g, alpha);
    const Field b = frac_power(gf, alpha);
    const Field c = frac_power(gf, alpha - 2.0);
    const Field d = inverse(divergence(frac_power(forward(x1g), alpha - 2.0),
                                       frac_power(forward(x2g), alpha - 2.0)));
    double diff2 = 0.0, lhs2 = 0.0, rhs2 = 0.0;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const double rr = g.x(i) * g.x(i) + g.x(j) * g.x(j);
            const double lhs = a(i, j) - rr * b(i, j);
            const double rhs = alpha * alpha * c(i, j) - 2.0 * alpha * d(i, j);
            diff2 += (lhs - rhs) * (lhs - rhs);
            lhs2 += lhs * lhs;
            rhs2 += rhs * rhs;
        }
    }
    const double dx = g.dx();
    return {std::sqrt(diff2 / rhs2), std::sqrt(lhs2) * dx, std::sqrt(rhs2) * dx};
}

}  // namespace sqg
