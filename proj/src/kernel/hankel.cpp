#include "sqg/hankel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sqg/error.hpp"

namespace sqg::hankel {

namespace {

constexpr int kMaxOrder = 3;
constexpr int kCachedZeros = 4096;

const std::vector<double>& zero_table(int order) {
    static const std::array<std::vector<double>, kMaxOrder + 1> tables = [] {
        std::array<std::vector<double>, kMaxOrder + 1> t;
        for (int v = 0; v <= kMaxOrder; ++v) {
            t[v].reserve(kCachedZeros);
            boost::math::cyl_bessel_j_zero(static_cast<double>(v), 1, kCachedZeros,
                                           std::back_inserter(t[v]));
        }
        return t;
    }();
    return tables[order];
}

// Euler transform of the partial sums ps[first..last]: repeated pairwise
// averaging down to a single value.
double averaged_tail(const std::vector<double>& ps, std::size_t first, std::size_t last,
                     std::vector<double>& scratch) {
    scratch.assign(ps.begin() + static_cast<std::ptrdiff_t>(first),
                   ps.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    for (std::size_t len = scratch.size(); len > 1; --len) {
        for (std::size_t j = 0; j + 1 < len; ++j) {
            scratch[j] = 0.5 * (scratch[j] + scratch[j + 1]);
        }
    }
    return scratch.front();
}

}  // namespace

double bessel_j(int order, double x) {
    switch (order) {
    case 0: return ::j0(x);
    case 1: return ::j1(x);
    default: return ::jn(order, x);
    }
}

double bessel_zero(int order, int n) {
    if (order < 0 || order > kMaxOrder || n < 1) {
        throw DomainError("bessel_zero: order must be in [0,3] and n >= 1");
    }
    if (n <= kCachedZeros) {
        return zero_table(order)[static_cast<std::size_t>(n - 1)];
    }
    return boost::math::cyl_bessel_j_zero(static_cast<double>(order), n);
}

Result bessel_integral(const std::function<double(double)>& envelope, int order,
                       const Options& options) {
    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto integrand = [&](double u) { return envelope(u) * bessel_j(order, u); };

    constexpr std::size_t kMaxWindow = 64;
    constexpr int kAccelerateUntil = 600;

    std::vector<double> partial;
    partial.reserve(256);
    std::vector<double> scratch;
    double sum = 0.0;
    double left = 0.0;
    double previous_estimate = 0.0;
    double previous_change = INFINITY;
    int small_terms = 0;

    Result result;
    for (int n = 1; n <= options.max_intervals; ++n) {
        const double right = bessel_zero(order, n);
        double panel_error = 0.0;
        const double term = Quad::integrate(integrand, left, right, 12,
                                            0.01 * options.rel_tol, &panel_error);
        left = right;
        sum += term;
        partial.push_back(sum);
        result.intervals = n;

        const double scale = std::abs(sum) * options.rel_tol + options.abs_tol;
        small_terms = (std::abs(term) <= 0.1 * scale) ? small_terms + 1 : 0;
        if (n >= options.min_intervals && small_terms >= 3) {
            result.value = sum;
            result.error = std::abs(term);
            result.converged = true;
            return result;
        }

        if (n < options.min_intervals) continue;
        if (n > kAccelerateUntil && n % 32 != 0) continue;

        const std::size_t last = partial.size() - 1;
        const std::size_t first = std::max(partial.size() / 2, partial.size() - std::min(partial.size(), kMaxWindow));
        const double estimate = averaged_tail(partial, first, last, scratch);
        const double change = std::abs(estimate - previous_estimate);
        const double tol = std::abs(estimate) * options.rel_tol + options.abs_tol;
        if (change <= tol && previous_change <= tol) {
            result.value = estimate;
            result.error = change;
            result.converged = true;
            return result;
        }
        previous_estimate = estimate;
        previous_change = change;
    }
    result.value = previous_estimate;
    result.error = previous_change;
    result.converged = false;
    return result;
}

}  // namespace sqg::hankel
