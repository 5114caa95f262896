#include "sqg/rate_fit.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "sqg/csv.hpp"
#include "sqg/error.hpp"

namespace sqg {

RateFit fit_decay_exponent(std::span<const double> times, std::span<const double> values,
                           double t_lo, double t_hi) {
    if (times.size() != values.size()) throw DomainError("fit_decay_exponent: length mismatch");
    std::vector<double> xs, ys;
    std::vector<double> bad;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(values[i] > 0.0)) {
            bad.push_back(times[i]);
            continue;
        }
        xs.push_back(std::log1p(times[i]));
        ys.push_back(std::log(values[i]));
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "fit_decay_exponent: nonpositive values at t =";
        for (double t : bad) msg << ' ' << csv::format_double(t);
        throw NumericalError(msg.str());
    }
    if (xs.size() < 5) {
        throw DomainError("fit_decay_exponent: need at least 5 samples in the window");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RateFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.exponent * xs[i]);
        ss += e * e;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.n_points = static_cast<int>(xs.size());
    return fit;
}

}  // namespace sqg
