#include "sqg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqg/error.hpp"
#include "sqg/fft.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

namespace {

using cplx = std::complex<double>;

std::vector<double> symbol_of(const Grid& g, double alpha) {
    std::vector<double> s(g.size());
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            s[static_cast<std::size_t>(i) * g.N + j] = std::pow(std::hypot(g.k(i), g.k(j)), alpha);
        }
    }
    return s;
}

void refresh(SolverState& state) {
    if (state.config.linear_only) {
        state.nonlinear = SpectralField(state.grid);
        state.max_speed = 0.0;
    } else {
        state.nonlinear = nonlinear_term(state.theta_hat, state.config.dealias, &state.max_speed);
    }
}

void cache_factors(SolverState& state, double h) {
    if (h == state.cached_h) return;
    const std::size_t n = state.symbol.size();
    state.decay_full.resize(n);
    state.decay_half.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        state.decay_full[k] = std::exp(-state.symbol[k] * h);
        state.decay_half[k] = std::exp(-state.symbol[k] * 0.5 * h);
    }
    state.cached_h = h;
}

}  // namespace

SolverState make_state(const SolverConfig& config, const Field& theta, double t) {
    validate(config);
    SolverState state;
    state.config = config;
    state.grid = make_grid(config.N, config.L);
    require_same_grid(state.grid, theta.grid, "make_state");
    state.t = t;
    state.theta_hat = forward(theta);
    state.symbol = symbol_of(state.grid, config.alpha);
    refresh(state);
    return state;
}

Field sync_physical(SolverState& state) {
    Field f = inverse(state.theta_hat);
    state.theta_hat = forward(f);
    refresh(state);
    return f;
}

SpectralField nonlinear_term(const SpectralField& theta_hat, bool dealias_on, double* max_speed) {
    const SpectralField in = dealias_on ? dealias(theta_hat) : theta_hat;
    const auto [u1_hat, u2_hat] = riesz_velocity(in);
    const Field theta = inverse(in);
    Field f1 = inverse(u1_hat);
    Field f2 = inverse(u2_hat);
    double speed = 0.0;
    for (std::size_t n = 0; n < theta.data.size(); ++n) {
        speed = std::max(speed, std::hypot(f1.data[n], f2.data[n]));
        f1.data[n] *= theta.data[n];
        f2.data[n] *= theta.data[n];
    }
    if (max_speed) *max_speed = speed;
    SpectralField out = divergence(forward(f1), forward(f2));
    for (auto& c : out.coeffs) c = -c;
    return dealias_on ? dealias(out) : out;
}

double cfl_dt(const SolverState& state, double t_next) {
    const double advective = state.config.cfl * state.grid.dx() / std::max(state.max_speed, 1e-12);
    return std::min({advective, state.config.max_dt, t_next - state.t});
}

void step(SolverState& state, double h) {
    if (!(h > 0.0)) throw DomainError("step: dt must be positive");
    cache_factors(state, h);
    const Grid& g = state.grid;
    const std::size_t n = g.size();
    const auto& ef = state.decay_full;
    const auto& eh = state.decay_half;
    const auto& th = state.theta_hat.coeffs;
    const auto& a = state.nonlinear.coeffs;
    const bool linear = state.config.linear_only;
    const bool da = state.config.dealias;

    SpectralField work(g);
    SpectralField b(g), c(g), d(g);
    if (!linear) {
        for (std::size_t k = 0; k < n; ++k) work.coeffs[k] = eh[k] * (th[k] + 0.5 * h * a[k]);
        b = nonlinear_term(work, da);
        for (std::size_t k = 0; k < n; ++k) work.coeffs[k] = eh[k] * th[k] + 0.5 * h * b.coeffs[k];
        c = nonlinear_term(work, da);
        for (std::size_t k = 0; k < n; ++k) {
            work.coeffs[k] = ef[k] * th[k] + h * eh[k] * c.coeffs[k];
        }
        d = nonlinear_term(work, da);
    }

    SpectralField next(g);
    double dissipated = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < n; ++k) {
        cplx v = ef[k] * th[k];
        if (!linear) {
            v += h / 6.0 * (ef[k] * a[k] + 2.0 * eh[k] * (b.coeffs[k] + c.coeffs[k]) + d.coeffs[k]);
        }
        finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
        next.coeffs[k] = v;
        // Exact dissipation of each mode under the linear flow, averaged over
        // the integrating-factor amplitude at both ends of the step.
        const double e2 = ef[k] * ef[k];
        if (state.symbol[k] == 0.0) continue;
        const double start = std::norm(th[k]) * (1.0 - e2);
        const double end = e2 > 1e-200 ? std::norm(v) * (1.0 / e2 - 1.0) : start;
        dissipated += 0.5 * (start + end);
    }
    if (!finite) {
        std::ostringstream msg;
        msg << "non-finite solution at step " << state.steps + 1 << " (t=" << state.t
            << ", dt=" << h << ", max|u|=" << state.max_speed << ")";
        throw NumericalError(msg.str());
    }
    state.theta_hat = std::move(next);
    state.dissipation += dissipated * g.dx() * g.dx();
    state.t += h;
    ++state.steps;
    refresh(state);
}

Field advance_to(SolverState& state, double t_target) {
    while (state.t < t_target) {
        const double dt = cfl_dt(state, t_target);
        const bool last = dt >= t_target - state.t;
        step(state, dt);
        if (last) state.t = t_target;
    }
    return sync_physical(state);
}

Field linear_evolve(const Field& theta0, double alpha, double t) {
    if (!(t >= 0.0)) throw DomainError("linear_evolve: t must be >= 0");
    if (t == 0.0) return theta0;
    SpectralField hat = forward(theta0);
    const Grid& g = theta0.grid;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            hat(i, j) *= std::exp(-std::pow(std::hypot(g.k(i), g.k(j)), alpha) * t);
        }
    }
    return inverse(hat);
}

double pde_residual(const Field& prev, const Field& mid, const Field& next, double h,
                    double alpha, bool nonlinear, bool dealias_on) {
    require_same_grid(prev.grid, mid.grid, "pde_residual");
    require_same_grid(mid.grid, next.grid, "pde_residual");
    if (!(h > 0.0)) throw DomainError("pde_residual: h must be positive");
    const SpectralField mid_hat = forward(mid);
    SpectralField r = frac_power(mid_hat, alpha);
    if (nonlinear) {
        const SpectralField nl = nonlinear_term(mid_hat, dealias_on);
        for (std::size_t k = 0; k < r.coeffs.size(); ++k) r.coeffs[k] -= nl.coeffs[k];
    }
    Field res = inverse(r);
    for (std::size_t k = 0; k < res.data.size(); ++k) {
        res.data[k] += (next.data[k] - prev.data[k]) / (2.0 * h);
    }
    return l2_norm(res);
}

}  // namespace sqg
