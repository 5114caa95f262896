#include <cmath>
#include <string>

#include "sqg/error.hpp"
#include "sqg/expression.hpp"
#include "sqg/solver.hpp"

namespace sqg {

namespace {

double bump(double amplitude, double width, Vec2 c, Vec2 x) {
    const double dx = x[0] - c[0];
    const double dy = x[1] - c[1];
    return amplitude * std::exp(-(dx * dx + dy * dy) / (width * width));
}

}  // namespace

double initial_value(const InitSpec& init, Vec2 x) {
    switch (init.kind) {
    case InitKind::gaussian: return bump(init.amplitude, init.width, init.center, x);
    case InitKind::two_bump:
        return bump(init.amplitude, init.width, init.center, x) +
               bump(init.amplitude2, init.width, init.center2, x);
    case InitKind::expression: return Expression::parse(init.expression)(x[0], x[1]);
    }
    return 0.0;
}

double grid_mass(const Field& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return s * f.grid.dx() * f.grid.dx();
}

std::vector<double> log_checkpoints(double t_first, double t_end, int count) {
    if (!(t_first > 0.0) || !(t_end >= t_first) || count < 1) {
        throw DomainError("log_checkpoints: need 0 < t_first <= t_end and count >= 1");
    }
    std::vector<double> out;
    if (count == 1) return {t_end};
    const double ratio = std::log(t_end / t_first) / (count - 1);
    for (int i = 0; i < count - 1; ++i) out.push_back(t_first * std::exp(ratio * i));
    out.push_back(t_end);
    return out;
}

void validate(const SolverConfig& c) {
    if (!(c.alpha > 0.0 && c.alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
    make_grid(c.N, c.L);
    if (!(c.cfl > 0.0)) throw DomainError("cfl must be positive");
    if (!(c.max_dt > 0.0)) throw DomainError("max_dt must be positive");
    if (!(c.t_end > 0.0)) throw DomainError("t_end must be positive");
    if (c.checkpoints.empty() || c.checkpoints.back() != c.t_end) {
        throw DomainError("checkpoints must end at t_end");
    }
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        const double prev = i == 0 ? 0.0 : c.checkpoints[i - 1];
        if (!(c.checkpoints[i] > prev)) {
            throw DomainError("checkpoints must be positive and strictly increasing");
        }
    }
    if (c.init.kind != InitKind::expression) {
        if (!(c.init.width > 0.0) || c.init.width > c.L / 8.0) {
            throw DomainError("initial width must lie in (0, L/8]");
        }
        if (c.init.kind == InitKind::gaussian && c.init.amplitude < 0.0) {
            throw DomainError("gaussian amplitude must be >= 0");
        }
    } else {
        Expression::parse(c.init.expression);
    }
}

InitialData make_initial(const SolverConfig& config) {
    validate(config);
    const Grid g = make_grid(config.N, config.L);
    Field theta(g);
    if (config.init.kind == InitKind::expression) {
        const auto expr = Expression::parse(config.init.expression);
        for (int i = 0; i < g.N; ++i) {
            for (int j = 0; j < g.N; ++j) theta(i, j) = expr(g.x(i), g.x(j));
        }
    } else {
        for (int i = 0; i < g.N; ++i) {
            for (int j = 0; j < g.N; ++j) theta(i, j) = initial_value(config.init, {g.x(i), g.x(j)});
        }
    }
    for (double v : theta.data) {
        if (!std::isfinite(v)) throw NumericalError("initial datum is not finite on the grid");
    }
    const double mass = grid_mass(theta);
    return {std::move(theta), mass};
}

}  // namespace sqg
