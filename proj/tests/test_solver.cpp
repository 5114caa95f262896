#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sqg/error.hpp"
#include "sqg/expression.hpp"
#include "sqg/fft.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/solver.hpp"
#include "sqg/spectral_ops.hpp"

using namespace sqg;

namespace {

SolverConfig small_config(double alpha, double amplitude, bool linear_only = false) {
    SolverConfig c;
    c.alpha = alpha;
    c.N = 64;
    c.L = 10.0;
    c.t_end = 1.0;
    c.checkpoints = {0.5, 1.0};
    c.init.kind = InitKind::two_bump;
    c.init.amplitude = amplitude;
    c.init.width = 1.0;
    c.init.center = {1.0, 0.0};
    c.init.amplitude2 = 0.5 * amplitude;
    c.init.center2 = {-1.0, 1.0};
    c.linear_only = linear_only;
    return c;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

Field evolve_fixed(const SolverConfig& c, double t, int steps) {
    SolverState s = make_state(c, make_initial(c).theta, 0.0);
    for (int k = 0; k < steps; ++k) step(s, t / steps);
    return inverse(s.theta_hat);
}

}  // namespace

TEST_CASE("expression parser") {
    CHECK(Expression::parse("1 + 2*3")(0, 0) == 7.0);
    CHECK(Expression::parse("2^3^2")(0, 0) == 512.0);
    CHECK(Expression::parse("-2^2")(0, 0) == -4.0);
    CHECK(Expression::parse("r")(3, 4) == doctest::Approx(5.0));
    CHECK(Expression::parse("exp(-(x^2 + y^2))")(1, 0) == doctest::Approx(std::exp(-1.0)));
    CHECK(Expression::parse("sin(pi/2) + log(e) + sqrt(4) + abs(-1) + cos(0) + tanh(0)")(0, 0) ==
          doctest::Approx(6.0));
    CHECK_THROWS_AS(Expression::parse("1 +"), ConfigError);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), ConfigError);
    CHECK_THROWS_AS(Expression::parse("(1"), ConfigError);
    try {
        Expression::parse("x + $");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("column 5") != std::string::npos);
    }
}

TEST_CASE("config validation") {
    SolverConfig c = small_config(1.0, 0.01);
    CHECK_NOTHROW(validate(c));
    c.alpha = 0.0;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = small_config(1.0, 0.01);
    c.init.width = 2.0;  // > L/8
    CHECK_THROWS_AS(validate(c), DomainError);
    c = small_config(1.0, 0.01);
    c.checkpoints = {0.5, 0.4, 1.0};
    CHECK_THROWS_AS(validate(c), DomainError);
    c = small_config(1.0, 0.01);
    c.checkpoints = {0.5};
    CHECK_THROWS_AS(validate(c), DomainError);
    const auto cp = log_checkpoints(0.1, 50.0, 41);
    CHECK(cp.size() == 41);
    CHECK(cp.front() == doctest::Approx(0.1));
    CHECK(cp.back() == 50.0);
}

TEST_CASE("initial data and mass") {
    const SolverConfig c = small_config(1.0, 0.01);
    const InitialData init = make_initial(c);
    const double exact = std::numbers::pi * (0.01 + 0.005);
    CHECK(init.mass == doctest::Approx(exact).epsilon(1e-12));
    CHECK(grid_mass(init.theta) == init.mass);
    SolverConfig e = c;
    e.init.kind = InitKind::expression;
    e.init.expression = "0.01*exp(-((x-1)^2 + y^2)) + 0.005*exp(-((x+1)^2 + (y-1)^2))";
    CHECK(max_abs_diff(make_initial(e).theta, init.theta) < 1e-17);
}

TEST_CASE("linear-only stepping is exact") {
    const SolverConfig c = small_config(0.7, 1.0, true);
    const InitialData init = make_initial(c);
    SolverState s = make_state(c, init.theta, 0.0);
    advance_to(s, 0.5);
    advance_to(s, 1.0);
    CHECK(s.t == 1.0);
    const Field exact = linear_evolve(init.theta, c.alpha, 1.0);
    CHECK(max_abs_diff(inverse(s.theta_hat), exact) < 1e-14);
    // semigroup
    const Field twice = linear_evolve(linear_evolve(init.theta, c.alpha, 0.3), c.alpha, 0.7);
    CHECK(max_abs_diff(twice, exact) < 1e-14);
    CHECK(max_abs_diff(linear_evolve(init.theta, c.alpha, 0.0), init.theta) < 1e-15);
    CHECK_THROWS_AS(linear_evolve(init.theta, c.alpha, -1.0), DomainError);
}

TEST_CASE("zero mode is conserved by the nonlinear flow") {
    const SolverConfig c = small_config(1.0, 0.5);
    const InitialData init = make_initial(c);
    SolverState s = make_state(c, init.theta, 0.0);
    advance_to(s, 1.0);
    CHECK(std::abs(grid_mass(inverse(s.theta_hat)) - init.mass) <= 1e-13 * init.mass);
    CHECK(std::abs(s.theta_hat(0, 0) - forward(init.theta)(0, 0)) <= 1e-14 * std::abs(forward(init.theta)(0, 0)));
    CHECK(s.max_speed > 0.0);
}

TEST_CASE("nonlinear term preserves the mean and is orthogonal to theta") {
    const Grid g = make_grid(64, 10.0);
    const SpectralField th = dealias(forward(random_bandlimited_field(g, 12, 8)));
    double speed = 0.0;
    const SpectralField n = nonlinear_term(th, true, &speed);
    CHECK(std::abs(n(0, 0)) < 1e-14);
    CHECK(speed > 0.0);
    // int theta div(theta u) = 0 for divergence-free u
    double inner = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < th.coeffs.size(); ++i) {
        inner += std::real(std::conj(th.coeffs[i]) * n.coeffs[i]);
        scale += std::abs(th.coeffs[i]) * std::abs(n.coeffs[i]);
    }
    CHECK(std::abs(inner) < 1e-12 * scale);
}

TEST_CASE("RK4 local error shrinks like h^5") {
    const SolverConfig c = small_config(1.0, 2.0);
    const Field ref = evolve_fixed(c, 0.2, 64);
    std::vector<double> errors;
    for (int steps : {1, 2, 4}) errors.push_back(max_abs_diff(evolve_fixed(c, 0.2, steps), ref));
    // global error over a fixed interval: ratio 16 per halving
    const double r1 = errors[0] / errors[1];
    const double r2 = errors[1] / errors[2];
    CAPTURE(r1);
    CAPTURE(r2);
    CHECK(r2 > 12.0);
    CHECK(r2 < 20.0);
    // one step versus two half steps: the difference is the local error, h^5
    SolverState a = make_state(c, make_initial(c).theta, 0.0);
    SolverState b = a;
    step(a, 0.02);
    step(b, 0.01);
    step(b, 0.01);
    SolverState a2 = make_state(c, make_initial(c).theta, 0.0);
    SolverState b2 = a2;
    step(a2, 0.01);
    step(b2, 0.005);
    step(b2, 0.005);
    const double d1 = max_abs_diff(inverse(a.theta_hat), inverse(b.theta_hat));
    const double d2 = max_abs_diff(inverse(a2.theta_hat), inverse(b2.theta_hat));
    CAPTURE(d1 / d2);
    CHECK(d1 / d2 > 24.0);
    CHECK(d1 / d2 < 40.0);
}

TEST_CASE("cfl step respects its caps") {
    SolverConfig c = small_config(1.0, 0.01);
    c.max_dt = 0.05;
    SolverState s = make_state(c, make_initial(c).theta, 0.0);
    CHECK(cfl_dt(s, 1.0) == 0.05);
    CHECK(cfl_dt(s, 0.01) == doctest::Approx(0.01));
    SolverConfig fast = small_config(1.0, 50.0);
    SolverState f = make_state(fast, make_initial(fast).theta, 0.0);
    CHECK(cfl_dt(f, 1.0) == doctest::Approx(fast.cfl * f.grid.dx() / f.max_speed));
    CHECK_THROWS_AS(step(s, 0.0), DomainError);
}

TEST_CASE("PDE residual converges at second order") {
    const SolverConfig c = small_config(1.0, 1.0);
    const InitialData init = make_initial(c);
    std::vector<double> residuals;
    for (double h : {0.04, 0.02, 0.01}) {
        SolverState s = make_state(c, init.theta, 0.0);
        advance_to(s, 0.5 - h);
        const Field prev = inverse(s.theta_hat);
        advance_to(s, 0.5);
        const Field mid = inverse(s.theta_hat);
        advance_to(s, 0.5 + h);
        const Field next = inverse(s.theta_hat);
        residuals.push_back(pde_residual(prev, mid, next, h, c.alpha, true));
    }
    CAPTURE(residuals[0]);
    CAPTURE(residuals[1]);
    CAPTURE(residuals[2]);
    CHECK(residuals[0] / residuals[1] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(residuals[1] / residuals[2] == doctest::Approx(4.0).epsilon(0.1));
    // dropping the nonlinearity leaves an O(1) residual
    SolverState s = make_state(c, init.theta, 0.0);
    advance_to(s, 0.49);
    const Field p = inverse(s.theta_hat);
    advance_to(s, 0.5);
    const Field m = inverse(s.theta_hat);
    advance_to(s, 0.51);
    const Field n = inverse(s.theta_hat);
    CHECK(pde_residual(p, m, n, 0.01, c.alpha, false) > 100.0 * residuals[2]);
}

TEST_CASE("energy decreases by the dissipation") {
    const SolverConfig c = small_config(0.5, 1.0);
    const InitialData init = make_initial(c);
    SolverState s = make_state(c, init.theta, 0.0);
    const double e0 = std::pow(l2_norm(init.theta), 2);
    advance_to(s, 1.0);
    const double e1 = std::pow(l2_norm(inverse(s.theta_hat)), 2);
    CHECK(e0 - e1 == doctest::Approx(s.dissipation).epsilon(1e-6));
}

TEST_CASE("runs are deterministic and resume bit-identically") {
    const SolverConfig c = small_config(1.0, 1.0);
    const InitialData init = make_initial(c);
    SolverState a = make_state(c, init.theta, 0.0);
    advance_to(a, 0.5);
    advance_to(a, 1.0);

    SolverState b = make_state(c, init.theta, 0.0);
    const Field half = advance_to(b, 0.5);
    const auto path = std::filesystem::temp_directory_path() / "sqg_test_resume.bin";
    write_snapshot(path, {c.alpha, b.t, half});
    const Snapshot snap = read_snapshot(path);
    SolverState r = make_state(c, snap.theta, snap.t);
    advance_to(r, 1.0);

    SolverState d = make_state(c, init.theta, 0.0);
    advance_to(d, 0.5);
    advance_to(d, 1.0);
    CHECK(inverse(a.theta_hat).data == inverse(d.theta_hat).data);
    CHECK(inverse(a.theta_hat).data == inverse(r.theta_hat).data);
    std::filesystem::remove(path);
}

TEST_CASE("snapshot format") {
    const Grid g = make_grid(16, 2.0);
    Snapshot s{0.75, 3.25, random_bandlimited_field(g, 4, 1)};
    const auto path = std::filesystem::temp_directory_path() / "sqg_test_snap.bin";
    write_snapshot(path, s);
    CHECK(std::filesystem::file_size(path) == 36 + 16 * 16 * 8);
    const Snapshot back = read_snapshot(path);
    CHECK(back.alpha == 0.75);
    CHECK(back.t == 3.25);
    CHECK(back.theta.grid == g);
    CHECK(back.theta.data == s.theta.data);

    std::filesystem::resize_file(path, 36 + 100);
    CHECK_THROWS_AS(read_snapshot(path), IoError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "JUNKJUNKJUNKJUNKJUNKJUNKJUNKJUNKJUNK";
    }
    CHECK_THROWS_AS(read_snapshot(path), IoError);
    CHECK_THROWS_AS(read_snapshot(path.string() + ".missing"), IoError);
    std::filesystem::remove(path);
}
