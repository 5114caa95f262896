#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sqg/checks.hpp"
#include "sqg/csv.hpp"
#include "sqg/error.hpp"
#include "sqg/kernel.hpp"
#include "sqg/linear_r2.hpp"
#include "sqg/norms.hpp"
#include "sqg/rate_fit.hpp"
#include "sqg/solver.hpp"

using namespace sqg;

namespace {

constexpr double kPi = std::numbers::pi;

const KernelProfile& poisson_profile() {
    static const KernelProfile p = build_profile(1.0, 2000.0, 1e-10);
    return p;
}

Field gaussian(const Grid& g, double amplitude, double width, Vec2 c = {0.0, 0.0}) {
    Field f(g);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const double dx = g.x(i) - c[0], dy = g.x(j) - c[1];
            f(i, j) = amplitude * std::exp(-(dx * dx + dy * dy) / (width * width));
        }
    }
    return f;
}

}  // namespace

TEST_CASE("rate fit recovers exact power laws") {
    std::vector<double> t, v;
    for (int i = 0; i < 30; ++i) {
        t.push_back(0.1 * std::pow(500.0, i / 29.0));
        v.push_back(3.0 * std::pow(1.0 + t.back(), -2.0));
    }
    const RateFit f = fit_decay_exponent(t, v, 5.0, 50.0);
    CHECK(f.exponent == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.residual_rms < 1e-12);
    CHECK(f.n_points >= 5);
    for (double e : {1.0, -0.5, -8.0}) {
        std::vector<double> w;
        for (double ti : t) w.push_back(std::pow(1.0 + ti, e));
        CHECK(fit_decay_exponent(t, w, 1.0, 50.0).exponent == doctest::Approx(e).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fit_decay_exponent(t, v, 45.0, 50.0), DomainError);
    std::vector<double> bad = v;
    bad[25] = 0.0;
    try {
        fit_decay_exponent(t, bad, 5.0, 50.0);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find(csv::format_double(t[25])) != std::string::npos);
    }
}

TEST_CASE("norms of a Gaussian") {
    const Grid g = make_grid(256, 12.0);
    const Field f = gaussian(g, 1.0, 1.0);
    CHECK(sup_norm(f) == doctest::Approx(1.0));
    // || |x|^2 e^{-|x|^2} ||_4^4 = 2 pi int r^9 e^{-4 r^2} dr = pi 4! / 4^5
    CHECK(weighted_lq_norm(f, 2.0, 4.0) == doctest::Approx(std::pow(kPi * 24.0 / 1024.0, 0.25)).epsilon(1e-10));
    // || e^{-|x|^2} ||_2^2 = pi / 2
    CHECK(weighted_lq_norm(f, 0.0, 2.0) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-12));
    // || |k|^1 f_hat ||^2 = || grad f ||^2 = pi
    CHECK(sobolev_seminorm(f, 1.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
    // || |x|^2 |grad f| ||_2^2 = 2 pi int r^4 4 r^2 e^{-2 r^2} r dr = 3 pi / 2
    CHECK(weighted_gradient_norm(f, 2.0) == doctest::Approx(std::sqrt(1.5 * kPi)).epsilon(1e-10));
}

TEST_CASE("weights and annulus restriction") {
    const Grid g = make_grid(128, 12.0);
    Field f(g);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            const double r = std::hypot(g.x(i), g.x(j));
            f(i, j) = r > 0.0 ? std::pow(r, -4.0) : 0.0;
        }
    }
    CHECK(weighted_sup_norm(f, 4.0, {2.0, 6.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(weighted_sup_norm(f, 5.0, {2.0, 6.0}) <= 6.0 + 1e-12);
    // on a 16-point grid with dx = 1.5 no radius falls in [3.1, 3.3]
    CHECK_THROWS_AS(weighted_sup_norm(Field(make_grid(16, 12.0)), 4.0, {3.1, 3.3}), DomainError);
    CHECK_THROWS_AS(weighted_sup_norm(f, 4.0, {2.0, 7.0}), DomainError);
    CHECK_THROWS_AS(validate(AnnulusSpec{5.0, 4.0}), DomainError);
    const auto pts = annulus_samples({5.0, 500.0}, 40, 24);
    CHECK(pts.size() == 960);
    CHECK(std::hypot(pts.front()[0], pts.front()[1]) == doctest::Approx(5.0));
    CHECK(std::hypot(pts.back()[0], pts.back()[1]) == doctest::Approx(500.0));
}

TEST_CASE("convolution quadrature against the heat semigroup") {
    const KernelProfile p = build_profile(2.0, 100.0, 1e-10);
    InitSpec init;
    init.amplitude = 0.7;
    init.width = 1.3;
    init.center = {0.5, -0.25};
    const R2Source src = R2Source::from_init(init);
    CHECK(src.mass() == doctest::Approx(0.7 * kPi * 1.3 * 1.3));
    const std::vector<Vec2> pts{{0.0, 0.0}, {0.5, -0.25}, {2.0, 1.0}, {4.0, -3.0}};
    for (double t : {1e-3, 0.5, 3.0}) {
        const auto conv = linear_part_r2(src, p, t, pts, 1e-10);
        const double s = 1.3 * 1.3 + 4.0 * t;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double dx = pts[i][0] - 0.5, dy = pts[i][1] + 0.25;
            const double exact = 0.7 * 1.3 * 1.3 / s * std::exp(-(dx * dx + dy * dy) / s);
            CAPTURE(t);
            CAPTURE(i);
            CHECK(conv[i].value == doctest::Approx(exact).epsilon(1e-7));
        }
    }
    init.kind = InitKind::expression;
    CHECK_THROWS_AS(R2Source::from_init(init), DomainError);
    CHECK_THROWS_AS(R2Source::from_kernel(0.0, 1.0), DomainError);
}

TEST_CASE("Poisson semigroup through the convolution oracle") {
    const auto& p = poisson_profile();
    const R2Source src = R2Source::from_kernel(1.0, 1.0);
    const std::vector<Vec2> pts{{0.0, 0.0}, {3.0, 4.0}, {20.0, 0.0}};
    for (double t : {0.5, 4.0}) {
        const auto conv = linear_part_r2(src, p, t, pts, 1e-10);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r = std::hypot(pts[i][0], pts[i][1]);
            const double exact = (t + 1.0) / (2.0 * kPi * std::pow((t + 1.0) * (t + 1.0) + r * r, 1.5));
            CHECK(conv[i].value == doctest::Approx(exact).epsilon(1e-7));
        }
    }
    for (double t : {1.0, 10.0}) {
        const SemigroupResult s = semigroup_oracle(p, t, {5.0, 50.0});
        CHECK(s.relative_gap <= 1e-5);
        CHECK(s.kernel_only > 0.0);
    }
}

TEST_CASE("record of the kernel itself") {
    const auto& p = poisson_profile();
    const Grid g = make_grid(128, 40.0);
    const double mass = 2.0;
    DiagnosticContext ctx{&p, gaussian(g, 1.0, 1.0), mass, {5.0, 20.0}};
    const Field k = kernel_field(p, g, 3.0, mass);
    const DiagnosticsRecord r = compute_record(k, 3.0, ctx);
    CHECK(r.annulus_cancel == 0.0);
    CHECK(r.l2_weighted == 0.0);
    CHECK(r.t == 3.0);
    const auto row = record_row(r);
    CHECK(row.size() == record_columns().size());
    const DiagnosticsRecord back = record_from_row(row);
    CHECK(back.wq_q4 == r.wq_q4);
    CHECK_THROWS_AS(record_from_row(std::vector<double>{1.0, 2.0}), IoError);
}

TEST_CASE("linear evolution has no remainder") {
    const auto& p = poisson_profile();
    const Grid g = make_grid(128, 40.0);
    const Field theta0 = gaussian(g, 0.01, 1.0, {1.0, 0.5});
    DiagnosticContext ctx{&p, theta0, grid_mass(theta0), {5.0, 20.0}};
    const DiagnosticsRecord r = compute_record(linear_evolve(theta0, 1.0, 2.0), 2.0, ctx);
    CHECK(r.v_weighted == 0.0);
    CHECK(r.annulus_cancel > 0.0);
}

TEST_CASE("far-field ratio of the kernel reproduces the tail check") {
    const auto& p = poisson_profile();
    const Grid g = make_grid(256, 40.0);
    const double mass = 0.5, t = 2.0;
    const Field k = kernel_field(p, g, t, mass);
    const std::vector<double> radii{10.0, 18.0};
    const auto ratios = corollary_check(k, t, p, mass, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double lo = radii[i] - 0.5 * g.dx(), hi = radii[i] + 0.5 * g.dx();
        const auto bounds = tail_limit_check(p, t, std::vector<double>{lo, hi});
        CHECK(ratios[i].samples > 0);
        CHECK(ratios[i].min >= std::min(bounds[0], bounds[1]) - 1e-9);
        CHECK(ratios[i].max <= std::max(bounds[0], bounds[1]) + 1e-9);
    }
    CHECK_THROWS_AS(corollary_check(k, t, p, 0.0, radii), DomainError);
    CHECK_THROWS_AS(corollary_check(k, t, p, mass, std::vector<double>{100.0}), DomainError);
}

TEST_CASE("series checks on synthetic records") {
    std::vector<DiagnosticsRecord> recs;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0}) {
        DiagnosticsRecord r;
        r.t = t;
        r.annulus_cancel = 2.0 * (1.0 + t);
        r.v_weighted = 0.1 * std::pow(1.0 + t, 0.5);
        r.wgrad_p4 = 1.0 + 0.5 * std::sin(t);
        r.l2_weighted = std::log(2.0 + t) * std::sqrt(std::log(2.0 + t));
        recs.push_back(r);
    }
    CHECK(theorem_check(recs, 1.0, 50.0).fit.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(theorem_check(recs, 1.0, 50.0).max_ratio == doctest::Approx(2.0));
    CHECK(v_decomposition(recs, 1.0, 50.0).fit.exponent == doctest::Approx(0.5).epsilon(1e-12));
    const WgradResult w = wgrad_check(recs, 50.0);
    CHECK(w.bounded);
    recs.back().wgrad_p4 = 10.0;
    CHECK_FALSE(wgrad_check(recs, 50.0).bounded);
    const L2LogResult l = l2_log_check(recs, 1.0);
    CHECK(l.max == doctest::Approx(1.0).epsilon(1e-14));

    const auto& p = poisson_profile();
    const ImageBudget ok = image_budget(p, 40.0, {5.0, 20.0}, recs);
    CHECK(ok.ok);
    for (auto& r : recs) r.annulus_cancel = 1e-12;
    CHECK_FALSE(image_budget(p, 40.0, {5.0, 20.0}, recs).ok);
}
