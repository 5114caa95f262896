#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sqg/commutator.hpp"
#include "sqg/error.hpp"
#include "sqg/fft.hpp"
#include "sqg/grid.hpp"
#include "sqg/spectral_ops.hpp"

using namespace sqg;

namespace {

constexpr double kPi = std::numbers::pi;

Field sample(const Grid& g, auto&& f) {
    Field out(g);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) out(i, j) = f(g.x(i), g.x(j));
    }
    return out;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace

TEST_CASE("grid layout") {
    const Grid g = make_grid(16, 3.0);
    CHECK(g.dx() == doctest::Approx(6.0 / 16));
    CHECK(g.x(0) == -3.0);
    CHECK(g.mode(7) == 7);
    CHECK(g.mode(8) == -8);
    CHECK(g.mode(15) == -1);
    CHECK(g.k(1) == doctest::Approx(kPi / 3.0));
    CHECK_THROWS_AS(make_grid(15, 1.0), DomainError);
    CHECK_THROWS_AS(make_grid(8, 1.0), DomainError);
    CHECK_THROWS_AS(make_grid(16, 0.0), DomainError);
}

TEST_CASE("round trip and Parseval") {
    const Grid g = make_grid(64, 5.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    Field f(g);
    for (auto& v : f.data) v = normal(rng);
    const SpectralField fh = forward(f);
    CHECK(max_abs_diff(inverse(fh), f) < 1e-13);
    CHECK(l2_norm(fh) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
    // unitary scaling: the constant field 1 has a single coefficient N
    Field one(g);
    for (auto& v : one.data) v = 1.0;
    const SpectralField oh = forward(one);
    CHECK(std::abs(oh(0, 0) - std::complex<double>(g.N, 0.0)) < 1e-12);
    CHECK(std::abs(oh(1, 0)) < 1e-13);
}

TEST_CASE("derivatives and fractional powers of a plane wave") {
    const Grid g = make_grid(32, kPi);  // k = mode
    const Field f = sample(g, [](double x, double y) { return std::cos(3 * x + 2 * y); });
    const auto [fx, fy] = gradient(f);
    CHECK(max_abs_diff(fx, sample(g, [](double x, double y) { return -3 * std::sin(3 * x + 2 * y); })) < 1e-12);
    CHECK(max_abs_diff(fy, sample(g, [](double x, double y) { return -2 * std::sin(3 * x + 2 * y); })) < 1e-12);
    const double k = std::sqrt(13.0);
    for (double s : {0.5, 1.0, 2.0, -1.0}) {
        const Field p = frac_power(f, s);
        CHECK(max_abs_diff(p, sample(g, [&](double x, double y) { return std::pow(k, s) * std::cos(3 * x + 2 * y); })) < 1e-11);
    }
    // s = 0 keeps the mean; any other power annihilates it
    Field c(g);
    for (auto& v : c.data) v = 2.0;
    CHECK(frac_power(c, 0.0).data[5] == doctest::Approx(2.0));
    CHECK(std::abs(frac_power(c, 1.0).data[5]) < 1e-15);
    // semigroup of powers
    const Field r = random_bandlimited_field(g, 10, 3);
    CHECK(max_abs_diff(frac_power(frac_power(r, 0.3), 0.7), frac_power(r, 1.0)) < 1e-12);
}

TEST_CASE("Riesz velocity") {
    const Grid g = make_grid(32, kPi);
    // theta = cos(3x): u = (-R2 theta, R1 theta) = (0, -sin(3x))
    const Field th = sample(g, [](double x, double) { return std::cos(3 * x); });
    const auto [u1, u2] = riesz_velocity(th);
    CHECK(max_abs_diff(u1, Field(g)) < 1e-14);
    CHECK(max_abs_diff(u2, sample(g, [](double x, double) { return -std::sin(3 * x); })) < 1e-13);

    const SpectralField rh = forward(random_bandlimited_field(make_grid(128, 10.0), 40, 9));
    double scale = 0.0;
    for (const auto& c : rh.coeffs) scale = std::max(scale, std::abs(c));
    CHECK(riesz_divergence_max(rh) <= 4.0 * std::numeric_limits<double>::epsilon() * scale * std::sqrt(2.0) * std::abs(rh.grid.k(64)));
    // |u| = |theta| in L2 for mean-free theta
    const Field r = random_bandlimited_field(g, 10, 4);
    const auto [v1, v2] = riesz_velocity(r);
    double mean = 0.0;
    for (double v : r.data) mean += v;
    mean /= static_cast<double>(r.data.size());
    Field centred = r;
    for (auto& v : centred.data) v -= mean;
    CHECK(std::hypot(l2_norm(v1), l2_norm(v2)) == doctest::Approx(l2_norm(centred)).epsilon(1e-12));
}

TEST_CASE("dealiasing") {
    const Grid g = make_grid(48, 4.0);
    CHECK(dealias_keeps(g, 16, 0));
    CHECK_FALSE(dealias_keeps(g, 17, 0));
    CHECK_FALSE(dealias_keeps(g, 0, 48 - 17));
    CHECK(dealias_keeps(g, 0, 48 - 16));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    Field f(g);
    for (auto& v : f.data) v = normal(rng);
    const SpectralField once = dealias(forward(f));
    const SpectralField twice = dealias(once);
    CHECK(once.coeffs == twice.coeffs);
    // kept modes pass through bit-for-bit, the rest become exactly zero
    const SpectralField b = forward(random_bandlimited_field(g, 16, 2));
    const SpectralField bd = dealias(b);
    bool exact = true;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            exact = exact && bd(i, j) == (dealias_keeps(g, i, j) ? b(i, j) : std::complex<double>{});
        }
    }
    CHECK(exact);
}

TEST_CASE("random band-limited fields") {
    const Grid g = make_grid(64, 5.0);
    const Field a = random_bandlimited_field(g, 8, 42);
    const Field b = random_bandlimited_field(g, 8, 42);
    CHECK(a.data == b.data);
    double sup = 0.0;
    for (double v : a.data) sup = std::max(sup, std::abs(v));
    CHECK(sup == doctest::Approx(1.0));
    const SpectralField ah = forward(a);
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) {
            if (std::max(std::abs(g.mode(i)), std::abs(g.mode(j))) > 8) CHECK(std::abs(ah(i, j)) < 1e-13);
        }
    }
    CHECK_THROWS_AS(random_bandlimited_field(g, 30, 1), DomainError);
}

TEST_CASE("Stroock-Varopoulos inequality") {
    const Grid g = make_grid(64, 10.0);
    int cases = 0;
    for (double alpha : {0.5, 1.0, 1.7}) {
        for (int seed = 0; seed < 30; ++seed) {
            const Field f = random_bandlimited_field(g, 8, 500 + seed);
            for (double q : {2.0, 2.5, 3.0, 4.0, 6.0}) {
                const SvResult r = sv_inequality_check(f, q, alpha);
                CHECK(r.holds());
                ++cases;
            }
            Field positive = f;
            for (auto& v : positive.data) v += 1.25;
            const SvResult e = sv_inequality_check(positive, 2.0, alpha);
            CHECK(e.lhs == doctest::Approx(e.rhs).epsilon(1e-10));
        }
    }
    CHECK(cases == 450);
    // sign-changing field at q = 2: |f| loses energy, so the inequality is strict
    const SvResult strict = sv_inequality_check(random_bandlimited_field(g, 8, 1), 2.0, 1.0);
    CHECK(strict.lhs > strict.rhs * (1.0 + 1e-6));
    CHECK_THROWS_AS(sv_inequality_check(random_bandlimited_field(g, 8, 1), 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(sv_inequality_check(random_bandlimited_field(g, 8, 1), 2.0, 2.5), DomainError);
}

TEST_CASE("commutator identity") {
    for (double alpha : {1.0, 0.5, 0.3}) {
        const CommutatorResult r = commutator_check(alpha, 2.0);
        CAPTURE(alpha);
        CHECK(r.relative_error < 1e-10);
        CHECK(r.rhs_norm > 0.0);
    }
    // s = 0: the commutator vanishes
    CHECK(commutator_residual(0.0, 2.0) < 1e-12);
    // s = 2 is local: [-Delta, |x|^2] g = -4 g - 4 x.grad g, nonzero
    CHECK(commutator_residual(2.0, 2.0) > 1e-3);
    CHECK_THROWS_AS(commutator_check(1.5, 2.0), DomainError);
    CHECK_THROWS_AS(commutator_check(1.0, 5.0), DomainError);
}
