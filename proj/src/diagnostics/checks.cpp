#include "sqg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqg/error.hpp"
#include "sqg/solver.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {"t",  "mass",   "linf",           "l2",
                                                  "h3", "wq_q4",  "annulus_cancel", "v_weighted",
                                                  "wgrad_p4", "l2_weighted"};
    return cols;
}

std::vector<double> record_row(const DiagnosticsRecord& r) {
    return {r.t,     r.mass,           r.linf,       r.l2,       r.h3,
            r.wq_q4, r.annulus_cancel, r.v_weighted, r.wgrad_p4, r.l2_weighted};
}

DiagnosticsRecord record_from_row(std::span<const double> row) {
    if (row.size() != record_columns().size()) throw IoError("diagnostics row has wrong width");
    return {row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7], row[8], row[9]};
}

Field kernel_field(const KernelProfile& profile, const Grid& g, double t, double mass) {
    Field f(g);
    if (t <= 0.0 || mass == 0.0) return f;
    for (int i = 0; i < g.N; ++i) {
        for (int j = 0; j < g.N; ++j) f(i, j) = mass * kernel_eval(profile, t, {g.x(i), g.x(j)});
    }
    return f;
}

DiagnosticsRecord compute_record(const Field& theta, double t, const DiagnosticContext& ctx) {
    if (!ctx.profile) throw DomainError("compute_record: kernel profile missing");
    const double alpha = ctx.profile->alpha;
    DiagnosticsRecord r;
    r.t = t;
    r.mass = grid_mass(theta);
    r.linf = sup_norm(theta);
    r.l2 = l2_norm(theta);
    r.h3 = sobolev_seminorm(theta, 3.0);
    r.wq_q4 = weighted_lq_norm(theta, 2.0, 4.0);
    r.wgrad_p4 = weighted_gradient_norm(theta, 4.0);

    Field diff = kernel_field(*ctx.profile, theta.grid, t, ctx.mass);
    for (std::size_t k = 0; k < diff.data.size(); ++k) diff.data[k] = theta.data[k] - diff.data[k];
    r.annulus_cancel = weighted_sup_norm(diff, 3.0 + alpha, ctx.annulus);
    r.l2_weighted = weighted_lq_norm(diff, 2.0, 2.0, ctx.annulus);

    Field v = linear_evolve(ctx.theta0, alpha, t);
    for (std::size_t k = 0; k < v.data.size(); ++k) v.data[k] = theta.data[k] - v.data[k];
    r.v_weighted = weighted_sup_norm(v, 3.0 + alpha, ctx.annulus);
    return r;
}

std::vector<Vec2> annulus_samples(const AnnulusSpec& a, int n_radii, int n_angles) {
    validate(a);
    if (n_radii < 2 || n_angles < 1) throw DomainError("annulus_samples: too few samples");
    std::vector<Vec2> pts;
    const double ratio = std::log(a.r_max / a.r_min) / (n_radii - 1);
    for (int i = 0; i < n_radii; ++i) {
        const double r = a.r_min * std::exp(ratio * i);
        for (int j = 0; j < n_angles; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_angles;
            pts.push_back({r * std::cos(phi), r * std::sin(phi)});
        }
    }
    return pts;
}

namespace {

GrowthSeries fit_series(std::vector<double> times, std::vector<double> values, double t_lo,
                        double t_hi) {
    GrowthSeries s;
    s.fit = fit_decay_exponent(times, values, t_lo, t_hi);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= t_lo && times[i] <= t_hi) {
            s.max_ratio = std::max(s.max_ratio, values[i] / (1.0 + times[i]));
        }
    }
    s.times = std::move(times);
    s.values = std::move(values);
    return s;
}

template <class Get>
GrowthSeries record_series(std::span<const DiagnosticsRecord> records, double t_lo, double t_hi,
                           Get get) {
    std::vector<double> times, values;
    for (const auto& r : records) {
        times.push_back(r.t);
        values.push_back(get(r));
    }
    return fit_series(std::move(times), std::move(values), t_lo, t_hi);
}

}  // namespace

GrowthSeries lemma1_check(const R2Source& source, const KernelProfile& profile,
                          std::span<const double> t_list, const AnnulusSpec& annulus, int n_radii,
                          int n_angles, double rel_tol) {
    const auto pts = annulus_samples(annulus, n_radii, n_angles);
    const double mass = source.mass();
    const double w = 3.0 + profile.alpha;
    std::vector<double> times, values;
    int unconverged = 0;
    for (double t : t_list) {
        const auto conv = linear_part_r2(source, profile, t, pts, rel_tol);
        double best = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!conv[i].converged) ++unconverged;
            const double r = std::hypot(pts[i][0], pts[i][1]);
            const double gap = conv[i].value - mass * kernel_eval(profile, t, pts[i]);
            best = std::max(best, std::pow(r, w) * std::abs(gap));
        }
        times.push_back(t);
        values.push_back(best);
    }
    if (times.empty()) throw DomainError("lemma1_check: empty time list");
    auto s = fit_series(times, values, *std::min_element(times.begin(), times.end()),
                        *std::max_element(times.begin(), times.end()));
    s.unconverged = unconverged;
    return s;
}

SemigroupResult semigroup_oracle(const KernelProfile& profile, double t, const AnnulusSpec& annulus,
                                 int n_radii) {
    const auto source = R2Source::from_kernel(1.0, 1.0);
    const auto pts = annulus_samples(annulus, n_radii, 1);
    const auto conv = linear_part_r2(source, profile, t, pts);
    const double w = 3.0 + profile.alpha;
    SemigroupResult res;
    res.t = t;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = pts[i][0];
        const double g_t = kernel_eval_radial(profile, t, r);
        res.quadrature = std::max(res.quadrature, std::pow(r, w) * std::abs(conv[i].value - g_t));
        res.kernel_only = std::max(
            res.kernel_only, std::pow(r, w) * std::abs(kernel_eval_radial(profile, t + 1.0, r) - g_t));
    }
    res.relative_gap = std::abs(res.quadrature - res.kernel_only) / res.kernel_only;
    return res;
}

GrowthSeries theorem_check(std::span<const DiagnosticsRecord> records, double t_lo, double t_hi) {
    return record_series(records, t_lo, t_hi, [](const DiagnosticsRecord& r) { return r.annulus_cancel; });
}

GrowthSeries v_decomposition(std::span<const DiagnosticsRecord> records, double t_lo, double t_hi) {
    return record_series(records, t_lo, t_hi, [](const DiagnosticsRecord& r) { return r.v_weighted; });
}

ImageBudget image_budget(const KernelProfile& profile, double L, const AnnulusSpec& annulus,
                         std::span<const DiagnosticsRecord> records) {
    ImageBudget b;
    const double reach = std::pow(2.0 * L - annulus.r_max, -2.0 - profile.alpha);
    for (const auto& r : records) {
        if (r.t <= 0.0) continue;
        const double bound = profile.c_alpha * r.t * reach;
        const double fraction = r.annulus_cancel > 0.0 ? bound / r.annulus_cancel : INFINITY;
        if (fraction > b.worst_fraction) {
            b.worst_fraction = fraction;
            b.worst_t = r.t;
        }
        if (bound > 0.01 * r.annulus_cancel) b.ok = false;
    }
    return b;
}

std::vector<CorollaryRatio> corollary_check(const Field& theta, double t, const KernelProfile& profile,
                                            double mass, std::span<const double> radii) {
    if (mass == 0.0) throw DomainError("corollary_check: the limit degenerates for M = 0");
    if (!(t > 0.0)) throw DomainError("corollary_check: t must be positive");
    const Grid& g = theta.grid;
    const double scale = profile.c_alpha * mass * t;
    std::vector<CorollaryRatio> out;
    for (double rad : radii) {
        CorollaryRatio c;
        c.r = rad;
        c.min = INFINITY;
        c.max = -INFINITY;
        for (int i = 0; i < g.N; ++i) {
            for (int j = 0; j < g.N; ++j) {
                const double r = std::hypot(g.x(i), g.x(j));
                if (std::abs(r - rad) > 0.5 * g.dx()) continue;
                const double ratio = std::pow(r, 2.0 + profile.alpha) * theta(i, j) / scale;
                c.min = std::min(c.min, ratio);
                c.max = std::max(c.max, ratio);
                ++c.samples;
            }
        }
        if (c.samples == 0) throw DomainError("corollary_check: no grid points near requested radius");
        out.push_back(c);
    }
    return out;
}

WgradResult wgrad_check(std::span<const DiagnosticsRecord> records, double t_end) {
    WgradResult w;
    for (const auto& r : records) {
        if (r.t < 1.0) continue;
        w.max_all = std::max(w.max_all, r.wgrad_p4);
        if (r.t <= 0.25 * t_end) w.max_early = std::max(w.max_early, r.wgrad_p4);
    }
    w.bounded = w.max_early > 0.0 && w.max_all <= 2.0 * w.max_early;
    return w;
}

L2LogResult l2_log_check(std::span<const DiagnosticsRecord> records, double alpha) {
    L2LogResult res;
    for (const auto& r : records) {
        const double log_factor = std::log(2.0 + r.t);
        const double l_alpha = alpha == 1.0 ? log_factor : 1.0;
        const double v = r.l2_weighted / (l_alpha * std::sqrt(log_factor));
        res.times.push_back(r.t);
        res.normalized.push_back(v);
        res.max = std::max(res.max, v);
    }
    return res;
}

}  // namespace sqg
