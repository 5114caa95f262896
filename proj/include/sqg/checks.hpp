#pragma once

#include <span>
#include <string>
#include <vector>

#include "sqg/grid.hpp"
#include "sqg/kernel.hpp"
#include "sqg/linear_r2.hpp"
#include "sqg/norms.hpp"
#include "sqg/rate_fit.hpp"

namespace sqg {

/// One checkpoint's norms. annulus_cancel and l2_weighted compare theta with
/// M G_alpha(t); v_weighted uses v = theta - exp(-t(-Delta)^{alpha/2}) theta0.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    double h3 = 0.0;
    double wq_q4 = 0.0;           // || |x|^2 theta ||_{L^4}
    double annulus_cancel = 0.0;  // sup_annulus |x|^{3+alpha} |theta - M G|
    double v_weighted = 0.0;      // sup_annulus |x|^{3+alpha} |v|
    double wgrad_p4 = 0.0;        // || |x|^2 grad theta ||_{L^4}
    double l2_weighted = 0.0;     // || |x|^2 (theta - M G) ||_{L^2(annulus)}
};

/// Column names in CSV order.
const std::vector<std::string>& record_columns();
std::vector<double> record_row(const DiagnosticsRecord& r);
DiagnosticsRecord record_from_row(std::span<const double> row);

struct DiagnosticContext {
    const KernelProfile* profile = nullptr;
    Field theta0;
    double mass = 0.0;
    AnnulusSpec annulus;
};

DiagnosticsRecord compute_record(const Field& theta, double t, const DiagnosticContext& ctx);

/// mass * G_alpha(t, x) at every grid point.
Field kernel_field(const KernelProfile& profile, const Grid& grid, double t, double mass);

/// n_radii log-spaced radii times n_angles equally spaced angles.
std::vector<Vec2> annulus_samples(const AnnulusSpec& annulus, int n_radii, int n_angles);

/// A series of a growth quantity with its power-law fit against 1 + t.
struct GrowthSeries {
    std::vector<double> times;
    std::vector<double> values;
    RateFit fit;
    double max_ratio = 0.0;  // sup_t value / (1 + t)
    int unconverged = 0;     // quadrature points that missed their tolerance
};

/// A_lin(t) = sup |x|^{3+alpha} |G(t) * theta0 - M G(t)| over R^2 sample
/// points of the annulus, fitted over all of t_list.
GrowthSeries lemma1_check(const R2Source& source, const KernelProfile& profile,
                          std::span<const double> t_list, const AnnulusSpec& annulus,
                          int n_radii = 40, int n_angles = 24, double rel_tol = 1e-8);

/// For theta0 = G_alpha(1, .), A_lin(t) by convolution quadrature versus
/// sup |x|^{3+alpha} |G(t+1) - G(t)| from the kernel alone.
struct SemigroupResult {
    double t = 0.0;
    double quadrature = 0.0;
    double kernel_only = 0.0;
    double relative_gap = 0.0;
};
SemigroupResult semigroup_oracle(const KernelProfile& profile, double t,
                                 const AnnulusSpec& annulus, int n_radii = 40);

/// Fit of a record column over [t_lo, t_hi].
GrowthSeries theorem_check(std::span<const DiagnosticsRecord> records, double t_lo, double t_hi);
GrowthSeries v_decomposition(std::span<const DiagnosticsRecord> records, double t_lo, double t_hi);

/// Nearest periodic image bound C_alpha t (2L - r_max)^{-2-alpha} against
/// 1% of annulus_cancel at each checkpoint with t > 0.
struct ImageBudget {
    bool ok = true;
    double worst_fraction = 0.0;  // max bound / annulus_cancel
    double worst_t = 0.0;
};
ImageBudget image_budget(const KernelProfile& profile, double L, const AnnulusSpec& annulus,
                         std::span<const DiagnosticsRecord> records);

/// |x|^{2+alpha} theta(t, x) / (C_alpha M t) over grid points with
/// | |x| - r | <= dx/2. Throws DomainError for M = 0.
struct CorollaryRatio {
    double r = 0.0;
    double min = 0.0;
    double max = 0.0;
    int samples = 0;
};
std::vector<CorollaryRatio> corollary_check(const Field& theta, double t,
                                            const KernelProfile& profile, double mass,
                                            std::span<const double> radii);

/// No sustained growth: max over [1, t_end] <= 2 max over [1, t_end/4].
struct WgradResult {
    double max_all = 0.0;
    double max_early = 0.0;
    bool bounded = false;
};
WgradResult wgrad_check(std::span<const DiagnosticsRecord> records, double t_end);

/// l2_weighted / (L_alpha(t) sqrt(log(2 + t))), L_alpha = log(2 + t) at
/// alpha = 1 and 1 below. Reported, not asserted.
struct L2LogResult {
    std::vector<double> times;
    std::vector<double> normalized;
    double max = 0.0;
};
L2LogResult l2_log_check(std::span<const DiagnosticsRecord> records, double alpha);

}  // namespace sqg
