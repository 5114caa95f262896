#pragma once

#include <optional>

#include "sqg/grid.hpp"

namespace sqg {

/// r_min <= |x| <= r_max. On a grid the annulus must fit inside |x| <= L/2.
struct AnnulusSpec {
    double r_min = 5.0;
    double r_max = 20.0;
};

/// Throws DomainError unless 0 < r_min < r_max (and r_max <= L/2 when L is given).
void validate(const AnnulusSpec& annulus, std::optional<double> L = std::nullopt);

/// max over grid points in the annulus of |x|^w |f(x)|. Throws DomainError
/// if no grid point falls inside.
double weighted_sup_norm(const Field& f, double w, const AnnulusSpec& annulus);

/// (sum (|x|^w |f|)^q dx^2)^{1/q} over the whole box or over an annulus.
double weighted_lq_norm(const Field& f, double w, double q,
                        const std::optional<AnnulusSpec>& region = std::nullopt);

/// || |k|^sigma f_hat ||_2, continuum normalization.
double sobolev_seminorm(const Field& f, double sigma);

double sup_norm(const Field& f);

/// || |x|^2 |grad f| ||_{L^p(box)} with the gradient taken spectrally.
double weighted_gradient_norm(const Field& f, double p);

}  // namespace sqg
