#pragma once

#include <cstdint>
#include <utility>

#include "sqg/grid.hpp"

namespace sqg {

/// Multiplies every coefficient by |k|^s. The k = 0 mode is kept for s = 0
/// and annihilated otherwise.
SpectralField frac_power(const SpectralField& f, double s);
Field frac_power(const Field& f, double s);

/// u = (-R2 theta, R1 theta) with multipliers (-i k2/|k|, i k1/|k|), zero at
/// k = 0 and on the Nyquist row/column so the output is real.
std::pair<SpectralField, SpectralField> riesz_velocity(const SpectralField& theta);
std::pair<Field, Field> riesz_velocity(const Field& theta);

/// 2/3 rule: zeroes modes with 3 max(|m1|,|m2|) > N.
SpectralField dealias(const SpectralField& f);
bool dealias_keeps(const Grid& g, int i, int j);

/// Spectral derivative along axis 0 (x1) or 1 (x2); Nyquist modes zeroed.
SpectralField derivative(const SpectralField& f, int axis);
std::pair<Field, Field> gradient(const Field& f);
SpectralField divergence(const SpectralField& v1, const SpectralField& v2);

/// Largest |k . u_hat| over all modes for the Riesz velocity of theta.
double riesz_divergence_max(const SpectralField& theta);

/// Continuum-normalized L2 norms: sqrt(dx^2 sum |.|^2) in either space.
double l2_norm(const Field& f);
double l2_norm(const SpectralField& f);

struct SvResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance() const;
    bool holds() const { return lhs >= rhs - tolerance(); }
};

/// lhs = int |f|^{q-2} f (-Delta)^{alpha/2} f,
/// rhs = (2/q) int |(-Delta)^{alpha/4} |f|^{q/2}|^2, both by grid quadrature.
/// Throws DomainError for q < 2 or alpha outside (0, 2], NumericalError if
/// an intermediate is not finite.
SvResult sv_inequality_check(const Field& f, double q, double alpha);

/// Real field whose modes are confined to max(|m1|,|m2|) <= max_mode, with
/// coefficient amplitudes drawn from a seeded generator, scaled to unit sup
/// norm.
Field random_bandlimited_field(const Grid& g, int max_mode, std::uint64_t seed);

}  // namespace sqg
