#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sqg/config.hpp"
#include "sqg/run.hpp"

namespace sqg {

/// One row of data/targets.csv: target(alpha) = coef_inv_alpha / alpha + constant.
struct ExponentTarget {
    std::string quantity;
    std::string column;  // diagnostics column the exponent is fitted to
    double coef_inv_alpha = 0.0;
    double constant = 0.0;
    bool upper_only = false;  // relation "upper": fit <= target + tolerance
    double tolerance = 0.0;
    double window_start = 0.0;

    double target(double alpha) const { return coef_inv_alpha / alpha + constant; }
    bool accepts(double alpha, double fitted) const;
};

std::filesystem::path default_targets_path();
std::vector<ExponentTarget> load_targets(const std::filesystem::path& path = default_targets_path());

struct FittedExponent {
    ExponentTarget target;
    double alpha = 0.0;
    double exponent = 0.0;
    double expected = 0.0;
    bool ok = false;
};

/// Fits every target against a run's records over [window_start, t_end]. A
/// window the fit rejects yields a NaN exponent that is not ok.
std::vector<FittedExponent> fit_exponents(std::span<const DiagnosticsRecord> records, double alpha,
                                          double t_end, std::span<const ExponentTarget> targets);

struct SweepMember {
    double alpha = 0.0;
    std::filesystem::path dir;
    bool ok = false;
    std::string error;
    RunResult result;
    std::vector<FittedExponent> exponents;
};

struct SweepResult {
    std::vector<SweepMember> members;
    std::filesystem::path exponents_csv;
    std::vector<std::string> notices;
    bool all_ok() const;
};

/// SQG_THREADS caps the worker count (default: hardware concurrency).
int sweep_workers(std::size_t runs);

/// Runs base with each alpha into out_root/alpha_<alpha>/ and writes
/// out_root/exponents.csv. Duplicate alphas are run once (with a notice); an
/// empty list or an alpha outside (0, 1] throws DomainError. A failing run is
/// recorded in its member and does not stop the others.
SweepResult sweep(std::span<const double> alphas, const RunConfig& base,
                  const std::filesystem::path& out_root, std::ostream* log = nullptr);

}  // namespace sqg
