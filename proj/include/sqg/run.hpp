#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqg/checks.hpp"
#include "sqg/config.hpp"

namespace sqg {

struct RunOptions {
    bool resume = true;
    int stop_after = -1;          // stop after this many new checkpoints (simulates a killed run)
    std::ostream* log = nullptr;
};

/// Energy bookkeeping between consecutive snapshots.
struct IntervalEnergy {
    double t0 = 0.0;
    double t1 = 0.0;
    double energy0 = 0.0;      // ||theta(t0)||_2^2
    double energy1 = 0.0;
    double dissipation = 0.0;  // int 2 ||(-Delta)^{alpha/4} theta||^2 dt
    double relative_error = 0.0;
};

struct InvariantSummary {
    double mass_drift = 0.0;         // max relative |m(t) - m(0)|
    bool mass_ok = true;
    double l2_growth = 0.0;          // max l2(t2)/l2(t1) - 1
    bool l2_ok = true;
    double linf_growth = 0.0;
    bool linf_ok = true;
    double energy_error = 0.0;       // max relative energy-balance error
    bool energy_ok = true;
    ImageBudget image;
};

struct RunResult {
    std::filesystem::path out_dir;
    std::filesystem::path manifest;
    std::string hash;
    bool complete = false;
    double mass0 = 0.0;
    long steps = 0;
    double wall_seconds = 0.0;
    std::vector<DiagnosticsRecord> records;
    std::vector<IntervalEnergy> energy;
    InvariantSummary invariants;
};

/// Integrates the configured problem, writing into out_dir:
///   snapshots/snap_NNNN.bin, kernel_profile.csv, diagnostics.csv,
///   energy.csv and manifest.json.
/// The manifest is rewritten after every checkpoint with status
/// "incomplete"; a later call with the same config resumes from the last
/// intact snapshot. Throws NumericalError if mass drifts beyond 1e-10.
RunResult run(const RunConfig& config, const std::filesystem::path& out_dir,
              const RunOptions& options = {});

/// Diagnostics for every snapshot in a directory. The t = 0 snapshot supplies
/// theta0 and M.
std::vector<DiagnosticsRecord> diagnose(const std::filesystem::path& snapshot_dir,
                                        const KernelProfile& profile, const AnnulusSpec& annulus);

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);

/// Builds the kernel profile for a run configuration (r_max and tolerance from
/// the config).
KernelProfile profile_for(const RunConfig& config);

}  // namespace sqg
