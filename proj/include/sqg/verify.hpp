#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sqg {

/// A named check with its measured value and the limit it was held to.
struct Contract {
    std::string name;       // e.g. kernel.poisson_oracle
    std::string criterion;  // acceptance criterion the check belongs to
    bool passed = false;
    double measured = 0.0;
    double limit = 0.0;
    std::string detail;
};

enum class VerifyLevel { quick, full };

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::quick;
    std::filesystem::path work_dir = "verify_work";  // run outputs for the full level
    bool inject_fault = false;  // perturbs the alpha=1 profile by 1e-4 relative
    std::ostream* log = nullptr;
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::quick;
    std::vector<Contract> contracts;
    double wall_seconds = 0.0;

    bool passed() const;
    /// Criteria in first-seen order, each passing only if all its contracts do.
    std::vector<std::pair<std::string, bool>> criteria() const;
};

/// quick: kernel oracles, spectral identities, SV and commutator checks.
/// full: quick plus tail constants, the linear oracle, the acceptance runs
/// for alpha in {1, 0.5} and every fit and far-field check built on them.
VerifyReport verify(const VerifyOptions& options);

void write_report_json(const VerifyReport& report, const std::filesystem::path& path);
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace sqg
