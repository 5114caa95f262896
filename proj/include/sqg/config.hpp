#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sqg/norms.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// Everything a `solve` run needs: solver parameters plus diagnostics options.
struct RunConfig {
    SolverConfig solver;
    AnnulusSpec annulus;
    double kernel_r_max = 5000.0;
    double kernel_tol = 1e-10;
    bool theorem_diagnostics = true;
    double decay_window_start = 5.0;
    double growth_window_start = 1.0;

    std::map<std::string, std::string> entries;  // keys as written, values trimmed
    std::vector<std::string> warnings;
};

/// Strict key=value parser; '#' starts a comment. Unknown or duplicate keys,
/// missing required keys (alpha, N, L, t_end) and malformed values throw
/// ConfigError naming the line.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");

/// Rebuilds a RunConfig from explicit entries (used by sweep to override alpha).
RunConfig config_from_entries(const std::map<std::string, std::string>& entries,
                              const std::string& source = "<config>");

/// 16 hex digits of FNV-1a over the sorted key=value entries; independent of
/// the order of lines in the file.
std::string config_hash(const RunConfig& config);

/// Keys accepted by the parser, with their defaults as text.
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace sqg
