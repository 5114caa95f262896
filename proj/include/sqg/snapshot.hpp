#pragma once

#include <filesystem>

#include "sqg/grid.hpp"

namespace sqg {

/// On disk: "SQGF", u32 version = 1, f64 alpha, f64 L, f64 t, u32 N, then
/// N*N f64 samples in row-major order; all little-endian.
struct Snapshot {
    double alpha = 0.0;
    double t = 0.0;
    Field theta;
};

/// Writes through a temporary file and renames, so a crash never leaves a
/// truncated snapshot under the final name.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);

/// Throws IoError on a bad magic, version, size or truncated payload.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace sqg
