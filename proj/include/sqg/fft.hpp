#pragma once

#include "sqg/grid.hpp"

namespace sqg {

/// Unitary 2D DFT (both directions scaled by 1/N). Plans are created once per
/// grid size and reused; execution is thread-safe.
SpectralField forward(const Field& f);

/// Inverse transform; the imaginary part is discarded.
Field inverse(const SpectralField& f);

}  // namespace sqg
