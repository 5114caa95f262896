#include "sqg/grid.hpp"

#include <numbers>
#include <string>

#include "sqg/error.hpp"

namespace sqg {

double Grid::k(int j) const { return std::numbers::pi / L * mode(j); }

Grid make_grid(int N, double L) {
    if (N < 16 || N % 2 != 0) throw DomainError("grid size N must be even and >= 16");
    if (!(L > 0.0)) throw DomainError("box half-width L must be positive");
    return Grid{N, L};
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) {
        throw DomainError(std::string(where) + ": fields live on different grids");
    }
}

}  // namespace sqg
