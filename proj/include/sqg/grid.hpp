#pragma once

#include <complex>
#include <vector>

namespace sqg {

/// Periodic box [-L, L)^2 sampled on N x N points.
struct Grid {
    int N = 0;
    double L = 0.0;

    double dx() const { return 2.0 * L / N; }
    double x(int i) const { return -L + i * dx(); }
    /// Signed mode index of FFT slot j: 0..N/2-1, then -N/2..-1.
    int mode(int j) const { return j < N / 2 ? j : j - N; }
    double k(int j) const;
    std::size_t size() const { return static_cast<std::size_t>(N) * static_cast<std::size_t>(N); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws DomainError unless N is even, N >= 16 and L > 0.
Grid make_grid(int N, double L);

/// Real samples, row-major: data[i*N + j] sits at (x(i), x(j)).
struct Field {
    Grid grid;
    std::vector<double> data;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), data(g.size(), 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * grid.N + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * grid.N + j]; }
};

/// Unitary discrete Fourier coefficients, same layout as Field.
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeffs;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size()) {}

    std::complex<double>& operator()(int i, int j) {
        return coeffs[static_cast<std::size_t>(i) * grid.N + j];
    }
    std::complex<double> operator()(int i, int j) const {
        return coeffs[static_cast<std::size_t>(i) * grid.N + j];
    }
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace sqg
