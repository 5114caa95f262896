#include "sqg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace sqg {

namespace {

struct PlanPair {
    fftw_plan forward;
    fftw_plan backward;
};

const PlanPair& plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // FFTW_ESTIMATE keeps plans (and results) independent of timing noise.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto* in = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    PlanPair p{fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags),
               fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags)};
    fftw_free(in);
    fftw_free(out);
    return cache.emplace(n, p).first->second;
}

}  // namespace

SpectralField forward(const Field& f) {
    const Grid& g = f.grid;
    std::vector<std::complex<double>> in(f.data.begin(), f.data.end());
    SpectralField out(g);
    fftw_execute_dft(plans_for(g.N).forward, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.coeffs.data()));
    const double scale = 1.0 / g.N;
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

Field inverse(const SpectralField& f) {
    const Grid& g = f.grid;
    std::vector<std::complex<double>> in = f.coeffs;
    std::vector<std::complex<double>> out(g.size());
    fftw_execute_dft(plans_for(g.N).backward, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    Field result(g);
    const double scale = 1.0 / g.N;
    for (std::size_t i = 0; i < out.size(); ++i) result.data[i] = out[i].real() * scale;
    return result;
}

}  // namespace sqg
