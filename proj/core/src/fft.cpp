#include "fft.hpp"

#include <mutex>
#include <new>

namespace mplc::detail {

namespace {
// fftw's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft2d::Fft2d(std::size_t nx, std::size_t ny) : n_(nx * ny) {
    data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n_));
    if (!data_) throw std::bad_alloc();
    auto* raw = reinterpret_cast<fftw_complex*>(data_);
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    fftw_free(data_);
}

void Fft2d::forward() { fftw_execute(fwd_); }
void Fft2d::backward() { fftw_execute(bwd_); }

} // namespace mplc::detail
