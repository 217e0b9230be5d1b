#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace mplc::detail {

/// In-place 2D complex DFT over an owned, fftw-aligned buffer.
/// Plans use FFTW_ESTIMATE so results do not depend on timing measurements.
class Fft2d {
public:
    Fft2d(std::size_t nx, std::size_t ny);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::span<std::complex<double>> buffer() noexcept { return {data_, n_}; }
    std::size_t size() const noexcept { return n_; }

    void forward();
    /// Unnormalised inverse; callers scale by 1/size().
    void backward();

private:
    std::size_t n_;
    std::complex<double>* data_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

} // namespace mplc::detail
