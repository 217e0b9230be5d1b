#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mplc {

using cplx = std::complex<double>;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Uniform Cartesian sampling. Sample (ix, iy) sits at
/// (origin.x + ix * pitch, origin.y + iy * pitch); storage is row-major
/// with x varying fastest.
class SamplingGrid {
public:
    SamplingGrid(std::size_t nx, std::size_t ny, double pitch, Point2 origin);

    /// Grid of nx * ny samples whose centre sample (nx/2, ny/2) lies at (0, 0).
    static SamplingGrid centered(std::size_t nx, std::size_t ny, double pitch);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return nx_ * ny_; }
    double pitch() const noexcept { return pitch_; }
    Point2 origin() const noexcept { return origin_; }

    double x(std::size_t ix) const noexcept { return origin_.x + static_cast<double>(ix) * pitch_; }
    double y(std::size_t iy) const noexcept { return origin_.y + static_cast<double>(iy) * pitch_; }
    double extent_x() const noexcept { return static_cast<double>(nx_) * pitch_; }
    double extent_y() const noexcept { return static_cast<double>(ny_) * pitch_; }
    double cell_area() const noexcept { return pitch_ * pitch_; }

    std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * nx_ + ix; }

    bool operator==(const SamplingGrid&) const = default;

private:
    std::size_t nx_;
    std::size_t ny_;
    double pitch_;
    Point2 origin_;
};

inline bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }

/// Sampled complex scalar field.
class ComplexField {
public:
    explicit ComplexField(const SamplingGrid& grid);
    ComplexField(const SamplingGrid& grid, std::vector<cplx> values);

    const SamplingGrid& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> values() noexcept { return values_; }

    cplx& operator()(std::size_t ix, std::size_t iy) { return values_[grid_.index(ix, iy)]; }
    const cplx& operator()(std::size_t ix, std::size_t iy) const { return values_[grid_.index(ix, iy)]; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }

    ComplexField& operator*=(cplx s);
    ComplexField& operator+=(const ComplexField& other);
    ComplexField& operator-=(const ComplexField& other);

    std::vector<double> intensity() const;

private:
    SamplingGrid grid_;
    std::vector<cplx> values_;
};

ComplexField operator*(cplx s, ComplexField f);
ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);

/// Throws GridMismatch unless both grids are identical.
void require_same_grid(const SamplingGrid& a, const SamplingGrid& b, const char* where);

/// Midpoint-rule discretisation of the overlap integral  sum conj(a) * b * pitch^2.
cplx inner_product(const ComplexField& a, const ComplexField& b);

double total_power(const ComplexField& f);
double norm(const ComplexField& f);

/// f / norm(f); throws DegenerateField for a zero field.
ComplexField normalize(const ComplexField& f);

/// Root-mean-square of the sample-wise difference.
double rms_difference(const ComplexField& a, const ComplexField& b);

/// Unitary (1/sqrt(N) scaled) 2D DFT of the samples. Used to check Parseval
/// against the transform the propagator uses.
std::vector<cplx> unitary_spectrum(const ComplexField& f);

/// Sum over x of |f|^2 * pitch, one entry per y row.
std::vector<double> marginal_intensity_y(const ComplexField& f);
/// Sum over y of |f|^2 * pitch, one entry per x column.
std::vector<double> marginal_intensity_x(const ComplexField& f);

} // namespace mplc
