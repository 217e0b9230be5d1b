#include "mplc/field.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"
#include "mplc/errors.hpp"

namespace mplc {

SamplingGrid::SamplingGrid(std::size_t nx, std::size_t ny, double pitch, Point2 origin)
    : nx_(nx), ny_(ny), pitch_(pitch), origin_(origin) {
    if (nx < 2 || ny < 2) throw ParameterRange("SamplingGrid needs at least 2x2 samples");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ParameterRange("SamplingGrid pitch must be positive");
}

SamplingGrid SamplingGrid::centered(std::size_t nx, std::size_t ny, double pitch) {
    return SamplingGrid(nx, ny, pitch,
                        {-static_cast<double>(nx / 2) * pitch, -static_cast<double>(ny / 2) * pitch});
}

ComplexField::ComplexField(const SamplingGrid& grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(const SamplingGrid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw DimensionMismatch("ComplexField: value count does not match grid");
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ParameterRange("ComplexField: non-finite sample");
}

ComplexField& ComplexField::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
    require_same_grid(grid_, other.grid_, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
    require_same_grid(grid_, other.grid_, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

std::vector<double> ComplexField::intensity() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::norm(values_[i]);
    return out;
}

ComplexField operator*(cplx s, ComplexField f) { return f *= s; }
ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }

void require_same_grid(const SamplingGrid& a, const SamplingGrid& b, const char* where) {
    if (!(a == b)) throw GridMismatch(std::string(where) + ": sampling grids differ");
}

cplx inner_product(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    const auto va = a.values();
    const auto vb = b.values();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < va.size(); ++i) acc += std::conj(va[i]) * vb[i];
    return acc * a.grid().cell_area();
}

double total_power(const ComplexField& f) {
    double acc = 0.0;
    for (const auto& v : f.values()) acc += std::norm(v);
    return acc * f.grid().cell_area();
}

double norm(const ComplexField& f) { return std::sqrt(total_power(f)); }

ComplexField normalize(const ComplexField& f) {
    const double n = norm(f);
    if (!(n > 0.0)) throw DegenerateField("normalize: zero field");
    ComplexField out = f;
    out *= 1.0 / n;
    return out;
}

double rms_difference(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid(), b.grid(), "rms_difference");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.grid().size(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc / static_cast<double>(a.grid().size()));
}

std::vector<cplx> unitary_spectrum(const ComplexField& f) {
    detail::Fft2d fft(f.grid().nx(), f.grid().ny());
    auto buf = fft.buffer();
    std::copy(f.values().begin(), f.values().end(), buf.begin());
    fft.forward();
    const double scale = 1.0 / std::sqrt(static_cast<double>(buf.size()));
    std::vector<cplx> out(buf.begin(), buf.end());
    for (auto& v : out) v *= scale;
    return out;
}

std::vector<double> marginal_intensity_y(const ComplexField& f) {
    const auto& g = f.grid();
    std::vector<double> out(g.ny(), 0.0);
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
        double acc = 0.0;
        for (std::size_t ix = 0; ix < g.nx(); ++ix) acc += std::norm(f(ix, iy));
        out[iy] = acc * g.pitch();
    }
    return out;
}

std::vector<double> marginal_intensity_x(const ComplexField& f) {
    const auto& g = f.grid();
    std::vector<double> out(g.nx(), 0.0);
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
        for (std::size_t ix = 0; ix < g.nx(); ++ix) out[ix] += std::norm(f(ix, iy));
    for (auto& v : out) v *= g.pitch();
    return out;
}

} // namespace mplc
