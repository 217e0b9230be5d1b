#include "mplc/beam_array.hpp"

#include <cmath>
#include <numbers>

#include "mplc/errors.hpp"

namespace mplc {

BeamArraySpec BeamArraySpec::reference_input() {
    BeamArraySpec s;
    s.count = 2;
    s.waist = 161.5e-6;
    s.waist_offset = -2.08e-2;
    s.spacing = 704e-6;
    s.axis_origin = {0.0, -0.5 * s.spacing};
    // pi/18 rad per 20 um pixel
    s.tilt_gradient = std::numbers::pi / (18.0 * 20e-6);
    s.tilt_beam = 2;
    s.wavelength = 637e-9;
    return s;
}

BeamArraySpec BeamArraySpec::demagnified(double factor) const {
    if (!(factor > 0.0)) throw ParameterRange("demagnified: factor must be positive");
    const double mid = axis_origin.y + 0.5 * static_cast<double>(count - 1) * spacing;
    BeamArraySpec s = *this;
    s.waist = waist / factor;
    s.spacing = spacing / factor;
    s.axis_origin = {axis_origin.x, mid - 0.5 * static_cast<double>(count - 1) * s.spacing};
    s.waist_offset = 0.0;
    s.tilt_gradient = 0.0;
    s.tilt_beam = 0;
    return s;
}

Point2 BeamArraySpec::center(std::size_t m) const {
    return {axis_origin.x, axis_origin.y + static_cast<double>(m - 1) * spacing};
}

double BeamArraySpec::rayleigh_range() const { return mplc::rayleigh_range(waist, wavelength); }

double BeamArraySpec::size_at_plane() const { return gaussian_size(waist, wavelength, -waist_offset); }

void BeamArraySpec::validate() const {
    if (count < 1) throw ParameterRange("beam array: count must be >= 1");
    if (!(waist > 0.0)) throw ParameterRange("beam array: waist must be positive");
    if (!(spacing > 0.0)) throw ParameterRange("beam array: spacing must be positive");
    if (!(wavelength > 0.0)) throw ParameterRange("beam array: wavelength must be positive");
    if (tilt_beam > count) throw ParameterRange("beam array: tilt beam index out of range");
}

double rayleigh_range(double waist, double wavelength) { return std::numbers::pi * waist * waist / wavelength; }

double gaussian_size(double waist, double wavelength, double z) {
    const double zr = rayleigh_range(waist, wavelength);
    return waist * std::sqrt(1.0 + (z / zr) * (z / zr));
}

BeamField gaussian_beam(const SamplingGrid& grid, Point2 center, double waist, double waist_offset,
                        double tilt_gradient, double wavelength) {
    if (!(waist > 0.0)) throw ParameterRange("gaussian_beam: waist must be positive");
    if (!(wavelength > 0.0)) throw ParameterRange("gaussian_beam: wavelength must be positive");

    const double k = 2.0 * std::numbers::pi / wavelength;
    const double zr = rayleigh_range(waist, wavelength);
    const double z = -waist_offset;
    // q = z - i z_R;  psi ~ (1/q) exp(i k r^2 / (2 q)), which at z = 0 reduces
    // to exp(-r^2 / w0^2).
    const cplx q{z, -zr};
    const cplx coef = cplx{0.0, 0.5 * k} / q;

    ComplexField f(grid);
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
        const double dy = grid.y(iy) - center.y;
        const cplx tilt = std::polar(1.0, tilt_gradient * dy);
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
            const double dx = grid.x(ix) - center.x;
            f(ix, iy) = std::exp(coef * (dx * dx + dy * dy)) * tilt;
        }
    }

    BeamField out{normalize(f), false};
    const double r = 1.5 * gaussian_size(waist, wavelength, z);
    const double half = 0.5 * std::min(grid.extent_x(), grid.extent_y());
    const double x_lo = grid.x(0), x_hi = grid.x(grid.nx() - 1);
    const double y_lo = grid.y(0), y_hi = grid.y(grid.ny() - 1);
    out.window_clip = r > half || center.x - r < x_lo || center.x + r > x_hi || center.y - r < y_lo ||
                      center.y + r > y_hi;
    return out;
}

BeamArray make_beam_array(const BeamArraySpec& spec, const SamplingGrid& grid) {
    spec.validate();
    BeamArray out;
    out.beams.reserve(spec.count);
    for (std::size_t m = 1; m <= spec.count; ++m) {
        const double tilt = m == spec.tilt_beam ? spec.tilt_gradient : 0.0;
        auto b = gaussian_beam(grid, spec.center(m), spec.waist, spec.waist_offset, tilt, spec.wavelength);
        out.window_clip = out.window_clip || b.window_clip;
        out.beams.push_back(std::move(b.field));
    }
    return out;
}

std::vector<ComplexField> target_states(const std::vector<ComplexField>& output_basis, const TransferMatrix& u) {
    const auto m = static_cast<Eigen::Index>(output_basis.size());
    if (u.rows() != m || u.cols() != m) throw DimensionMismatch("target_states: matrix does not match basis size");
    std::vector<ComplexField> out;
    out.reserve(output_basis.size());
    for (Eigen::Index col = 0; col < m; ++col) {
        ComplexField s(output_basis.front().grid());
        for (Eigen::Index row = 0; row < m; ++row) {
            require_same_grid(s.grid(), output_basis[row].grid(), "target_states");
            const cplx c = u(row, col);
            const auto b = output_basis[row].values();
            auto v = s.values();
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * b[i];
        }
        out.push_back(normalize(s));
    }
    return out;
}

std::vector<ComplexField> target_states(const BeamArraySpec& output_spec, const SamplingGrid& grid,
                                        const TransferMatrix& u) {
    return target_states(make_beam_array(output_spec, grid).beams, u);
}

TransferMatrix overlap_matrix(const std::vector<ComplexField>& a, const std::vector<ComplexField>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("overlap_matrix: list lengths differ");
    const auto n = static_cast<Eigen::Index>(a.size());
    TransferMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = inner_product(a[i], b[j]);
    return out;
}

} // namespace mplc
