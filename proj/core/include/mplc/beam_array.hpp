#pragma once

#include <cstddef>
#include <vector>

#include "mplc/field.hpp"
#include "mplc/transfer_matrix.hpp"

namespace mplc {

/// A line of M parallel Gaussian beams along y.
struct BeamArraySpec {
    std::size_t count = 2;
    double waist = 161.5e-6;          ///< 1/e^2 intensity half-width at the waist [m]
    double waist_offset = -2.08e-2;   ///< waist position relative to the plane [m]; negative = before it
    double spacing = 704e-6;          ///< centre-to-centre distance [m]
    Point2 axis_origin{0.0, -352e-6}; ///< centre of beam 1 [m]
    double tilt_gradient = 0.0;       ///< linear phase slope along y [rad/m]
    std::size_t tilt_beam = 0;        ///< 1-based beam carrying the tilt; 0 = none
    double wavelength = 637e-9;

    /// Two-beam input array of the reference converter, tilt on beam 2.
    static BeamArraySpec reference_input();
    /// The same array with waist and spacing divided by `factor`, waist at
    /// the plane, no tilt, and the same array centre.
    BeamArraySpec demagnified(double factor) const;

    Point2 center(std::size_t m) const; ///< 1-based
    double rayleigh_range() const;
    /// Size at the plane this spec describes.
    double size_at_plane() const;
    void validate() const;
};

/// 1/e^2 half-width after propagating `z` from the waist.
double gaussian_size(double waist, double wavelength, double z);
double rayleigh_range(double waist, double wavelength);

struct BeamField {
    ComplexField field;
    bool window_clip = false; ///< 1.5 * w(z) circle reaches past the window
};

/// Unit-norm Gaussian evaluated analytically (complex beam parameter) at a
/// plane located `-waist_offset` downstream of its waist, times
/// exp(i * tilt_gradient * (y - center.y)).
BeamField gaussian_beam(const SamplingGrid& grid, Point2 center, double waist, double waist_offset,
                        double tilt_gradient, double wavelength);

struct BeamArray {
    std::vector<ComplexField> beams;
    bool window_clip = false;
};

BeamArray make_beam_array(const BeamArraySpec& spec, const SamplingGrid& grid);

/// State m = normalize(sum_k U(k, m) * basis_k).
std::vector<ComplexField> target_states(const std::vector<ComplexField>& output_basis, const TransferMatrix& u);
std::vector<ComplexField> target_states(const BeamArraySpec& output_spec, const SamplingGrid& grid,
                                        const TransferMatrix& u);

/// Entry (i, j) = <a_i | b_j>.
TransferMatrix overlap_matrix(const std::vector<ComplexField>& a, const std::vector<ComplexField>& b);

} // namespace mplc
