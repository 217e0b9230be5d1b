#pragma once

#include <cstddef>
#include <vector>

namespace mplc {

/// Single-SLM converter: SLM and flat mirror a distance L apart, beam inserted
/// at angle tau to the SLM normal, so reflections step 2 L tan(tau) along x.
struct MPLCGeometry {
    double mirror_distance = 0.05; ///< L [m]
    double insertion_angle = 0.01; ///< tau [rad]
    double slm_width = 15.8e-3;
    double slm_height = 12e-3;
    double pixel_pitch = 20e-6;
    double wavelength = 637e-9;
    std::size_t planes = 5;
    std::size_t guard_pixels = 3;

    double plane_spacing() const noexcept { return 2.0 * mirror_distance; }
    double lateral_step() const;
    void validate() const;
};

/// w0 * sqrt(1 + (2 L p sec(tau) / z0)^2); p = 0 is the first reflection,
/// where the waist sits.
double beam_size_at_plane(double waist, double mirror_distance, double insertion_angle, double wavelength,
                          std::size_t p);

/// Positive: number of reflections that fit. Negative -k: reflection k
/// (1-based) overlaps reflection k - 1 while still on the SLM. Zero: not even
/// the first spot fits.
///
/// A spot fits when its 1.5 w circle lies inside the active area (first spot
/// touching the x = 0 edge, centred in y). Consecutive spots are separated when
/// the step is at least 1.5 w_k + 1.5 w_{k+1} + guard_pixels * pitch.
int count_reflections(const MPLCGeometry& geometry, double waist);

/// Smallest insertion angle giving at least two reflections (bisection to
/// 1e-9 rad), or a negative value if none up to 45 degrees.
double min_insertion_angle(const MPLCGeometry& geometry, double waist);

struct ReflectionCell {
    double mirror_distance;
    double insertion_angle;
    double waist;
    int reflections;
};

struct MaxPlanesRow {
    double mirror_distance;
    int max_reflections; ///< best positive count over the scanned (tau, w0); 0 if none
    double best_angle;
    double best_waist;
};

/// Dense scan of count_reflections over every (L, tau, w0) combination;
/// L-major, then tau, then w0.
std::vector<ReflectionCell> reflection_table(const MPLCGeometry& base, const std::vector<double>& mirror_distances,
                                             const std::vector<double>& angles, const std::vector<double>& waists);

/// Per-L maximum of count_reflections over (tau, w0). Ties keep the first
/// maximiser in scan order.
std::vector<MaxPlanesRow> max_planes_vs_L(const MPLCGeometry& base, const std::vector<double>& mirror_distances,
                                          const std::vector<double>& angles, const std::vector<double>& waists);

/// n evenly spaced values from lo to hi inclusive (n >= 2), or {lo} for n == 1.
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace mplc
