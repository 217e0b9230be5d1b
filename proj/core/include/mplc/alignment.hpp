#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mplc/propagation.hpp"

namespace mplc {

enum class ScanAxis { x, y };

/// Random-phase window displayed on the SLM: Gaussian pixel values,
/// integer-quantised, converted at counts_per_2pi counts per 2pi.
struct RandomWindowSpec {
    double mean_counts = 60.0;
    double sd_counts = 10.0;
    double counts_per_2pi = 118.0;
    std::uint64_t seed = 1;
    std::size_t realizations = 4; ///< independent windows (seeds seed, seed + 1, ...) averaged per position
};

/// Per-sample phase of the random window over the whole grid (one
/// realization, from `seed`).
PhaseMask random_window_phase(const SamplingGrid& grid, const RandomWindowSpec& spec);

struct KnifeScan {
    std::vector<double> positions; ///< window edge coordinate [m], strictly increasing
    std::vector<double> powers;       ///< window over coordinates < edge
    std::vector<double> powers_upper; ///< window over coordinates >= edge; may be empty
    std::size_t plane_index = 1;   ///< 1-based plane carrying the window
    ScanAxis axis = ScanAxis::y;
};

/// Far-field aperture used as the detector: a disk in spatial frequency.
struct FarFieldAperture {
    double fx = 0.0;
    double fy = 0.0;
    double radius = 0.0; ///< cycles per metre
};

/// Disk centred on the spectral centroid of `f` with radius `widths` times
/// its 1/e^2 spectral half-width (twice the rms spread).
FarFieldAperture nominal_aperture(const ComplexField& f, double widths = 3.0);

/// Power of `f` whose spatial frequency falls inside the aperture.
double far_field_power(const ComplexField& f, const FarFieldAperture& aperture);

/// Diffractive knife edge: the mask at plane p is replaced by the random
/// window over all samples with coordinate < edge along `axis` (zero phase
/// elsewhere); the light then runs through the remaining planes and the
/// far-field power inside the unobstructed beam's nominal aperture is
/// recorded for each edge position. The same scan with the window on the
/// other side of the edge fills powers_upper.
KnifeScan knife_edge_scan(const ComplexField& input, const PhaseMaskStack& stack, double wavelength,
                          std::size_t plane, const std::vector<double>& positions, const RandomWindowSpec& window,
                          ScanAxis axis = ScanAxis::y);

/// Edge positions halfway between samples, covering [lo, hi].
std::vector<double> edge_positions(const SamplingGrid& grid, ScanAxis axis, double lo, double hi);

struct BeamEstimate {
    double center = 0.0;
    double waist = 0.0; ///< 1/e^2 intensity half-width
};

/// Knife-edge analysis on powers (minus powers_upper when present):
/// 5-point Savitzky-Golay derivative, Gaussian fit to the derivative, then an
/// erf fit of the raw curve started from that Gaussian. Throws FitFailure on
/// flat or non-sigmoid data.
BeamEstimate estimate_beam_params(const KnifeScan& scan);

/// Marginal intensity along y (integral over x), unnormalised.
std::vector<double> y_profile(const ComplexField& f);

/// integral I_d I_e dy after scaling each profile to unit L2 norm.
double intensity_fidelity(const std::vector<double>& designed, const std::vector<double>& measured, double dy = 1.0);

struct PlaneOffset {
    long dx = 0;
    long dy = 0;
    double fidelity_before = 0.0;
    double fidelity_after = 0.0;
};

/// Reference output profiles for cumulative stage k (masks 1..k enabled,
/// others zero): result[k - 1][m] for input m.
std::vector<std::vector<std::vector<double>>> stage_reference_profiles(const PhaseMaskStack& design,
                                                                       const std::vector<ComplexField>& inputs,
                                                                       double wavelength);

/// Mask-centre refinement: for plane k = 1..P, with planes 1..k enabled and
/// earlier planes already corrected, scan plane k's shift in whole samples
/// within +-search_range along y, then x (repeated until the pair stops
/// changing), maximising the mean intensity fidelity against the stage
/// reference. Ties go to the smallest shift.
std::vector<PlaneOffset> refine_mask_centers(const PhaseMaskStack& displayed, const std::vector<ComplexField>& inputs,
                                             const std::vector<std::vector<std::vector<double>>>& reference,
                                             double wavelength, long search_range);

} // namespace mplc
