#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mplc/propagation.hpp"

namespace mplc {

/// Rectangle of samples [x0, x0 + nx) x [y0, y0 + ny).
struct PixelRegion {
    std::size_t x0 = 0;
    std::size_t y0 = 0;
    std::size_t nx = 0;
    std::size_t ny = 0;
};

/// Phase distortion alpha * pattern added to every plane. The pattern shares
/// pitch and row count with the stack and may be wider (an SLM-wide strip);
/// plane p reads the stack-sized window starting at column region_offsets[p].
struct PerturbationSpec {
    PhaseMask pattern;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> region_offsets;
};

/// Column offsets spreading `planes` windows of width `window_nx` evenly
/// across a pattern of width `pattern_nx`.
std::vector<std::size_t> spread_offsets(std::size_t pattern_nx, std::size_t window_nx, std::size_t planes);

/// The window of `pattern` seen by one plane.
PhaseMask pattern_window(const PhaseMask& pattern, const SamplingGrid& window, std::size_t x_offset);

/// (Phi_p + alpha * pattern window) wrapped into [0, 2pi) for every plane.
PhaseMaskStack perturb_stack(const PhaseMaskStack& stack, const PerturbationSpec& spec);

/// Mean over regions of the region-mean magnitude of the forward-difference
/// gradient sqrt(dx^2 + dy^2), in rad per sample.
double mean_phase_gradient(const PhaseMask& pattern, const std::vector<PixelRegion>& regions);

/// Regions covering each plane's window inside a pattern.
std::vector<PixelRegion> plane_regions(const SamplingGrid& window, const std::vector<std::size_t>& offsets);

/// Seeded Gaussian-filtered white noise (kernel standard deviation
/// `correlation_length` samples), rescaled so mean_phase_gradient over
/// `regions` (whole grid when empty) equals `target_gradient`. Throws
/// ParameterRange when the filtered noise is numerically flat.
PhaseMask synth_perturbation(const SamplingGrid& grid, double target_gradient, double correlation_length,
                             std::uint64_t seed, const std::vector<PixelRegion>& regions = {});

struct AlphaRow {
    double alpha;
    double fidelity;
};

/// Gate fidelity of the perturbed cascade for each alpha, keeping the spec's
/// pattern and offsets.
std::vector<AlphaRow> fidelity_vs_alpha(const PhaseMaskStack& design, const std::vector<ComplexField>& inputs,
                                        const std::vector<ComplexField>& targets, double wavelength,
                                        const PerturbationSpec& spec, const std::vector<double>& alphas,
                                        std::size_t workers = 1);

} // namespace mplc
