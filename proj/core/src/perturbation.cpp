#include "mplc/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fft.hpp"
#include "mplc/errors.hpp"
#include "mplc/parallel.hpp"
#include "mplc/unitary.hpp"

namespace mplc {

std::vector<std::size_t> spread_offsets(std::size_t pattern_nx, std::size_t window_nx, std::size_t planes) {
    if (window_nx > pattern_nx) throw DimensionMismatch("spread_offsets: window wider than pattern");
    std::vector<std::size_t> out(planes, 0);
    if (planes < 2) return out;
    const double span = static_cast<double>(pattern_nx - window_nx);
    for (std::size_t p = 0; p < planes; ++p)
        out[p] = static_cast<std::size_t>(std::lround(span * static_cast<double>(p) / static_cast<double>(planes - 1)));
    return out;
}

PhaseMask pattern_window(const PhaseMask& pattern, const SamplingGrid& window, std::size_t x_offset) {
    const auto& pg = pattern.grid();
    if (pg.pitch() != window.pitch() || pg.ny() != window.ny() || x_offset + window.nx() > pg.nx())
        throw GridMismatch("pattern_window: pattern does not cover the plane window");
    PhaseMask out(window);
    for (std::size_t iy = 0; iy < window.ny(); ++iy)
        for (std::size_t ix = 0; ix < window.nx(); ++ix) out(ix, iy) = pattern(ix + x_offset, iy);
    return out;
}

PhaseMaskStack perturb_stack(const PhaseMaskStack& stack, const PerturbationSpec& spec) {
    stack.validate();
    std::vector<std::size_t> offsets = spec.region_offsets;
    if (offsets.empty()) offsets.assign(stack.planes(), 0);
    if (offsets.size() != stack.planes()) throw DimensionMismatch("perturb_stack: one region offset per plane");

    PhaseMaskStack out = stack;
    for (std::size_t p = 0; p < stack.planes(); ++p) {
        const PhaseMask win = pattern_window(spec.pattern, stack.grid(), offsets[p]);
        auto ph = out.masks[p].phase();
        for (std::size_t i = 0; i < ph.size(); ++i) {
            double v = std::fmod(ph[i] + spec.alpha * win.phase()[i], 2.0 * std::numbers::pi);
            if (v < 0.0) v += 2.0 * std::numbers::pi;
            ph[i] = v;
        }
    }
    return out;
}

double mean_phase_gradient(const PhaseMask& pattern, const std::vector<PixelRegion>& regions) {
    if (regions.empty()) throw ParameterRange("mean_phase_gradient: no regions");
    const auto& g = pattern.grid();
    double total = 0.0;
    for (const auto& r : regions) {
        if (r.nx < 2 || r.ny < 2 || r.x0 + r.nx > g.nx() || r.y0 + r.ny > g.ny())
            throw ParameterRange("mean_phase_gradient: region outside pattern or too small");
        double acc = 0.0;
        for (std::size_t iy = r.y0; iy + 1 < r.y0 + r.ny; ++iy)
            for (std::size_t ix = r.x0; ix + 1 < r.x0 + r.nx; ++ix) {
                const double gx = pattern(ix + 1, iy) - pattern(ix, iy);
                const double gy = pattern(ix, iy + 1) - pattern(ix, iy);
                acc += std::hypot(gx, gy);
            }
        total += acc / static_cast<double>((r.nx - 1) * (r.ny - 1));
    }
    return total / static_cast<double>(regions.size());
}

std::vector<PixelRegion> plane_regions(const SamplingGrid& window, const std::vector<std::size_t>& offsets) {
    std::vector<PixelRegion> out;
    for (auto x0 : offsets) out.push_back({x0, 0, window.nx(), window.ny()});
    return out;
}

PhaseMask synth_perturbation(const SamplingGrid& grid, double target_gradient, double correlation_length,
                             std::uint64_t seed, const std::vector<PixelRegion>& regions) {
    if (!(target_gradient > 0.0)) throw ParameterRange("synth_perturbation: target gradient must be positive");
    if (!(correlation_length > 0.0)) throw ParameterRange("synth_perturbation: correlation length must be positive");

    detail::Fft2d fft(grid.nx(), grid.ny());
    auto buf = fft.buffer();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : buf) v = {normal(rng), 0.0};
    fft.forward();

    // Gaussian kernel of std `correlation_length` samples, applied spectrally.
    const double c = 2.0 * std::numbers::pi * std::numbers::pi * correlation_length * correlation_length;
    auto freq = [](std::size_t k, std::size_t n) {
        const auto kk = static_cast<long>(k), nn = static_cast<long>(n);
        return static_cast<double>(kk < (nn + 1) / 2 ? kk : kk - nn) / static_cast<double>(n);
    };
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
        const double fy = freq(iy, grid.ny());
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
            const double fx = freq(ix, grid.nx());
            buf[grid.index(ix, iy)] *= std::exp(-c * (fx * fx + fy * fy));
        }
    }
    fft.backward();

    PhaseMask out(grid);
    double mean = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) mean += buf[i].real();
    mean /= static_cast<double>(buf.size());
    double rms = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out.phase()[i] = buf[i].real() - mean;
        rms += out.phase()[i] * out.phase()[i];
    }
    rms = std::sqrt(rms / static_cast<double>(buf.size()));

    const auto regs = regions.empty() ? std::vector<PixelRegion>{{0, 0, grid.nx(), grid.ny()}} : regions;
    const double g0 = mean_phase_gradient(out, regs);
    if (!(g0 > 1e-12 * std::max(1.0, rms)) || !(rms > 1e-12))
        throw ParameterRange("synth_perturbation: filtered noise is flat; correlation length too large for the grid");
    const double scale = target_gradient / g0;
    for (auto& v : out.phase()) v *= scale;
    return out;
}

std::vector<AlphaRow> fidelity_vs_alpha(const PhaseMaskStack& design, const std::vector<ComplexField>& inputs,
                                        const std::vector<ComplexField>& targets, double wavelength,
                                        const PerturbationSpec& spec, const std::vector<double>& alphas,
                                        std::size_t workers) {
    if (alphas.empty()) throw ParameterRange("fidelity_vs_alpha: empty alpha list");
    std::vector<AlphaRow> rows(alphas.size());
    parallel_for(alphas.size(), workers, [&](std::size_t i) {
        PerturbationSpec s = spec;
        s.alpha = alphas[i];
        const PhaseMaskStack perturbed = perturb_stack(design, s);
        const Cascade cascade(design.grid(), design.plane_spacing, wavelength);
        rows[i] = {alphas[i], gate_fidelity_fields(targets, cascade.forward(inputs, perturbed))};
    });
    return rows;
}

} // namespace mplc
