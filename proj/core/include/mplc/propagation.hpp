#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mplc/field.hpp"

namespace mplc {

/// Phase profile in radians, stored as supplied (not wrapped).
class PhaseMask {
public:
    explicit PhaseMask(const SamplingGrid& grid);
    PhaseMask(const SamplingGrid& grid, std::vector<double> phase);

    const SamplingGrid& grid() const noexcept { return grid_; }
    std::span<const double> phase() const noexcept { return phase_; }
    std::span<double> phase() noexcept { return phase_; }

    double& operator()(std::size_t ix, std::size_t iy) { return phase_[grid_.index(ix, iy)]; }
    double operator()(std::size_t ix, std::size_t iy) const { return phase_[grid_.index(ix, iy)]; }

private:
    SamplingGrid grid_;
    std::vector<double> phase_;
};

/// Per-sample phase wrapped into [0, 2pi).
PhaseMask wrapped(const PhaseMask& m);

/// Mask translated by (dx, dy) whole samples with periodic wrap-around:
/// out(ix, iy) = in(ix - dx, iy - dy).
PhaseMask shifted(const PhaseMask& m, long dx, long dy);

/// True when the two masks agree modulo 2pi everywhere, within tol radians.
bool equivalent_mod_2pi(const PhaseMask& a, const PhaseMask& b, double tol);

/// Ordered masks of one converter; plane p (1-based) is masks[p - 1].
struct PhaseMaskStack {
    std::vector<PhaseMask> masks;
    double plane_spacing = 0.0;

    std::size_t planes() const noexcept { return masks.size(); }
    const SamplingGrid& grid() const { return masks.front().grid(); }

    /// P zero masks.
    static PhaseMaskStack zeros(const SamplingGrid& grid, std::size_t planes, double plane_spacing);
    /// Throws when empty, spacing <= 0 or the masks' grids disagree.
    void validate() const;
};

enum class BandLimit {
    automatic, ///< clip only when |z| exceeds n * pitch^2 / lambda on that axis
    always,
    never,
};

/// Angular-spectrum propagator for one (grid, distance, wavelength). Owns a
/// spectral workspace, so an instance must not be used from two threads at
/// once; create one per worker.
class Propagator {
public:
    Propagator(const SamplingGrid& grid, double distance, double wavelength, BandLimit band = BandLimit::automatic);
    ~Propagator();
    Propagator(Propagator&&) noexcept;
    Propagator& operator=(Propagator&&) noexcept;

    const SamplingGrid& grid() const noexcept { return grid_; }
    double distance() const noexcept { return distance_; }
    double wavelength() const noexcept { return wavelength_; }
    bool band_limited() const noexcept { return band_limited_; }

    /// Propagates by +distance.
    ComplexField forward(const ComplexField& f) const;
    /// Propagates by -distance using the conjugate transfer function.
    ComplexField backward(const ComplexField& f) const;

    void forward_in_place(ComplexField& f) const;
    void backward_in_place(ComplexField& f) const;

private:
    void apply(ComplexField& f, bool conjugate) const;

    SamplingGrid grid_;
    double distance_;
    double wavelength_;
    bool band_limited_ = false;
    std::vector<cplx> transfer_;
    struct Workspace;
    std::unique_ptr<Workspace> ws_;
};

/// Free-space propagation by `distance` (negative = backwards).
ComplexField propagate(const ComplexField& f, double distance, double wavelength,
                       BandLimit band = BandLimit::automatic);

/// f * exp(i * phase), sample-wise.
ComplexField apply_mask(const ComplexField& f, const PhaseMask& m);
void apply_mask_in_place(ComplexField& f, const PhaseMask& m);
/// f * exp(-i * phase); the inverse of apply_mask.
void remove_mask_in_place(ComplexField& f, const PhaseMask& m);

/// Mask p then propagation by the plane spacing, for p = 1..P.
ComplexField mplc_forward(const ComplexField& f, const PhaseMaskStack& stack, double wavelength);

/// Field arriving at plane p (1-based), before mask p unless include_mask_p.
/// Throws PlaneIndexError when p is outside 1..P.
ComplexField mplc_forward_partial(const ComplexField& f, const PhaseMaskStack& stack, double wavelength,
                                  std::size_t upto_plane, bool include_mask_p);

/// Reusable cascade evaluator holding one propagator for the stack spacing.
class Cascade {
public:
    Cascade(const SamplingGrid& grid, double plane_spacing, double wavelength);

    const Propagator& hop() const noexcept { return hop_; }
    ComplexField forward(const ComplexField& f, const PhaseMaskStack& stack) const;
    std::vector<ComplexField> forward(const std::vector<ComplexField>& fs, const PhaseMaskStack& stack) const;

private:
    Propagator hop_;
};

} // namespace mplc
