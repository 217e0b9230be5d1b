#include "mplc/propagation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "mplc/errors.hpp"

namespace mplc {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// Signed DFT frequency of bin k on an n-point axis with sample spacing d.
double frequency(std::size_t k, std::size_t n, double d) {
    const auto kk = static_cast<long>(k);
    const auto nn = static_cast<long>(n);
    const long s = kk < (nn + 1) / 2 ? kk : kk - nn;
    return static_cast<double>(s) / (static_cast<double>(n) * d);
}
} // namespace

PhaseMask::PhaseMask(const SamplingGrid& grid) : grid_(grid), phase_(grid.size(), 0.0) {}

PhaseMask::PhaseMask(const SamplingGrid& grid, std::vector<double> phase) : grid_(grid), phase_(std::move(phase)) {
    if (phase_.size() != grid_.size()) throw DimensionMismatch("PhaseMask: value count does not match grid");
    for (double v : phase_)
        if (!std::isfinite(v)) throw ParameterRange("PhaseMask: non-finite phase");
}

PhaseMask wrapped(const PhaseMask& m) {
    PhaseMask out = m;
    for (auto& v : out.phase()) {
        v = std::fmod(v, two_pi);
        if (v < 0.0) v += two_pi;
        if (v >= two_pi) v = 0.0;
    }
    return out;
}

PhaseMask shifted(const PhaseMask& m, long dx, long dy) {
    const auto& g = m.grid();
    const auto nx = static_cast<long>(g.nx());
    const auto ny = static_cast<long>(g.ny());
    PhaseMask out(g);
    for (long iy = 0; iy < ny; ++iy) {
        const long sy = ((iy - dy) % ny + ny) % ny;
        for (long ix = 0; ix < nx; ++ix) {
            const long sx = ((ix - dx) % nx + nx) % nx;
            out(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy)) =
                m(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
        }
    }
    return out;
}

bool equivalent_mod_2pi(const PhaseMask& a, const PhaseMask& b, double tol) {
    if (!(a.grid() == b.grid())) return false;
    for (std::size_t i = 0; i < a.phase().size(); ++i) {
        const double d = std::remainder(a.phase()[i] - b.phase()[i], two_pi);
        if (std::abs(d) > tol) return false;
    }
    return true;
}

PhaseMaskStack PhaseMaskStack::zeros(const SamplingGrid& grid, std::size_t planes, double plane_spacing) {
    PhaseMaskStack s;
    s.masks.assign(planes, PhaseMask(grid));
    s.plane_spacing = plane_spacing;
    s.validate();
    return s;
}

void PhaseMaskStack::validate() const {
    if (masks.empty()) throw ParameterRange("PhaseMaskStack: needs at least one plane");
    if (!(plane_spacing > 0.0)) throw ParameterRange("PhaseMaskStack: plane spacing must be positive");
    for (const auto& m : masks) require_same_grid(masks.front().grid(), m.grid(), "PhaseMaskStack");
}

struct Propagator::Workspace {
    detail::Fft2d fft;
    Workspace(std::size_t nx, std::size_t ny) : fft(nx, ny) {}
};

Propagator::Propagator(const SamplingGrid& grid, double distance, double wavelength, BandLimit band)
    : grid_(grid), distance_(distance), wavelength_(wavelength), transfer_(grid.size()),
      ws_(std::make_unique<Workspace>(grid.nx(), grid.ny())) {
    if (!(wavelength > 0.0)) throw ParameterRange("Propagator: wavelength must be positive");

    const double inv_l2 = 1.0 / (wavelength * wavelength);
    const double p = grid.pitch();
    const double sx = grid.extent_x();
    const double sy = grid.extent_y();
    const double az = std::abs(distance);

    // Band limit: |f| < 1 / (lambda * sqrt((2 z / S)^2 + 1)) per axis, engaged
    // beyond the distance at which it drops under the Nyquist frequency.
    const bool clip_x = band == BandLimit::always ||
                        (band == BandLimit::automatic && az > static_cast<double>(grid.nx()) * p * p / wavelength);
    const bool clip_y = band == BandLimit::always ||
                        (band == BandLimit::automatic && az > static_cast<double>(grid.ny()) * p * p / wavelength);
    band_limited_ = clip_x || clip_y;
    const double fx_lim = 1.0 / (wavelength * std::sqrt(std::pow(2.0 * az / sx, 2) + 1.0));
    const double fy_lim = 1.0 / (wavelength * std::sqrt(std::pow(2.0 * az / sy, 2) + 1.0));

    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
        const double fy = frequency(iy, grid.ny(), p);
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
            const double fx = frequency(ix, grid.nx(), p);
            const double arg = inv_l2 - fx * fx - fy * fy;
            cplx h{0.0, 0.0};
            const bool passed = (!clip_x || std::abs(fx) < fx_lim) && (!clip_y || std::abs(fy) < fy_lim);
            if (arg > 0.0 && passed) h = std::polar(1.0, two_pi * distance * std::sqrt(arg));
            transfer_[grid.index(ix, iy)] = h;
        }
    }
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

void Propagator::apply(ComplexField& f, bool conjugate) const {
    require_same_grid(grid_, f.grid(), "Propagator");
    auto buf = ws_->fft.buffer();
    auto vals = f.values();
    std::copy(vals.begin(), vals.end(), buf.begin());
    ws_->fft.forward();
    const double scale = 1.0 / static_cast<double>(buf.size());
    if (conjugate) {
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= std::conj(transfer_[i]) * scale;
    } else {
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= transfer_[i] * scale;
    }
    ws_->fft.backward();
    std::copy(buf.begin(), buf.end(), vals.begin());
}

ComplexField Propagator::forward(const ComplexField& f) const {
    ComplexField out = f;
    apply(out, false);
    return out;
}

ComplexField Propagator::backward(const ComplexField& f) const {
    ComplexField out = f;
    apply(out, true);
    return out;
}

void Propagator::forward_in_place(ComplexField& f) const { apply(f, false); }
void Propagator::backward_in_place(ComplexField& f) const { apply(f, true); }

ComplexField propagate(const ComplexField& f, double distance, double wavelength, BandLimit band) {
    if (distance == 0.0) return f;
    return Propagator(f.grid(), distance, wavelength, band).forward(f);
}

void apply_mask_in_place(ComplexField& f, const PhaseMask& m) {
    require_same_grid(f.grid(), m.grid(), "apply_mask");
    auto vals = f.values();
    const auto ph = m.phase();
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= std::polar(1.0, ph[i]);
}

void remove_mask_in_place(ComplexField& f, const PhaseMask& m) {
    require_same_grid(f.grid(), m.grid(), "remove_mask");
    auto vals = f.values();
    const auto ph = m.phase();
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= std::polar(1.0, -ph[i]);
}

ComplexField apply_mask(const ComplexField& f, const PhaseMask& m) {
    ComplexField out = f;
    apply_mask_in_place(out, m);
    return out;
}

ComplexField mplc_forward(const ComplexField& f, const PhaseMaskStack& stack, double wavelength) {
    stack.validate();
    return Cascade(stack.grid(), stack.plane_spacing, wavelength).forward(f, stack);
}

ComplexField mplc_forward_partial(const ComplexField& f, const PhaseMaskStack& stack, double wavelength,
                                  std::size_t upto_plane, bool include_mask_p) {
    stack.validate();
    if (upto_plane < 1 || upto_plane > stack.planes())
        throw PlaneIndexError("mplc_forward_partial: plane " + std::to_string(upto_plane) + " outside 1.." +
                              std::to_string(stack.planes()));
    require_same_grid(f.grid(), stack.grid(), "mplc_forward_partial");
    ComplexField out = f;
    if (upto_plane > 1) {
        Propagator hop(stack.grid(), stack.plane_spacing, wavelength);
        for (std::size_t p = 0; p + 1 < upto_plane; ++p) {
            apply_mask_in_place(out, stack.masks[p]);
            hop.forward_in_place(out);
        }
    }
    if (include_mask_p) apply_mask_in_place(out, stack.masks[upto_plane - 1]);
    return out;
}

Cascade::Cascade(const SamplingGrid& grid, double plane_spacing, double wavelength)
    : hop_(grid, plane_spacing, wavelength) {}

ComplexField Cascade::forward(const ComplexField& f, const PhaseMaskStack& stack) const {
    require_same_grid(f.grid(), stack.grid(), "mplc_forward");
    if (stack.plane_spacing != hop_.distance()) throw ParameterRange("Cascade: stack spacing differs from hop distance");
    ComplexField out = f;
    for (const auto& m : stack.masks) {
        apply_mask_in_place(out, m);
        hop_.forward_in_place(out);
    }
    return out;
}

std::vector<ComplexField> Cascade::forward(const std::vector<ComplexField>& fs, const PhaseMaskStack& stack) const {
    std::vector<ComplexField> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(forward(f, stack));
    return out;
}

} // namespace mplc
