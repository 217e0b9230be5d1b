#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "fft.hpp"
#include "mplc/alignment.hpp"
#include "mplc/errors.hpp"

namespace mplc {

namespace {

double dft_frequency(std::size_t k, std::size_t n, double d) {
    const auto kk = static_cast<long>(k), nn = static_cast<long>(n);
    return static_cast<double>(kk < (nn + 1) / 2 ? kk : kk - nn) / (static_cast<double>(n) * d);
}

// Positions are handled in units of the scan step, powers in units of the
// curve's range, so both fits see O(1) numbers.

struct GaussianModel : Eigen::DenseFunctor<double> {
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& y;
    GaussianModel(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys)
        : DenseFunctor(3, static_cast<int>(xs.size())), x(xs), y(ys) {}
    // p = (amplitude, centre, sigma)
    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = (x[i] - p[1]) / p[2];
            r[i] = p[0] * std::exp(-0.5 * u * u) - y[i];
        }
        return 0;
    }
    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = (x[i] - p[1]) / p[2];
            const double e = std::exp(-0.5 * u * u);
            j(i, 0) = e;
            j(i, 1) = p[0] * e * u / p[2];
            j(i, 2) = p[0] * e * u * u / p[2];
        }
        return 0;
    }
};

struct ErfModel : Eigen::DenseFunctor<double> {
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& y;
    ErfModel(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys)
        : DenseFunctor(4, static_cast<int>(xs.size())), x(xs), y(ys) {}
    // p = (offset, step, centre, sigma);  y = a + b erf((x - c) / (sqrt2 sigma))
    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            r[i] = p[0] + p[1] * std::erf((x[i] - p[2]) / (std::numbers::sqrt2 * p[3])) - y[i];
        return 0;
    }
    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        const double k = std::numbers::sqrt2 / std::sqrt(std::numbers::pi);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = (x[i] - p[2]) / p[3];
            const double g = p[1] * k * std::exp(-0.5 * u * u);
            j(i, 0) = 1.0;
            j(i, 1) = std::erf(u / std::numbers::sqrt2);
            j(i, 2) = -g / p[3];
            j(i, 3) = -g * u / p[3];
        }
        return 0;
    }
};

template <typename Model>
Eigen::VectorXd fit(Model& model, Eigen::VectorXd p) {
    Eigen::LevenbergMarquardt<Model> lm(model);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.setMaxfev(2000);
    lm.minimize(p);
    return p;
}

} // namespace

PhaseMask random_window_phase(const SamplingGrid& grid, const RandomWindowSpec& spec) {
    if (!(spec.counts_per_2pi > 0.0)) throw ParameterRange("random window: counts_per_2pi must be positive");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> counts(spec.mean_counts, spec.sd_counts);
    PhaseMask out(grid);
    for (auto& v : out.phase()) {
        const double c = std::max(0.0, std::round(counts(rng)));
        v = 2.0 * std::numbers::pi * c / spec.counts_per_2pi;
    }
    return out;
}

FarFieldAperture nominal_aperture(const ComplexField& f, double widths) {
    const auto& g = f.grid();
    const auto spec = unitary_spectrum(f);
    double w = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            const double p = std::norm(spec[g.index(ix, iy)]);
            w += p;
            mx += p * dft_frequency(ix, g.nx(), g.pitch());
            my += p * dft_frequency(iy, g.ny(), g.pitch());
        }
    if (!(w > 0.0)) throw DegenerateField("nominal_aperture: zero field");
    mx /= w;
    my /= w;
    double var = 0.0;
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            const double p = std::norm(spec[g.index(ix, iy)]);
            const double dx = dft_frequency(ix, g.nx(), g.pitch()) - mx;
            const double dy = dft_frequency(iy, g.ny(), g.pitch()) - my;
            var += p * (dx * dx + dy * dy);
        }
    // per-axis variance is half the radial second moment; 1/e^2 width = 2 sigma
    const double sigma = std::sqrt(0.5 * var / w);
    return {mx, my, widths * 2.0 * sigma};
}

double far_field_power(const ComplexField& f, const FarFieldAperture& a) {
    const auto& g = f.grid();
    const auto spec = unitary_spectrum(f);
    double acc = 0.0;
    const double r2 = a.radius * a.radius;
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
        const double dy = dft_frequency(iy, g.ny(), g.pitch()) - a.fy;
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            const double dx = dft_frequency(ix, g.nx(), g.pitch()) - a.fx;
            if (dx * dx + dy * dy <= r2) acc += std::norm(spec[g.index(ix, iy)]);
        }
    }
    return acc * g.cell_area();
}

std::vector<double> edge_positions(const SamplingGrid& grid, ScanAxis axis, double lo, double hi) {
    std::vector<double> out;
    const std::size_t n = axis == ScanAxis::y ? grid.ny() : grid.nx();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double c = (axis == ScanAxis::y ? grid.y(i) : grid.x(i)) + 0.5 * grid.pitch();
        if (c >= lo && c <= hi) out.push_back(c);
    }
    return out;
}

KnifeScan knife_edge_scan(const ComplexField& input, const PhaseMaskStack& stack, double wavelength,
                          std::size_t plane, const std::vector<double>& positions, const RandomWindowSpec& window,
                          ScanAxis axis) {
    stack.validate();
    if (plane < 1 || plane > stack.planes()) throw PlaneIndexError("knife_edge_scan: plane out of range");
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (!(positions[i] > positions[i - 1])) throw ParameterRange("knife_edge_scan: positions must increase");

    const auto& g = stack.grid();
    const ComplexField at_plane = mplc_forward_partial(input, stack, wavelength, plane, false);
    if (window.realizations < 1) throw ParameterRange("knife_edge_scan: need at least one window realization");
    std::vector<PhaseMask> noise;
    for (std::size_t r = 0; r < window.realizations; ++r) {
        RandomWindowSpec one = window;
        one.seed = window.seed + r;
        noise.push_back(random_window_phase(g, one));
    }
    const Propagator hop(g, stack.plane_spacing, wavelength);

    auto finish = [&](ComplexField f) {
        hop.forward_in_place(f);
        for (std::size_t p = plane; p < stack.planes(); ++p) {
            apply_mask_in_place(f, stack.masks[p]);
            hop.forward_in_place(f);
        }
        return f;
    };

    const FarFieldAperture aperture = nominal_aperture(finish(at_plane));

    KnifeScan scan;
    scan.positions = positions;
    scan.plane_index = plane;
    scan.axis = axis;
    scan.powers.reserve(positions.size());
    scan.powers_upper.reserve(positions.size());
    const double share = 1.0 / static_cast<double>(noise.size());
    for (double edge : positions) {
        double lo = 0.0, hi = 0.0;
        for (const auto& n : noise) {
            PhaseMask lower(g), upper(g);
            for (std::size_t iy = 0; iy < g.ny(); ++iy)
                for (std::size_t ix = 0; ix < g.nx(); ++ix) {
                    const double c = axis == ScanAxis::y ? g.y(iy) : g.x(ix);
                    (c < edge ? lower : upper)(ix, iy) = n(ix, iy);
                }
            lo += share * far_field_power(finish(apply_mask(at_plane, lower)), aperture);
            hi += share * far_field_power(finish(apply_mask(at_plane, upper)), aperture);
        }
        scan.powers.push_back(lo);
        scan.powers_upper.push_back(hi);
    }
    return scan;
}

BeamEstimate estimate_beam_params(const KnifeScan& scan) {
    const auto n = scan.positions.size();
    if (n < 8 || scan.powers.size() != n) throw FitFailure("estimate_beam_params: need at least 8 scan positions");
    if (!scan.powers_upper.empty() && scan.powers_upper.size() != n)
        throw FitFailure("estimate_beam_params: upper-window curve has the wrong length");

    // Light the window edge itself diffracts out of the aperture is the same
    // for both window sides, so the difference of the two curves is a clean
    // knife-edge transition.
    std::vector<double> curve = scan.powers;
    for (std::size_t i = 0; i < scan.powers_upper.size(); ++i) curve[i] -= scan.powers_upper[i];
    const double x0 = scan.positions.front();
    const double h = (scan.positions.back() - x0) / static_cast<double>(n - 1);
    if (!(h > 0.0)) throw FitFailure("estimate_beam_params: positions must increase");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(scan.positions[i] - (x0 + h * static_cast<double>(i))) > 1e-6 * h)
            throw FitFailure("estimate_beam_params: positions must be evenly spaced");

    const auto [pmin, pmax] = std::minmax_element(curve.begin(), curve.end());
    const double range = *pmax - *pmin;
    const double level = std::max(std::abs(*pmax), std::abs(*pmin));
    if (!(range > 1e-9 * level) || !(range > 0.0)) throw FitFailure("estimate_beam_params: flat power curve");
    const double sign = curve.back() >= curve.front() ? 1.0 : -1.0;

    Eigen::VectorXd x(static_cast<Eigen::Index>(n)), y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] = static_cast<double>(i);
        y[static_cast<Eigen::Index>(i)] = (curve[i] - *pmin) / range;
    }

    // 5-point Savitzky-Golay first derivative (quadratic, unit spacing).
    Eigen::VectorXd dx(static_cast<Eigen::Index>(n - 4)), dy(static_cast<Eigen::Index>(n - 4));
    for (Eigen::Index i = 2; i + 2 < static_cast<Eigen::Index>(n); ++i) {
        dx[i - 2] = x[i];
        dy[i - 2] = sign * (-2.0 * y[i - 2] - y[i - 1] + y[i + 1] + 2.0 * y[i + 2]) / 10.0;
    }
    Eigen::Index peak = 0;
    const double amp = dy.maxCoeff(&peak);
    if (!(amp > 0.0)) throw FitFailure("estimate_beam_params: no transition in the power curve");
    double wsum = 0.0, var = 0.0;
    for (Eigen::Index i = 0; i < dy.size(); ++i)
        if (dy[i] > 0.0) {
            wsum += dy[i];
            var += dy[i] * (dx[i] - dx[peak]) * (dx[i] - dx[peak]);
        }
    Eigen::VectorXd g(3);
    g << amp, dx[peak], std::max(0.5, std::sqrt(var / wsum));
    GaussianModel gm(dx, dy);
    g = fit(gm, g);
    if (!(std::abs(g[2]) > 0.0) || !std::isfinite(g[1])) throw FitFailure("estimate_beam_params: Gaussian fit failed");

    // The derivative is the line intensity smoothed by the SG kernel; polish
    // centre and width on the raw curve.
    const double sigma0 = std::abs(g[2]);
    Eigen::VectorXd e(4);
    e << 0.5, sign * 0.5, g[1], sigma0;
    ErfModel em(x, y);
    e = fit(em, e);
    const double sigma = std::abs(e[3]);
    const double center = e[2];

    Eigen::VectorXd resid(x.size());
    em(e, resid);
    const double rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
    if (!std::isfinite(center) || !std::isfinite(sigma) || sigma <= 0.0 || rms > 0.1 || center < -0.5 ||
        center > static_cast<double>(n) - 0.5 || sigma > static_cast<double>(n))
        throw FitFailure("estimate_beam_params: power curve is not a knife-edge transition (rms residual " +
                         std::to_string(rms) + ")");

    return {x0 + center * h, 2.0 * sigma * h};
}

} // namespace mplc
