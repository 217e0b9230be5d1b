#include "mplc/geometry.hpp"

#include <cmath>
#include <numbers>

#include "mplc/errors.hpp"

namespace mplc {

namespace {
constexpr int max_scan = 100000;
}

double MPLCGeometry::lateral_step() const { return 2.0 * mirror_distance * std::tan(insertion_angle); }

void MPLCGeometry::validate() const {
    if (!(mirror_distance > 0.0)) throw ParameterRange("geometry: L must be positive");
    if (!(insertion_angle > 0.0 && insertion_angle < std::numbers::pi / 2))
        throw ParameterRange("geometry: insertion angle must lie in (0, pi/2)");
    if (planes < 1) throw ParameterRange("geometry: planes must be >= 1");
    if (!(slm_width > 0.0 && slm_height > 0.0 && pixel_pitch > 0.0 && wavelength > 0.0))
        throw ParameterRange("geometry: SLM dimensions, pitch and wavelength must be positive");
}

double beam_size_at_plane(double waist, double mirror_distance, double insertion_angle, double wavelength,
                          std::size_t p) {
    const double z0 = std::numbers::pi * waist * waist / wavelength;
    const double z = 2.0 * mirror_distance * static_cast<double>(p) / std::cos(insertion_angle);
    return waist * std::sqrt(1.0 + (z / z0) * (z / z0));
}

int count_reflections(const MPLCGeometry& g, double waist) {
    g.validate();
    if (!(waist > 0.0)) throw ParameterRange("count_reflections: waist must be positive");
    const double step = g.lateral_step();
    const double guard = static_cast<double>(g.guard_pixels) * g.pixel_pitch;
    auto radius = [&](int k) {
        return 1.5 * beam_size_at_plane(waist, g.mirror_distance, g.insertion_angle, g.wavelength,
                                        static_cast<std::size_t>(k - 1));
    };
    const double x1 = radius(1);
    auto fits = [&](int k) {
        const double r = radius(k);
        const double x = x1 + static_cast<double>(k - 1) * step;
        return x + r <= g.slm_width && r <= 0.5 * g.slm_height;
    };
    if (!fits(1)) return 0;
    for (int k = 2; k < max_scan; ++k) {
        if (!fits(k)) return k - 1;
        if (step < radius(k - 1) + radius(k) + guard) return -k;
    }
    return max_scan;
}

double min_insertion_angle(const MPLCGeometry& base, double waist) {
    MPLCGeometry g = base;
    auto ok = [&](double tau) {
        g.insertion_angle = tau;
        return count_reflections(g, waist) >= 2;
    };
    // Large angles push the second spot off the chip, so bracket from below
    // with a coarse scan before bisecting.
    constexpr double coarse = 1e-4;
    double lo = 0.0;
    double hi = -1.0;
    for (double tau = coarse; tau < std::numbers::pi / 4; tau += coarse) {
        if (ok(tau)) {
            hi = tau;
            break;
        }
        lo = tau;
    }
    if (hi < 0.0) return -1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::vector<ReflectionCell> reflection_table(const MPLCGeometry& base, const std::vector<double>& mirror_distances,
                                             const std::vector<double>& angles, const std::vector<double>& waists) {
    std::vector<ReflectionCell> out;
    out.reserve(mirror_distances.size() * angles.size() * waists.size());
    MPLCGeometry g = base;
    for (double L : mirror_distances) {
        g.mirror_distance = L;
        for (double tau : angles) {
            g.insertion_angle = tau;
            for (double w : waists) out.push_back({L, tau, w, count_reflections(g, w)});
        }
    }
    return out;
}

std::vector<MaxPlanesRow> max_planes_vs_L(const MPLCGeometry& base, const std::vector<double>& mirror_distances,
                                          const std::vector<double>& angles, const std::vector<double>& waists) {
    if (mirror_distances.empty() || angles.empty() || waists.empty())
        throw ParameterRange("max_planes_vs_L: empty scan range");
    std::vector<MaxPlanesRow> out;
    MPLCGeometry g = base;
    for (double L : mirror_distances) {
        g.mirror_distance = L;
        MaxPlanesRow row{L, 0, 0.0, 0.0};
        for (double tau : angles) {
            g.insertion_angle = tau;
            for (double w : waists) {
                const int n = count_reflections(g, w);
                if (n > row.max_reflections) row = {L, n, tau, w};
            }
        }
        out.push_back(row);
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

} // namespace mplc
