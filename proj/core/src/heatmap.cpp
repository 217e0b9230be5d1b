#include "mplc/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "mplc/errors.hpp"

namespace mplc {

std::array<std::uint8_t, 3> fidelity_color(double value) {
    if (std::isnan(value)) return {0, 0, 0};
    const double v = std::clamp(value, 0.0, 1.0);
    auto lerp = [](double a, double b, double t) { return static_cast<std::uint8_t>(std::lround(a + (b - a) * t)); };
    if (v <= 0.5) {
        const double t = v / 0.5;
        return {lerp(0, 255, t), lerp(0, 255, t), lerp(139, 255, t)};
    }
    const double t = (v - 0.5) / 0.5;
    return {lerp(255, 139, t), lerp(255, 0, t), lerp(255, 0, t)};
}

std::string render_heatmap(const FidelityMap& map) {
    const std::size_t w = map.phis.size(), h = map.thetas.size();
    if (w == 0 || h == 0 || map.fidelity.size() != w * h) throw DimensionMismatch("render_heatmap: empty or ragged map");
    std::string out = "P6\n# config " + map.config_hash + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    out.reserve(out.size() + 3 * w * h);
    for (double f : map.fidelity)
        for (auto c : fidelity_color(f)) out.push_back(static_cast<char>(c));
    return out;
}

} // namespace mplc
