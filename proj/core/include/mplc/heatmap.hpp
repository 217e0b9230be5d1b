#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mplc/fidelity_map.hpp"

namespace mplc {

/// Linear three-stop colormap: 0 -> (0, 0, 139), 0.5 -> white,
/// 1 -> (139, 0, 0). Values are clamped to [0, 1]; NaN is black.
std::array<std::uint8_t, 3> fidelity_color(double value);

/// Binary PPM (P6), one pixel per cell: row i is theta i (top row is the
/// first theta), column j is phi j. The header carries the config hash as
/// a comment.
std::string render_heatmap(const FidelityMap& map);

} // namespace mplc
