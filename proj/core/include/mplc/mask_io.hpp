#pragma once

#include <filesystem>
#include <iosfwd>

#include "mplc/propagation.hpp"

namespace mplc {

// "MPLM", u32 P, u32 nx, u32 ny, f64 pitch, f64 plane_spacing, then P planes
// of nx*ny f64 radians; little-endian, row-major. The grid origin is not
// stored: stacks are read back on a centred grid.
void write_stack(std::ostream& out, const PhaseMaskStack& stack);
PhaseMaskStack read_stack(std::istream& in);

void save_stack(const std::filesystem::path& path, const PhaseMaskStack& stack);
PhaseMaskStack load_stack(const std::filesystem::path& path);

} // namespace mplc
