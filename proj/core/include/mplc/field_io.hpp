#pragma once

#include <filesystem>
#include <iosfwd>

#include "mplc/field.hpp"

namespace mplc {

// Binary field dump: "MPLF", u32 nx, u32 ny, f64 pitch, f64 origin_x,
// f64 origin_y, then nx*ny (re, im) f64 pairs, all little-endian, row-major.
void write_field(std::ostream& out, const ComplexField& f);
ComplexField read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const ComplexField& f);
ComplexField load_field(const std::filesystem::path& path);

} // namespace mplc
