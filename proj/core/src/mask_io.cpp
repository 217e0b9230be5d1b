#include "mplc/mask_io.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace mplc {

void write_stack(std::ostream& out, const PhaseMaskStack& stack) {
    stack.validate();
    const auto& g = stack.grid();
    out.write("MPLM", 4);
    detail::put_u32(out, static_cast<std::uint32_t>(stack.planes()));
    detail::put_u32(out, static_cast<std::uint32_t>(g.nx()));
    detail::put_u32(out, static_cast<std::uint32_t>(g.ny()));
    detail::put_f64(out, g.pitch());
    detail::put_f64(out, stack.plane_spacing);
    for (const auto& m : stack.masks)
        for (double v : m.phase()) detail::put_f64(out, v);
    if (!out) throw FormatError("write_stack: stream error");
}

PhaseMaskStack read_stack(std::istream& in) {
    detail::expect_magic(in, "MPLM");
    const auto planes = detail::get_u32(in);
    const auto nx = detail::get_u32(in);
    const auto ny = detail::get_u32(in);
    const double pitch = detail::get_f64(in);
    const double spacing = detail::get_f64(in);
    if (planes == 0) throw FormatError("read_stack: zero planes");
    const auto grid = SamplingGrid::centered(nx, ny, pitch);
    PhaseMaskStack stack;
    stack.plane_spacing = spacing;
    stack.masks.reserve(planes);
    for (std::uint32_t p = 0; p < planes; ++p) {
        std::vector<double> phase(grid.size());
        for (auto& v : phase) v = detail::get_f64(in);
        stack.masks.emplace_back(grid, std::move(phase));
    }
    stack.validate();
    return stack;
}

void save_stack(const std::filesystem::path& path, const PhaseMaskStack& stack) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string());
    write_stack(out, stack);
}

PhaseMaskStack load_stack(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_stack(in);
}

} // namespace mplc
