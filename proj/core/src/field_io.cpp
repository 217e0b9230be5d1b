#include "mplc/field_io.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace mplc {

void write_field(std::ostream& out, const ComplexField& f) {
    const auto& g = f.grid();
    out.write("MPLF", 4);
    detail::put_u32(out, static_cast<std::uint32_t>(g.nx()));
    detail::put_u32(out, static_cast<std::uint32_t>(g.ny()));
    detail::put_f64(out, g.pitch());
    detail::put_f64(out, g.origin().x);
    detail::put_f64(out, g.origin().y);
    for (const auto& v : f.values()) {
        detail::put_f64(out, v.real());
        detail::put_f64(out, v.imag());
    }
    if (!out) throw FormatError("write_field: stream error");
}

ComplexField read_field(std::istream& in) {
    detail::expect_magic(in, "MPLF");
    const auto nx = detail::get_u32(in);
    const auto ny = detail::get_u32(in);
    const double pitch = detail::get_f64(in);
    const double ox = detail::get_f64(in);
    const double oy = detail::get_f64(in);
    SamplingGrid grid(nx, ny, pitch, {ox, oy});
    std::vector<cplx> values(grid.size());
    for (auto& v : values) {
        const double re = detail::get_f64(in);
        const double im = detail::get_f64(in);
        v = {re, im};
    }
    return ComplexField(grid, std::move(values));
}

void save_field(const std::filesystem::path& path, const ComplexField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string());
    write_field(out, f);
}

ComplexField load_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return read_field(in);
}

} // namespace mplc
