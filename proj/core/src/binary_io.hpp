#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string_view>

#include "mplc/errors.hpp"

namespace mplc::detail {

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    bits = to_little(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

inline std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("truncated stream (u32)");
    return to_little(v);
}

inline double get_f64(std::istream& in) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw FormatError("truncated stream (f64)");
    return std::bit_cast<double>(to_little(bits));
}

inline void expect_magic(std::istream& in, std::string_view magic) {
    char buf[4] = {};
    if (!in.read(buf, 4) || std::string_view(buf, 4) != magic)
        throw FormatError("bad magic, expected " + std::string(magic));
}

} // namespace mplc::detail
