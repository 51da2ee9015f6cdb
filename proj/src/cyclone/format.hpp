#pragma once

#include <charconv>
#include <string>

namespace cyclone {

/// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// 17 significant digits (full double precision), locale-independent.
inline std::string format_double17(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Fixed decimals, for SVG geometry.
inline std::string format_fixed(double v, int precision) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

} // namespace cyclone
