#pragma once

#include <charconv>
#include <string>

namespace noether {

/// Locale-independent decimal rendering with 17 significant digits,
/// enough to round-trip any double exactly.
inline std::string format_sig17(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

/// Shorter rendering for labels and log lines (still locale-independent).
inline std::string format_sig6(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

}  // namespace noether
