#pragma once

// Locale-independent number formatting and parsing.

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <system_error>

namespace logsch {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// Parses the whole string as a double; throws std::invalid_argument.
inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc{} || r.ptr != last || s.empty()) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

/// Parses the whole string as a signed 64-bit integer; throws std::invalid_argument.
inline std::int64_t parse_int(const std::string& s) {
    std::int64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return v;
}

}  // namespace logsch
