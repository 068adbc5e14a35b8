#ifndef UWOC_FORMAT_HPP
#define UWOC_FORMAT_HPP

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace uwoc {

/// Shortest decimal string that round-trips to the exact double value
/// (canonical float formatting for all emitted files).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
    return v;
}

}  // namespace uwoc

#endif
