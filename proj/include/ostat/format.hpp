#ifndef OSTAT_FORMAT_HPP
#define OSTAT_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace ostat {

// Shortest round-trip decimal form; infinities as the literals "-inf"/"+inf".
inline std::string format_double(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "+inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

}  // namespace ostat

#endif  // OSTAT_FORMAT_HPP
