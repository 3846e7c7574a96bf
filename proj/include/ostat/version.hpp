#ifndef OSTAT_VERSION_HPP
#define OSTAT_VERSION_HPP

#include <string_view>

namespace ostat {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace ostat

#endif  // OSTAT_VERSION_HPP
