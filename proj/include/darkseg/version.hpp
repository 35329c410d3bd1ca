#pragma once

namespace darkseg {

inline constexpr const char * kVersion = "0.1.0";

} // namespace darkseg
