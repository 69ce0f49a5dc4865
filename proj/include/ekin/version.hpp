#pragma once

namespace ekin {

inline constexpr const char* version = "0.1.0";

} // namespace ekin
