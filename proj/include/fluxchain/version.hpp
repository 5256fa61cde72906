#pragma once

namespace fluxchain {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fluxchain
