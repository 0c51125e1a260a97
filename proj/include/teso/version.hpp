#pragma once

namespace teso {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace teso
