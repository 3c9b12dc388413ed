#pragma once

namespace lifecycle {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lifecycle
