#pragma once

namespace yule {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace yule
