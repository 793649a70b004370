#pragma once

namespace kaclab {

inline constexpr const char* kVersion = "kaclab 0.1.0";

}  // namespace kaclab
