#pragma once

namespace pepca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pepca
