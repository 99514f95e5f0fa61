#pragma once

namespace ribaucour {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ribaucour
