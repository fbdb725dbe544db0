#pragma once

namespace lagtime {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lagtime
