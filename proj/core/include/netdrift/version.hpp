#pragma once

namespace netdrift {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace netdrift
