#pragma once

namespace bhlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bhlab
