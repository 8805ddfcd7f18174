#pragma once

namespace exlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace exlab
