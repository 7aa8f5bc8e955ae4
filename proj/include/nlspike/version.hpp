#pragma once

namespace nlspike {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlspike
