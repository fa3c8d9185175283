#pragma once

namespace hjs {
inline constexpr const char* kSoftwareName = "hjs-lab";
inline constexpr const char* kVersion = "0.1.0";
}  // namespace hjs
