#pragma once

namespace dlcda {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dlcda
