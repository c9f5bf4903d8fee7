#pragma once

namespace smoothrmf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smoothrmf
