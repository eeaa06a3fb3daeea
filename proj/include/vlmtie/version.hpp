#pragma once

namespace vlmtie {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "vlmtie";

}  // namespace vlmtie
