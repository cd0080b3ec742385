#pragma once

namespace bomdiff {

inline constexpr const char* kToolName = "bomdiff";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace bomdiff
