#pragma once

namespace bonuswalk {

inline constexpr const char* kToolName = "bonuswalk";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace bonuswalk
