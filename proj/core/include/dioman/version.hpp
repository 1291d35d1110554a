#pragma once

namespace dioman {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dioman
