#pragma once

namespace relulab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace relulab
