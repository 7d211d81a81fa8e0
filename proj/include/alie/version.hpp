#pragma once

namespace alie {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace alie
